#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "toricale/surface.hpp"

using namespace toricale;

namespace {

using Entry = std::vector<std::pair<std::pair<int, int>, long>>;

BiPolyS make(const Entry& e, const std::pair<std::pair<int, int>, Rational>* extra = nullptr) {
    BiPolyS p;
    for (const auto& [k, v] : e) p[k] = v;
    if (extra) p[extra->first] = extra->second;
    return p;
}

} // namespace

TEST_CASE("surface data") {
    auto s = surface_data(7, 2, 3);
    CHECK(s.kind == SurfaceKind::orthotoric);
    CHECK(s.lambda == 294);
    Poly<Rational> x = Poly<Rational>::linear_root(Rational(0));
    CHECK(s.theta2 == Rational(2) * x * Poly<Rational>::linear_root(Rational(-49)));
    CHECK(s.theta2 == s.ansatz.exact.f_ell);
    CHECK(s.theta1 == Rational(2) * Poly<Rational>::linear_root(Rational(-14)) * Poly<Rational>::linear_root(Rational(-21)));

    auto c = surface_data(5, 1, 1);
    CHECK(c.kind == SurfaceKind::calabi);
    CHECK(c.lambda == 1);
    CHECK(surface_data(3, 2, 2).lambda == Rational(1, 16));
    CHECK(surface_data(7, 3, 2).a1 == 2);

    CHECK_THROWS_AS(surface_data(4, 2, 2), InvalidInput);
    CHECK_THROWS_AS(surface_data(0, 1, 1), InvalidInput);
}

TEST_CASE("closed form Gram equals the general one") {
    auto s = surface_data(7, 2, 3);
    auto H = orthotoric_gram(Rational(-18), Rational(5), s);
    CHECK(H[0][0] == Rational(564, 23));
    CHECK(H[0][1] == Rational(-9600, 23));
    CHECK(H[1][1] == Rational(175560, 23));
    for (int k = 1; k <= 5; ++k) {
        Rational xi1(-21 * 6 + 7 * k, 6), xi2(k * k, 3);
        xi1.canonicalize();
        xi2.canonicalize();
        CHECK(orthotoric_gram(xi1, xi2, s) == vertical_gram(std::vector<Rational>{xi1, xi2}, s.ansatz));
    }
    CHECK_THROWS_AS(orthotoric_gram(Rational(-30), Rational(5), s), DomainError);
}

TEST_CASE("dual momenta at a point") {
    auto s = surface_data(7, 2, 3);
    auto d = bochner_dual(Rational(-18), Rational(5), s);
    CHECK(d.s1 == Rational(1, 23));
    CHECK(d.s2 == Rational(-13, 46));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(d.Htilde[i][j] / (d.factor * d.factor) == d.H[i][j]);
}

TEST_CASE("dual Gram entries against the symbolic oracle") {
    // tests/oracle/oracle.py, orthotoric_dual(7, 2, 3).
    auto pr = polynomiality_check(surface_data(7, 2, 3));
    REQUIRE(pr.pass);
    REQUIRE(pr.entries.size() == 3);
    CHECK(pr.entries[0] == make({{{1, 1}, 4}, {{2, 0}, 84}, {{2, 1}, 28}, {{3, 0}, -588}}));
    std::pair<std::pair<int, int>, Rational> half{{0, 0}, Rational(-1, 2)};
    CHECK(pr.entries[1] == make({{{0, 2}, 2}, {{1, 0}, -7}, {{1, 2}, 28}, {{2, 0}, -294}, {{2, 1}, -588}}, &half));
    CHECK(pr.entries[2] == make({{{0, 0}, 21},
                                 {{0, 1}, -7},
                                 {{0, 2}, -84},
                                 {{0, 3}, 28},
                                 {{1, 0}, -147},
                                 {{1, 1}, -588},
                                 {{1, 2}, -588}}));
    CHECK(pr.lower_degree_fails);
}

TEST_CASE("polynomiality on several surfaces") {
    for (auto [a0, a1, a2] : std::vector<std::tuple<int, int, int>>{{5, 2, 3}, {3, 1, 2}, {11, 3, 5}, {5, 1, 1}, {3, 1, 1}}) {
        auto pr = polynomiality_check(surface_data(a0, a1, a2));
        INFO(a0, a1, a2);
        CHECK(pr.pass);
        for (const auto& e : pr.entries)
            for (const auto& [k, v] : e) CHECK(k.first + k.second <= 3);
    }
}

TEST_CASE("dual polytope normals") {
    auto dp = dual_polytope(surface_data(7, 2, 3));
    CHECK(dp.boundary_ok);
    CHECK(dp.weight_pattern);
    CHECK(dp.normal_scale == Rational(1, 294));
    REQUIRE(dp.facets.size() == 3);
    for (const auto& f : dp.facets) CHECK(f.boundary_ok);

    auto cp = dual_polytope(surface_data(5, 1, 1));
    CHECK(cp.boundary_ok);
    CHECK(cp.weight_pattern);
    CHECK(cp.normal_scale == Rational(1, 25));
}

TEST_CASE("conformal factor") {
    for (auto [a0, a1, a2] : std::vector<std::tuple<int, int, int>>{{7, 2, 3}, {5, 1, 1}}) {
        auto s = surface_data(a0, a1, a2);
        auto cr = conformal_factor_check(s, 40);
        INFO(a0);
        CHECK(cr.pass);
        CHECK(cr.conformal_residual <= 1e-12);
        CHECK(cr.inside_simplex);
        CHECK(cr.min_factor > 0);
    }
    auto o = conformal_factor_check(surface_data(7, 2, 3), 40);
    CHECK(o.max_momentum_form < 0);
}

TEST_CASE("json layout") {
    auto s = surface_data(7, 2, 3);
    auto j = to_json(s, dual_polytope(s), polynomiality_check(s), conformal_factor_check(s, 10));
    CHECK(j["kind"] == "orthotoric");
    CHECK(j["lambda_a"] == "294/1");
    CHECK(j["polynomiality"]["entries"]["11"].size() == 4);
}
