#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "toricale/verify.hpp"

using namespace toricale;

TEST_CASE("halton sequence") {
    CHECK(halton(1, 2) == doctest::Approx(0.5));
    CHECK(halton(2, 2) == doctest::Approx(0.25));
    CHECK(halton(3, 2) == doctest::Approx(0.75));
    CHECK(halton(1, 3) == doctest::Approx(1.0 / 3));
    CHECK(halton(4, 3) == doctest::Approx(4.0 / 9));
}

TEST_CASE("sample points are interior and reproducible") {
    auto d = build_ansatz(7, {1, 2, 2});
    auto g = xi_grid(d, 6, 3);
    CHECK(g.size() == 36);
    for (const auto& p : g) {
        CHECK(in_domain(p, d));
        CHECK(boundary_distance(p, d) > 0);
    }
    auto h1 = halton_points(d, 50, 9), h2 = halton_points(d, 50, 9);
    REQUIRE(h1.size() == 50);
    for (std::size_t i = 0; i < h1.size(); ++i) CHECK(h1[i].xi == h2[i].xi);
}

TEST_CASE("scalar curvature vanishes") {
    VerifyConfig cfg;
    cfg.grid_per_interval = 8;
    for (auto [a0, w] : std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>>{
             {7, {2, 3}}, {5, {2, 3}}, {5, {1, 1}}, {7, {1, 1, 1}}}) {
        auto rep = abreu_check(build_ansatz(a0, w), cfg);
        INFO(rep.check, " ", a0);
        CHECK(rep.pass);
        CHECK(rep.max_residual <= 1e-5);
    }
    auto flat = abreu_check(build_ansatz(5, {2, 3}, true), cfg);
    CHECK(flat.pass);
    CHECK(flat.max_residual <= 1e-8);
    CHECK(flat.tolerance == cfg.flat_noise_tol);
}

TEST_CASE("a perturbed profile is not scalar-flat") {
    auto d = build_ansatz(7, {2, 3});
    // Change the quadratic coefficient of F_l only.
    d.ext.f_ell = d.ext.f_ell + Poly<long double>(std::vector<long double>{0, 0, 0.5L});
    d.num.f_ell = d.num.f_ell + Poly<double>(std::vector<double>{0, 0, 0.5});
    VerifyConfig cfg;
    cfg.grid_per_interval = 5;
    auto rep = abreu_check(d, cfg);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual > 1e-3);
}

TEST_CASE("stencil step") {
    auto d = build_ansatz(7, {2, 3});
    XiPoint pt{{-18, 5}, {{}, {}}};
    CHECK(std::abs(abreu_scalar(pt, d)) < 1e-6);
    CHECK(std::abs(abreu_scalar(pt, d, 1e-3)) < 1e-6);
    // The stencil would leave the domain.
    CHECK_THROWS(abreu_scalar(pt, d, 0.5));
}

TEST_CASE("boundary behaviour per facet") {
    auto d = build_ansatz(5, {2, 3});
    auto rep = boundary_check(d);
    CHECK(rep.pass);
    for (std::size_t f = 0; f < ansatz_polytope(d).facets.size(); ++f) {
        auto r = boundary_check_facet(d, f);
        INFO(r.label);
        CHECK(std::abs(r.slope - 1) <= 0.2);
        CHECK(r.derivative_error <= 0.05);
    }
    CHECK(boundary_check(build_ansatz(7, {1, 1, 2})).pass);
}

TEST_CASE("positivity, determinant and hessian") {
    auto d = build_ansatz(7, {2, 3});
    CHECK(positivity_check(d).pass);
    CHECK(positivity_check(build_ansatz(7, {2, 3}, true)).pass);
    CHECK(det_factorization(d).pass);
    auto h = hessian_consistency(d);
    CHECK(h.pass);
    CHECK(h.points >= 10);
    CHECK(h.max_residual <= 1e-6);
}

TEST_CASE("vandermonde identities") {
    CHECK(vandermonde_identities({Rational(-15), Rational(-10)}));
    CHECK(vandermonde_identities({Rational(-7, 3), Rational(1, 2), Rational(5), Rational(11, 4)}));
    CHECK(vandermonde_check(build_ansatz(11, {1, 2, 3})).pass);
}

TEST_CASE("lattice index report") {
    auto r = lattice_check(group_weights(5, {2, 3}));
    CHECK(r.pass);
    CHECK(r.details["index"] == "30");
    CHECK(r.details["gcd_of_maximal_minors"] == "30");
    auto s = lattice_check(group_weights(7, {2, 2, 3}));
    CHECK(s.details["index"] == "42");
}

TEST_CASE("single weight scalar polynomial") {
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= 6; ++r) CHECK(calabi_scalar_residual(Rational(r), n).empty());
}

TEST_CASE("reports are deterministic") {
    auto d = build_ansatz(7, {2, 3});
    VerifyConfig cfg;
    cfg.grid_per_interval = 5;
    auto a = to_json(abreu_check(d, cfg)).dump();
    auto b = to_json(abreu_check(d, cfg)).dump();
    CHECK(a == b);
    CHECK(to_json(abreu_check(d, cfg))["seconds"] == 0.0);
}
