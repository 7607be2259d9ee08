#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "toricale/ansatz.hpp"

using namespace toricale;

namespace {

// Reference values from tests/oracle/oracle.py (sympy).
struct Reference {
    std::int64_t a0;
    std::vector<std::int64_t> w;
    std::vector<std::string> alpha, r, p, f;
    std::string b0, c0, lin_a;
    bool ricci_flat;
};

const std::vector<Reference> kReference = {
    {5, {2, 3}, {"-15", "-10"}, {"1/5", "1/5"}, {"300", "50", "2"}, {"0", "50", "2"}, "25", "1/25", "0", true},
    {7, {2, 3}, {"-21", "-14"}, {"1/7", "1/7"}, {"588", "70", "2"}, {"0", "98", "2"}, "49", "1/49", "28", false},
    {7, {1, 1, 1}, {"-7"}, {"1"}, {"686", "294", "42", "2"}, {"0", "686", "42", "2"}, "343", "1/7", "392", false},
    {11, {1, 2, 3}, {"-66", "-33", "-22"}, {"1/1452", "1/363", "1/484"}, {"95832", "8712", "242", "2"},
     {"0", "15972", "242", "2"}, "7986", "1/7986", "7260", false},
    {7, {1, 1, 2}, {"-14", "-7"}, {"1/7", "1/7"}, {"2744", "784", "70", "2"}, {"0", "1372", "70", "2"}, "686",
     "1/49", "588", false},
    {9, {2, 3, 5}, {"-135", "-90", "-54"}, {"1/3645", "1/1620", "1/2916"}, {"1312200", "48600", "558", "2"},
     {"0", "43740", "558", "2"}, "21870", "1/21870", "-4860", false},
};

Rational q(const std::string& s) {
    Rational v(s);
    v.canonicalize();
    return v;
}

void check_poly(const Poly<Rational>& p, const std::vector<std::string>& c) {
    CHECK(p.degree() == static_cast<int>(c.size()) - 1);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(p.coeff(k) == q(c[k]));
}

} // namespace

TEST_CASE("exact coefficients against the oracle") {
    for (const auto& ref : kReference) {
        INFO(ref.a0);
        auto d = build_ansatz(ref.a0, ref.w);
        REQUIRE(d.ell() == ref.alpha.size());
        for (std::size_t j = 0; j < d.ell(); ++j) {
            CHECK(d.exact.alpha[j] == q(ref.alpha[j]));
            CHECK(d.exact.r[j] == q(ref.r[j]));
            CHECK(d.exact.kappa[j] == d.c / (d.exact.r[j] * d.weights.a[j]));
        }
        check_poly(d.exact.p, ref.p);
        check_poly(d.exact.f_ell, ref.f);
        CHECK(d.b0 == q(ref.b0));
        CHECK(d.c0 == q(ref.c0));
        CHECK(d.exact.lin_a == q(ref.lin_a));
        CHECK(d.ricci_flat == ref.ricci_flat);
    }
}

TEST_CASE("structural identities") {
    for (const auto& ref : kReference) {
        auto d = build_ansatz(ref.a0, ref.w);
        const auto& E = d.exact;
        CHECK(E.f_ell(Rational(0)) == 0);
        CHECK(E.f_ell.derivative()(Rational(0)) == 2 * d.b0);
        CHECK(E.f_ell.derivative().derivative() == E.p.derivative().derivative());
        CHECK(d.c0 == c0_from_roots(d));
        auto prod = r_product_form(d.weights);
        for (std::size_t j = 0; j < d.ell(); ++j) CHECK(prod[j] * E.r[j] == 1);
        CHECK(d.ricci_flat == (2 * d.b0 == E.p.derivative()(Rational(0))));
        for (std::size_t j = 0; j + 1 < d.ell(); ++j) CHECK(E.alpha[j] < E.alpha[j + 1]);
        CHECK(E.alpha.back() < 0);
    }
}

TEST_CASE("flat data") {
    auto d = build_ansatz(5, {1, 1}, true);
    CHECK(d.flat);
    Poly<Rational> expect = Rational(2) * Poly<Rational>::linear_root(-5) * Poly<Rational>::linear_root(-5);
    CHECK(d.exact.f_ell == expect);
    CHECK(d.exact.p == expect);
}

TEST_CASE("invalid weights") {
    CHECK_THROWS_AS(build_ansatz(4, {2, 2}), InvalidInput);
    CHECK_THROWS_AS(build_ansatz(0, {1, 1}), InvalidInput);
    CHECK_THROWS_AS(build_ansatz(3, {}), InvalidInput);
}

TEST_CASE("coordinate changes") {
    auto d = build_ansatz(5, {2, 3});
    std::vector<Rational> xi{-12, 5};
    auto s = xi_to_sigma(xi);
    CHECK(s == std::vector<Rational>{-7, -60});
    auto back = sigma_to_xi(std::vector<double>{-7, -60}, d);
    CHECK(back[0] == doctest::Approx(-12));
    CHECK(back[1] == doctest::Approx(5));

    auto x = xi_to_x(xi, d);
    CHECK(x[0] == Rational(4, 5));
    CHECK(x[1] == Rational(3, 5));
    CHECK(sigma_to_x(s, d) == x);
    CHECK(x_to_sigma(x, d) == s);
}

TEST_CASE("sum and product forms agree at rational points") {
    auto d = build_ansatz(11, {1, 2, 3});
    for (int k = 1; k <= 5; ++k) {
        std::vector<Rational> xi{Rational(-66 + k, 1), Rational(-33 + k, 2), Rational(k * 7, 3)};
        for (auto& v : xi) v.canonicalize();
        CHECK(sigma_to_x(xi_to_sigma(xi), d) == xi_to_x(xi, d));
    }
}

TEST_CASE("fiber coordinates") {
    auto xt = x_to_xtilde(std::vector<double>{2}, std::vector<std::vector<double>>{{0.25}});
    REQUIRE(xt.size() == 2);
    CHECK(xt[0] == doctest::Approx(1.5));
    CHECK(xt[1] == doctest::Approx(0.5));

    std::vector<double> x;
    std::vector<std::vector<double>> fib;
    xtilde_to_x(xt, std::vector<int>{1}, x, fib);
    CHECK(x[0] == doctest::Approx(2));
    CHECK(fib[0][0] == doctest::Approx(0.25));
}

TEST_CASE("momentum round trip and positive Gram") {
    auto d = build_ansatz(7, {2, 2, 3});
    XiPoint pt{{-18.0, 5.0}, {{0.3}, {}}};
    CHECK(in_domain(pt, d));
    auto y = momentum_coords(pt, d);
    auto back = point_from_momentum(y, d);
    CHECK(back.xi[0] == doctest::Approx(-18));
    CHECK(back.xi[1] == doctest::Approx(5));
    CHECK(back.fibers[0][0] == doctest::Approx(0.3));
    Eigen::MatrixXd G = full_gram(pt, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    CHECK(es.eigenvalues().minCoeff() > 0);

    XiPoint outside{{-30.0, 5.0}, {{0.3}, {}}};
    CHECK_FALSE(in_domain(outside, d));
    CHECK_THROWS_AS(require_domain(outside, d), DomainError);
}

TEST_CASE("potential generates the metric") {
    // grad H in x coordinates differs from G^{-1} x by a constant vector.
    auto d = build_ansatz(7, {2, 3});
    auto grad_x = [&](std::vector<double> xi) {
        const double h = 1e-5;
        auto x = xi_to_x(xi, d);
        // d xi / d x through the Jacobian of sigma.
        Eigen::Matrix2d J;
        for (int k = 0; k < 2; ++k) {
            auto p = xi, m = xi;
            p[k] += h;
            m[k] -= h;
            auto xp = xi_to_x(p, d), xm = xi_to_x(m, d);
            for (int j = 0; j < 2; ++j) J(j, k) = (xp[j] - xm[j]) / (2 * h);
        }
        Eigen::Vector2d dH;
        for (int k = 0; k < 2; ++k) {
            auto p = xi, m = xi;
            p[k] += h;
            m[k] -= h;
            dH(k) = (kahler_potential(p, d) - kahler_potential(m, d)) / (2 * h);
        }
        Eigen::Vector2d g = J.transpose().inverse() * dH;
        XiPoint pt{xi, {{}, {}}};
        Eigen::MatrixXd G = full_gram(pt, d);
        Eigen::Vector2d xv(x[0], x[1]);
        return Eigen::Vector2d(G * g - xv);
    };
    auto a = grad_x({-18, 5});
    auto b = grad_x({-16, 40});
    CHECK((a - b).norm() < 1e-5 * (1 + a.norm()));
}

TEST_CASE("single weight profile") {
    for (int n = 1; n <= 4; ++n) {
        auto prof = calabi_profile(Rational(3), n, Rational(2));
        CHECK(prof.P.degree() == n + 1);
        CHECK(prof.P(Rational(2)) == 0);
        Poly<Rational> lin = Poly<Rational>::linear_root(Rational(2));
        CHECK(prof.quotient_formula() * lin == prof.P);
    }
}
