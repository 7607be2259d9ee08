#include "toricale/asymptotics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace toricale {

namespace {

// int_s^inf f(t) dt with t = s / v.
template <class F> double tail_integral(F f, double s) {
    return integrate([&](double v) { return f(s / v) * s / (v * v); }, 0.0, 1.0);
}

double ale_closed_form(int m, double a) {
    if (a == 0) return 0;
    if (m == 2) return -a / 4;
    return std::ldexp(a, m - 4) / ((m - 2) * (m - 1));
}

std::vector<double> ray_xi(const AnsatzData& d, double top) {
    std::vector<double> xi;
    for (std::size_t j = 0; j + 1 < d.ell(); ++j) xi.push_back(0.5 * (d.num.alpha[j] + d.num.alpha[j + 1]));
    xi.push_back(top);
    return xi;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

FlatImage flat_image_moments(const std::vector<double>& xi, const AnsatzData& d) {
    const std::size_t l = d.ell();
    if (xi.size() != l) throw InvalidInput("flat_image_moments: wrong length");
    XiPoint pt;
    pt.xi = xi;
    for (std::size_t j = 0; j < l; ++j) pt.fibers.emplace_back(static_cast<std::size_t>(d.mult()[j]), 0.5 / (d.mult()[j] + 1));
    require_domain(pt, d);
    const auto& C = d.num;
    const double top = xi.back();
    if (!(top > 1)) throw DomainError("flat_image_moments: last coordinate must exceed 1");
    FlatImage out;
    out.x = xi_to_x(xi, d);
    for (std::size_t k = 0; k < l; ++k) {
        double e = 0;
        if (!d.flat) {
            auto g = [&](double t) { return (C.lin_a * t + C.const_b) / ((t - C.alpha[k]) * C.f_ell(t)); };
            e = tail_integral(g, top);
        }
        out.log_factor.push_back(e);
        out.x_flat.push_back(out.x[k] * std::exp(e));
        out.norm_sq += 2 * Rational(d.c / d.weights.a[k]).get_d() * out.x_flat.back();
    }
    return out;
}

std::vector<RayPoint> ale_ray(const AnsatzData& d, int points, double lo, double hi) {
    if (points < 2) throw InvalidInput("ale_ray: need at least two points");
    if (!(lo > 1 && hi > lo)) throw InvalidInput("ale_ray: need 1 < lo < hi");
    const int m = d.m();
    const auto& C = d.num;
    auto weight = [&](double t) { return (C.lin_a * t + C.const_b) / C.f_ell(t); };
    // Limit of H - |z|^2/4 when it exists.
    double limit = 0;
    if (m >= 3 && !d.flat) limit = -0.5 * tail_integral(weight, 1.0);

    std::vector<RayPoint> ray;
    for (int i = 0; i < points; ++i) {
        const double top = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
        const auto xi = ray_xi(d, top);
        const auto img = flat_image_moments(xi, d);
        double correction = 0;
        for (std::size_t k = 0; k < d.ell(); ++k)
            correction += Rational(d.c / d.weights.a[k]).get_d() * img.x[k] * std::expm1(img.log_factor[k]);
        RayPoint p;
        p.xi_top = top;
        p.norm_sq = img.norm_sq;
        p.potential = kahler_potential(xi, d);
        if (d.flat) {
            p.deviation = p.tail = 0;
        } else if (m >= 3) {
            p.tail = 0.5 * tail_integral(weight, top) - 0.5 * correction;
            p.deviation = limit + p.tail;
        } else {
            auto f = [&](double u) {
                const double t = std::exp(u);
                return weight(t) * t;
            };
            p.deviation = -0.5 * integrate(f, 0.0, std::log(top)) - 0.5 * correction;
            p.tail = p.deviation;
        }
        ray.push_back(p);
    }
    return ray;
}

AleExpansion decay_fit(const AnsatzData& d, const AsymptoticsConfig& cfg) {
    AleExpansion e;
    e.m = d.m();
    e.ricci_flat = d.ricci_flat;
    e.lin_a = d.num.lin_a;
    e.closed = ale_closed_form(e.m, e.lin_a);
    e.scale = std::abs(ale_closed_form(e.m, d.exact.p.derivative().coeff(0).get_d()));
    e.expected_exponent = 4 - 2 * e.m;
    e.ray = ale_ray(d, cfg.ray_points, cfg.ray_lo, cfg.ray_hi);

    const auto n = static_cast<Eigen::Index>(e.ray.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double q = e.ray[i].norm_sq;
        X(i, 0) = 1;
        if (e.m == 2) {
            X(i, 1) = std::log(q);
            X(i, 2) = 1 / q;
        } else {
            X(i, 1) = std::pow(q, 2 - e.m);
            X(i, 2) = std::pow(q, 1 - e.m);
        }
        y(i) = e.ray[i].deviation;
    }
    Eigen::Vector3d scale = X.cwiseAbs().colwise().maxCoeff().transpose();
    Eigen::VectorXd beta = (X * scale.cwiseInverse().asDiagonal()).colPivHouseholderQr().solve(y);
    beta = beta.cwiseQuotient(scale);
    e.fitted = beta(1);
    e.fit_residual = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(n));

    e.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    if (e.m >= 3 && !d.flat) {
        std::vector<double> lz, lt;
        for (const auto& p : e.ray) {
            if (p.tail == 0) continue;
            lz.push_back(0.5 * std::log(p.norm_sq));
            lt.push_back(std::log(std::abs(p.tail)));
        }
        if (lz.size() >= 2) e.fitted_exponent = slope(lz, lt);
    }

    const bool exact_flat = d.exact.lin_a == 0;
    if (exact_flat) {
        e.coefficient_ok = std::abs(e.fitted) <= cfg.vanishing_tol * e.scale;
        e.exponent_ok = true;
    } else {
        e.coefficient_ok = std::abs(e.fitted - e.closed) <= cfg.coefficient_tol * std::abs(e.closed);
        e.exponent_ok = e.m == 2 ||
                        std::abs(e.fitted_exponent - e.expected_exponent) <= cfg.exponent_tol * std::abs(e.expected_exponent);
    }
    e.pass = e.coefficient_ok && e.exponent_ok && exact_flat == d.ricci_flat;
    return e;
}

RicciFlatCertificate ricci_flat_test(std::int64_t a0, const std::vector<std::int64_t>& weights) {
    const auto d = build_ansatz(a0, weights);
    RicciFlatCertificate c;
    c.a0 = a0;
    for (std::size_t j = 0; j < d.ell(); ++j) c.weighted_sum += (d.mult()[j] + 1) * d.weights.a[j];
    c.ricci_flat = a0 == c.weighted_sum;
    c.twice_b0 = 2 * d.b0;
    c.p_prime_zero = d.exact.p.derivative().coeff(0);
    c.agrees = c.ricci_flat == (c.twice_b0 == c.p_prime_zero);
    return c;
}

GrowthReport xi_growth_check(const AnsatzData& d, const AsymptoticsConfig& cfg) {
    const auto ray = ale_ray(d, cfg.ray_points, cfg.ray_lo, cfg.ray_hi);
    std::vector<double> xs, diff;
    GrowthReport g;
    for (const auto& p : ray) {
        xs.push_back(p.xi_top);
        diff.push_back(p.xi_top - 0.5 * p.norm_sq);
        g.max_abs_difference = std::max(g.max_abs_difference, std::abs(diff.back()));
    }
    g.slope = slope(xs, diff);
    g.pass = std::abs(g.slope) < cfg.growth_slope_tol;
    return g;
}

CheckReport asymptotics_check(const AnsatzData& d, const AsymptoticsConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = "asymptotics";
    char grid[96];
    std::snprintf(grid, sizeof grid, "%d log-spaced points, xi_l in [%g, %g]", cfg.ray_points, cfg.ray_lo, cfg.ray_hi);
    rep.grid = grid;
    const auto e = decay_fit(d, cfg);
    const auto g = xi_growth_check(d, cfg);
    const bool vanishing = d.exact.lin_a == 0;
    rep.tolerance = vanishing ? cfg.vanishing_tol : cfg.coefficient_tol;
    rep.max_residual = vanishing ? std::abs(e.fitted) / e.scale : std::abs(e.fitted - e.closed) / std::abs(e.closed);
    rep.points = e.ray.size();
    rep.pass = e.pass && g.pass;
    auto& j = rep.details;
    j["m"] = e.m;
    j["lin_a"] = e.lin_a;
    j["closed_coefficient"] = e.closed;
    j["fitted_coefficient"] = e.fitted;
    j["coefficient_kind"] = e.m == 2 ? "log |z|^2" : "|z|^(4-2m)";
    j["fitted_exponent"] = e.fitted_exponent;
    j["expected_exponent"] = e.expected_exponent;
    j["fit_residual"] = e.fit_residual;
    j["ricci_flat"] = e.ricci_flat;
    j["xi_growth"] = {{"max_abs_difference", g.max_abs_difference}, {"slope", g.slope}, {"pass", g.pass}};
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string ray_csv(const std::vector<RayPoint>& ray) {
    std::string out = "xi_l,norm_sq,H,H_minus_quarter_norm_sq\n";
    char buf[128];
    for (const auto& p : ray) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.xi_top, p.norm_sq, p.potential, p.deviation);
        out += buf;
    }
    return out;
}

} // namespace toricale
