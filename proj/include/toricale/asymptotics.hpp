#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toricale/ansatz.hpp"
#include "toricale/verify.hpp"

namespace toricale {

// Base moment coordinates pulled back to the flat model at infinity.
struct FlatImage {
    std::vector<double> x;
    std::vector<double> log_factor; // int_{xi_l}^inf (a t + b) / ((t - alpha_k) F_l(t)) dt
    std::vector<double> x_flat;
    double norm_sq = 0; // 2 sum_k (c/a_k) x_flat_k
};

// x_flat_k = x_k exp(log_factor_k); the identity for flat data.
FlatImage flat_image_moments(const std::vector<double>& xi, const AnsatzData& d);

struct RayPoint {
    double xi_top = 0;
    double norm_sq = 0;
    double potential = 0; // H
    double deviation = 0; // H - |z|^2 / 4, evaluated without cancellation
    double tail = 0;      // deviation minus its limit (m >= 3), else deviation
};

// Points with xi_l log-spaced in [lo, hi]; the other coordinates sit at
// the midpoints of their intervals.
std::vector<RayPoint> ale_ray(const AnsatzData& d, int points = 20, double lo = 1e2, double hi = 1e6);

struct AsymptoticsConfig {
    int ray_points = 20;
    double ray_lo = 1e2;
    double ray_hi = 1e6;
    double coefficient_tol = 0.05;
    double exponent_tol = 0.03;
    double vanishing_tol = 1e-3;
    double growth_slope_tol = 1e-3;
};

struct AleExpansion {
    int m = 0;
    double lin_a = 0;          // a = 2 b0 - p'(0)
    double closed = 0;         // 2^{m-4} a / ((m-2)(m-1)), or -a/4 for m = 2
    double scale = 0;          // the same expression with |p'(0)| in place of a
    double fitted = 0;         // coefficient of |z|^{4-2m} (or of log |z|^2)
    double fitted_exponent = 0; // log-log slope of the tail in |z| (m >= 3)
    double expected_exponent = 0;
    double fit_residual = 0;   // rms of the regression residual
    bool ricci_flat = false;
    bool coefficient_ok = false;
    bool exponent_ok = false;
    bool pass = false;
    std::vector<RayPoint> ray;
};

AleExpansion decay_fit(const AnsatzData& d, const AsymptoticsConfig& cfg = {});

struct RicciFlatCertificate {
    bool ricci_flat = false;
    std::int64_t a0 = 0;
    std::int64_t weighted_sum = 0; // sum (n_j + 1) a_j
    Rational twice_b0;
    Rational p_prime_zero;
    bool agrees = false; // the weight test and 2 b0 = p'(0) give the same answer
};

RicciFlatCertificate ricci_flat_test(std::int64_t a0, const std::vector<std::int64_t>& weights);

struct GrowthReport {
    double max_abs_difference = 0; // max |xi_l - |z|^2 / 2| along the ray
    double slope = 0;              // regression slope of the difference against xi_l
    bool pass = false;
};

GrowthReport xi_growth_check(const AnsatzData& d, const AsymptoticsConfig& cfg = {});

// Everything above as one report.
CheckReport asymptotics_check(const AnsatzData& d, const AsymptoticsConfig& cfg = {});

// xi_l, |z|^2, H, H - |z|^2/4 per line, with a header.
std::string ray_csv(const std::vector<RayPoint>& ray);

} // namespace toricale
