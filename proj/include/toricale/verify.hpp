#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toricale/ansatz.hpp"
#include "toricale/polytope.hpp"

namespace toricale {

struct CheckReport {
    std::string check;
    std::string grid;
    double max_residual = 0;
    double tolerance = 0;
    bool pass = false;
    std::size_t points = 0;
    double seconds = 0;
    nlohmann::json details = nlohmann::json::object();
};

// Field order is fixed; "seconds" is 0 unless with_timing.
nlohmann::ordered_json to_json(const CheckReport& r, bool with_timing = false);

struct VerifyConfig {
    double abreu_tol = 1e-5;
    double flat_noise_tol = 1e-8;
    int grid_per_interval = 15;
    int random_points = 200;
    int hessian_points = 10;
    double hessian_tol = 1e-6;
    double slope_tol = 0.2;
    double ratio_tol = 0.2;
    double derivative_tol = 0.05;
    double det_variation_tol = 0.10;
    std::uint64_t seed = 1;
};

// Radical inverse in the given prime base.
double halton(std::uint64_t index, unsigned base);

// Tensor grid in xi: uniform on bounded intervals, s tan(pi/2 u) on the
// unbounded one (s = |alpha_l|); fiber coordinates from a Halton sequence.
std::vector<XiPoint> xi_grid(const AnsatzData& d, int per_interval, std::uint64_t seed);
// Quasi-random interior points.
std::vector<XiPoint> halton_points(const AnsatzData& d, int count, std::uint64_t seed);

// Smallest facet functional of P_m (or of the cone for flat data) at the point.
double boundary_distance(const XiPoint& pt, const AnsatzData& d);
LabelledPolytope ansatz_polytope(const AnsatzData& d);

// S = -sum_{u,v} d_u d_v G_uv in (x, x^) coordinates; h <= 0 picks the
// adaptive step max(1e-4, 1e-2 dist). One Richardson level.
double abreu_scalar(const XiPoint& pt, const AnsatzData& d, double h = 0);

struct FacetResult {
    std::string label;
    double slope = 0;          // log-log slope of |H u| against the facet functional
    double halving_ratio = 0;  // |H u|(t) / |H u|(t/2) at the smallest t
    double derivative_error = 0; // |grad(u^T H u) - 2u| / |2u| after extrapolation
    bool pass = false;
};

FacetResult boundary_check_facet(const AnsatzData& d, std::size_t facet, const VerifyConfig& cfg = {});

CheckReport abreu_check(const AnsatzData& d, const VerifyConfig& cfg = {});
CheckReport boundary_check(const AnsatzData& d, const VerifyConfig& cfg = {});
CheckReport positivity_check(const AnsatzData& d, const VerifyConfig& cfg = {});
CheckReport det_factorization(const AnsatzData& d, const VerifyConfig& cfg = {});
CheckReport vandermonde_check(const AnsatzData& d);
CheckReport hessian_consistency(const AnsatzData& d, const VerifyConfig& cfg = {});
// Index of the lattice spanned by the base facet normals in Z^l against
// (a0 a1 ... al)^{l-1}; exact.
CheckReport lattice_check(const GroupedWeights& g);

// Both identities on an arbitrary set of distinct nonzero rationals.
bool vandermonde_identities(const QVec& alpha, std::string* why = nullptr);

// Inverse of the finite-difference Hessian of U_a (from its gradient, one
// Richardson level) at a point.
Eigen::MatrixXd potential_gram_fd(const XiPoint& pt, const AnsatzData& d, double h = 0);

// Bivariate polynomial in (xi, alpha): keys are (deg xi, deg alpha).
using BiPoly = std::map<std::pair<int, int>, Rational>;
// s_FS xi^{n-1} - (xi^n Theta)'' for the profile with parameter alpha;
// scalar-flat iff the result is empty.
BiPoly calabi_scalar_residual(const Rational& r, int n);

} // namespace toricale
