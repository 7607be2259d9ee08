#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "toricale/ansatz.hpp"
#include "toricale/polytope.hpp"

namespace toricale {

enum class SurfaceKind { orthotoric, calabi };

// Complex dimension two. Orthotoric: theta1 = 2(x + a0 a1)(x + a0 a2) and
// theta2 = 2x(x + a0^2). Calabi: theta1 = Theta of the ansatz, theta2 = F_l.
struct SurfaceData {
    SurfaceKind kind = SurfaceKind::orthotoric;
    std::int64_t a0 = 0, a1 = 0, a2 = 0; // a1 <= a2
    AnsatzData ansatz;
    Poly<Rational> theta1, theta2;
    Rational lambda; // a0^2 a1 a2, or 1/a1^4
};

SurfaceData surface_data(std::int64_t a0, std::int64_t a1, std::int64_t a2);

// A point is (xi1, xi2) for orthotoric data and (xi, fiber coordinate) for
// Calabi data.
template <class T> bool surface_in_domain(const T& p1, const T& p2, const SurfaceData& s);

// Closed-form Gram matrix of the orthotoric metric in the K_1, K_2 basis.
template <class T> Mat<T> orthotoric_gram(const T& xi1, const T& xi2, const SurfaceData& s);

// Gram matrix in the basis dual to (sigma_1, sigma_2); for Calabi data
// sigma = (z, z v) with z = xi - alpha_1.
template <class T> Mat<T> surface_gram(const T& p1, const T& p2, const SurfaceData& s);

template <class T> struct DualPoint {
    T s1, s2;      // dual momenta
    T factor;      // s1; Htilde = factor^2 H
    Mat<T> H;      // surface_gram
    Mat<T> Htilde; // closed form for orthotoric data
};

template <class T> DualPoint<T> bochner_dual(const T& p1, const T& p2, const SurfaceData& s);

// Bivariate polynomial in (s1, s2): coefficient per (deg s1, deg s2).
using BiPolyS = std::map<std::pair<int, int>, Rational>;

Rational evaluate(const BiPolyS& p, const Rational& s1, const Rational& s2);

struct PolynomialityReport {
    int degree = 3;
    bool pass = false;            // every entry fits at this degree and matches the held-out points
    bool lower_degree_fails = false; // at degree - 1 some entry has no fit
    std::size_t samples = 0;
    std::size_t held_out = 0;
    std::vector<BiPolyS> entries; // H~_11, H~_12, H~_22
};

// Exact interpolation of the dual Gram matrix at rational sample points.
PolynomialityReport polynomiality_check(const SurfaceData& s, int degree = 3, std::size_t samples = 20,
                                        std::size_t held_out = 10);

struct DualFacet {
    std::string label;   // facet of the standard simplex it maps to: x1, x2, sum
    QVec functional;     // (g1, g2, c): L = g1 s1 + g2 s2 + c
    Rational multiplier; // x~ = multiplier * L on this facet's coordinate
    QVec normal_dual;    // from H~ u = 0, dH~(u, u) = 2u at a facet point
    QVec normal_standard;
    bool boundary_ok = false;
};

struct DualPolytope {
    LabelledPolytope simplex; // in (s1, s2)
    std::vector<DualFacet> facets;
    Rational normal_scale;    // normal_standard of x1 divided by a0 a2
    bool weight_pattern = false; // normals = normal_scale (a0 a2 e1, a0 a1 e2, -a1 a2 (1,1))
    bool boundary_ok = false;
};

DualPolytope dual_polytope(const SurfaceData& s);

struct ConformalReport {
    std::size_t points = 0;
    double conformal_residual = 0; // max relative |H~ / factor^2 - H|
    double affine_residual = 0;    // factor against its affine form in x~
    double min_factor = 0;
    // -(x~1/(a0 a1) + x~2/(a0 a2)) for orthotoric data, negative on the
    // domain; (x~1 + x~2)/|alpha_1| for Calabi data, positive.
    double min_momentum_form = 0;
    double max_momentum_form = 0;
    bool inside_simplex = false;
    bool pass = false;
};

ConformalReport conformal_factor_check(const SurfaceData& s, int points = 100, double tol = 1e-12);

// Standard-simplex coordinates of a dual momentum point.
std::vector<double> dual_to_standard(double s1, double s2, const SurfaceData& s);

nlohmann::ordered_json to_json(const SurfaceData& s, const DualPolytope& dp, const PolynomialityReport& pr,
                               const ConformalReport& cr);

} // namespace toricale
