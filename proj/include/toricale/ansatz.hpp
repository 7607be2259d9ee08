#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "toricale/poly.hpp"
#include "toricale/rational.hpp"
#include "toricale/weights.hpp"

namespace toricale {

template <class T> using Mat = std::vector<std::vector<T>>;

// Coefficient set, held exactly and in floating point.
template <class T> struct AnsatzCoeffs {
    std::vector<T> alpha; // -c/a_j, increasing, negative
    std::vector<T> r;     // (-1)^{l-j} / prod_{k!=j}(alpha_j - alpha_k)
    std::vector<T> kappa; // c / (r_j a_j)
    Poly<T> p, theta, f_ell;
    T lin_a = T(0), const_b = T(0); // f_ell = p + lin_a x + const_b
};

struct AnsatzData {
    GroupedWeights weights;
    bool flat = false;
    Rational c;  // a0 a1 ... al
    Rational b0; // f_ell'(0) / 2
    Rational c0;
    bool ricci_flat = false;
    AnsatzCoeffs<Rational> exact;
    AnsatzCoeffs<double> num;
    AnsatzCoeffs<long double> ext; // extended precision for finite-difference stencils

    std::size_t ell() const { return weights.ell(); }
    int m() const { return weights.m(); }
    const std::vector<int>& mult() const { return weights.mult; }
    int fiber_dim() const { return m() - static_cast<int>(ell()); }

    template <class T> const AnsatzCoeffs<T>& coeffs() const {
        if constexpr (std::is_same_v<T, Rational>)
            return exact;
        else if constexpr (std::is_same_v<T, long double>)
            return ext;
        else
            return num;
    }

    // Open interval of the j-th coordinate (0-based). The last one is (0, inf),
    // or (alpha_l, inf) for flat data.
    double lower(std::size_t j) const { return lower_t<double>(j); }
    double upper(std::size_t j) const { return upper_t<double>(j); }
    template <class T> T lower_t(std::size_t j) const {
        if (j + 1 < ell() || flat) return coeffs<T>().alpha[j];
        return T(0);
    }
    template <class T> T upper_t(std::size_t j) const {
        if (j + 1 < ell()) return coeffs<T>().alpha[j + 1];
        return std::numeric_limits<T>::infinity();
    }
    Rational lower_exact(std::size_t j) const;
    Rational sigma1_alpha() const; // sum alpha_j
};

AnsatzData build_ansatz(const GroupedWeights& g, bool flat = false);
AnsatzData build_ansatz(std::int64_t a0, const std::vector<std::int64_t>& ws, bool flat = false);

// The product form (-1)^{l-j} (c/a_j)^{l-2} a0 prod_{k!=j}(a_j - a_k); the exact reciprocal of r_j.
QVec r_product_form(const GroupedWeights& g);

// c0 from the data route (-1)^{m-l} prod alpha_j^{n_j} / b0.
Rational c0_from_roots(const AnsatzData& d);

// e_0..e_n of v.
template <class T> std::vector<T> elementary_symmetric(const std::vector<T>& v) {
    std::vector<T> e(v.size() + 1, T(0));
    e[0] = T(1);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = i + 1; k-- > 0;) e[k + 1] = T(e[k + 1] + e[k] * v[i]);
    return e;
}

// sigma_1..sigma_l.
template <class T> std::vector<T> xi_to_sigma(const std::vector<T>& xi) {
    auto e = elementary_symmetric(xi);
    return std::vector<T>(e.begin() + 1, e.end());
}

// Sum form: x_j = ((-1)^{l-j} r_j / alpha_j) sum_{r=0}^{l} (-1)^r sigma_r alpha_j^{l-r}.
template <class T> std::vector<T> sigma_to_x(const std::vector<T>& sigma, const AnsatzData& d) {
    const auto& C = d.coeffs<T>();
    const std::size_t l = d.ell();
    std::vector<T> x(l);
    for (std::size_t j = 0; j < l; ++j) {
        T s = tpow(C.alpha[j], static_cast<int>(l));
        for (std::size_t r = 1; r <= l; ++r) {
            T term = T(sigma[r - 1] * tpow(C.alpha[j], static_cast<int>(l - r)));
            s = (r % 2) ? T(s - term) : T(s + term);
        }
        T sign = ((l - (j + 1)) % 2) ? T(-1) : T(1);
        x[j] = T(sign * C.r[j] * s / C.alpha[j]);
    }
    return x;
}

// Product form: x_j = (-1)^{l-j} r_j prod_k(alpha_j - xi_k) / alpha_j.
template <class T> std::vector<T> xi_to_x(const std::vector<T>& xi, const AnsatzData& d) {
    const auto& C = d.coeffs<T>();
    const std::size_t l = d.ell();
    std::vector<T> x(l);
    for (std::size_t j = 0; j < l; ++j) {
        T prod = T(1);
        for (std::size_t k = 0; k < l; ++k) prod = T(prod * (C.alpha[j] - xi[k]));
        T sign = ((l - (j + 1)) % 2) ? T(-1) : T(1);
        x[j] = T(sign * C.r[j] * prod / C.alpha[j]);
    }
    return x;
}

// Jacobian d sigma_r / d x_j (sigma is affine in x), rows r = 1..l.
template <class T> Mat<T> sigma_x_jacobian(const AnsatzData& d) {
    const auto& C = d.coeffs<T>();
    const std::size_t l = d.ell();
    Mat<T> J(l, std::vector<T>(l, T(0)));
    for (std::size_t j = 0; j < l; ++j) {
        Poly<T> q = Poly<T>::constant(C.alpha[j]);
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) q = q * Poly<T>::linear_root(C.alpha[k]);
        for (std::size_t r = 1; r <= l; ++r) {
            T v = q.coeff(l - r);
            J[r - 1][j] = (r % 2) ? T(-v) : v;
        }
    }
    return J;
}

// Inverse of sigma_to_x via prod(t - xi_k) = prod(t - alpha_k) + sum_j x_j alpha_j prod_{k!=j}(t - alpha_k).
template <class T> std::vector<T> x_to_sigma(const std::vector<T>& x, const AnsatzData& d) {
    const auto& C = d.coeffs<T>();
    const std::size_t l = d.ell();
    Poly<T> q = Poly<T>::constant(T(1));
    for (std::size_t k = 0; k < l; ++k) q = q * Poly<T>::linear_root(C.alpha[k]);
    for (std::size_t j = 0; j < l; ++j) {
        Poly<T> term = Poly<T>::constant(T(x[j] * C.alpha[j]));
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) term = term * Poly<T>::linear_root(C.alpha[k]);
        q = q + term;
    }
    std::vector<T> sigma(l);
    for (std::size_t r = 1; r <= l; ++r) {
        T v = q.coeff(l - r);
        sigma[r - 1] = (r % 2) ? T(-v) : v;
    }
    return sigma;
}

// w_j = Theta(xi_j) F_j(xi_j) / (p(xi_j) Delta_j), F_j = p for j < l.
template <class T> std::vector<T> vertical_weights(const std::vector<T>& xi, const AnsatzData& d) {
    const auto& C = d.coeffs<T>();
    const std::size_t l = d.ell();
    std::vector<T> w(l);
    for (std::size_t j = 0; j < l; ++j) {
        T delta = T(1);
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) delta = T(delta * (xi[j] - xi[k]));
        if (delta == T(0)) throw DomainError("vertical_weights: coincident coordinates");
        if (j + 1 < l || d.flat) {
            w[j] = T(C.theta(xi[j]) / delta);
        } else {
            T pv = C.p(xi[j]);
            if (pv == T(0)) throw DomainError("vertical_weights: root of p");
            w[j] = T(C.theta(xi[j]) * C.f_ell(xi[j]) / (pv * delta));
        }
    }
    return w;
}

// H_rs = sum_j w_j sigma_{r-1}(xi^_j) sigma_{s-1}(xi^_j), basis K_1..K_l.
template <class T> Mat<T> vertical_gram(const std::vector<T>& xi, const AnsatzData& d) {
    const std::size_t l = d.ell();
    auto w = vertical_weights(xi, d);
    Mat<T> H(l, std::vector<T>(l, T(0)));
    for (std::size_t j = 0; j < l; ++j) {
        std::vector<T> rest;
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) rest.push_back(xi[k]);
        auto e = elementary_symmetric(rest);
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t s = 0; s < l; ++s) H[r][s] = T(H[r][s] + w[j] * e[r] * e[s]);
    }
    return H;
}

// X_j = sum_r B_jr K_r with B_jr = (-1)^r alpha_j^{l-r} / (alpha_j prod_{k!=j}(alpha_j - alpha_k)).
template <class T> Mat<T> killing_basis_change(const AnsatzData& d) {
    const auto& C = d.coeffs<T>();
    const std::size_t l = d.ell();
    Mat<T> B(l, std::vector<T>(l));
    for (std::size_t j = 0; j < l; ++j) {
        T den = C.alpha[j];
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) den = T(den * (C.alpha[j] - C.alpha[k]));
        for (std::size_t r = 1; r <= l; ++r) {
            T v = T(tpow(C.alpha[j], static_cast<int>(l - r)) / den);
            B[j][r - 1] = (r % 2) ? T(-v) : v;
        }
    }
    return B;
}

// Gram matrix of X_1..X_l: B H B^T.
template <class T> Mat<T> base_gram(const std::vector<T>& xi, const AnsatzData& d) {
    const std::size_t l = d.ell();
    auto H = vertical_gram(xi, d);
    auto B = killing_basis_change<T>(d);
    Mat<T> BH(l, std::vector<T>(l, T(0)));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t k = 0; k < l; ++k)
            for (std::size_t s = 0; s < l; ++s) BH[i][s] = T(BH[i][s] + B[i][k] * H[k][s]);
    Mat<T> G(l, std::vector<T>(l, T(0)));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j)
            for (std::size_t s = 0; s < l; ++s) G[i][j] = T(G[i][j] + BH[i][s] * B[j][s]);
    return G;
}

// x~^j_k = x_j x^j_k, x~^0_j = x_j (1 - sum_k x^j_k); output ordered as wps_polytope.
template <class T>
std::vector<T> x_to_xtilde(const std::vector<T>& x, const std::vector<std::vector<T>>& fibers) {
    const std::size_t l = x.size();
    if (fibers.size() != l) throw InvalidInput("x_to_xtilde: one fiber per factor required");
    std::vector<T> out(l);
    for (std::size_t j = 0; j < l; ++j) {
        T s = T(0);
        for (const auto& v : fibers[j]) s = T(s + v);
        out[j] = T(x[j] * (T(1) - s));
    }
    for (std::size_t j = 0; j < l; ++j)
        for (const auto& v : fibers[j]) out.push_back(T(x[j] * v));
    return out;
}

template <class T>
void xtilde_to_x(const std::vector<T>& xt, const std::vector<int>& mult, std::vector<T>& x,
                 std::vector<std::vector<T>>& fibers) {
    const std::size_t l = mult.size();
    x.assign(l, T(0));
    fibers.assign(l, {});
    std::size_t pos = l;
    for (std::size_t j = 0; j < l; ++j) {
        x[j] = xt[j];
        for (int k = 0; k < mult[j]; ++k) x[j] = T(x[j] + xt[pos + k]);
        if (x[j] == T(0)) throw DomainError("xtilde_to_x: zero base coordinate");
        for (int k = 0; k < mult[j]; ++k) fibers[j].push_back(T(xt[pos + k] / x[j]));
        pos += static_cast<std::size_t>(mult[j]);
    }
    if (pos != xt.size()) throw InvalidInput("xtilde_to_x: length does not match multiplicities");
}

// Interior point: xi with one entry per open interval, fiber coordinates in
// the open standard simplex of dimension n_j.
template <class T> struct BasicXiPoint {
    std::vector<T> xi;
    std::vector<std::vector<T>> fibers;
};
using XiPoint = BasicXiPoint<double>;

template <class T> using EMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T> bool in_domain(const BasicXiPoint<T>& pt, const AnsatzData& d);
template <class T> void require_domain(const BasicXiPoint<T>& pt, const AnsatzData& d);

// Roots of t^l - sigma_1 t^{l-1} + ... , one per open interval.
template <class T> std::vector<T> sigma_to_xi(const std::vector<T>& sigma, const AnsatzData& d);

// Momentum coordinates (x_1..x_l ; x^_1..) with x^j_k = kappa_j x_j x^j_k.
template <class T> std::vector<T> momentum_coords(const BasicXiPoint<T>& pt, const AnsatzData& d);
template <class T> BasicXiPoint<T> point_from_momentum(const std::vector<T>& y, const AnsatzData& d);

std::vector<double> xtilde_coords(const XiPoint& pt, const AnsatzData& d);
XiPoint point_from_xtilde(const std::vector<double>& xt, const AnsatzData& d);

// Constant matrix M with (x, x^) = M x~.
Eigen::MatrixXd xtilde_to_momentum(const AnsatzData& d);

template <class T> EMatrix<T> to_eigen(const Mat<T>& m) {
    EMatrix<T> out(m.size(), m.empty() ? 0 : m.front().size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j];
    return out;
}

// Gram matrix in the (x, x^) basis, m x m.
template <class T> EMatrix<T> full_gram(const BasicXiPoint<T>& pt, const AnsatzData& d);
// Same matrix in the x~ basis: M^{-1} G M^{-T}.
Eigen::MatrixXd xtilde_gram(const XiPoint& pt, const AnsatzData& d);

// Inverse Hessian of the fiber potential (r_j/2)[sum x log x + (1-sum x) log(1-sum x)].
template <class T> EMatrix<T> fubini_study_gram(const std::vector<T>& fiber, T rj);

BasicXiPoint<long double> extend(const XiPoint& pt);

// U_a at the point; potentials are fixed up to affine terms by the base points.
double symplectic_potential(const XiPoint& pt, const AnsatzData& d);
// Gradient of U_a in (x, x^) coordinates.
std::vector<double> symplectic_gradient(const XiPoint& pt, const AnsatzData& d);

// 1/2 (sigma_1 - sum alpha) - 1/2 int_1^{xi_l} (lin_a t + const_b) / F_l(t) dt.
double kahler_potential(const std::vector<double>& xi, const AnsatzData& d);
double flat_kahler_potential(const std::vector<double>& xi, const AnsatzData& d);

// Adaptive Gauss-Kronrod with the module tolerance; throws NumericFailure.
template <class F> double integrate(F f, double a, double b);

struct CalabiProfile {
    Rational r;
    int n = 1;
    Rational alpha;
    Poly<Rational> P; // x^{n+1} + (r-n-1) alpha^n x + (n-r) alpha^{n+1}

    // Theta = (2/r) P / xi^n
    double operator()(double xi) const;
    Rational exact(const Rational& xi) const;
    Rational exact_derivative(const Rational& xi) const;
    // P / (x - alpha) from the closed formula sum_{i<n} x^{n-i} alpha^i + (r-n) alpha^n.
    Poly<Rational> quotient_formula() const;
};

CalabiProfile calabi_profile(const Rational& r, int n, const Rational& alpha);

} // namespace toricale

#include "toricale/detail/quadrature.hpp"
