#include "toricale/ansatz.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/tools/roots.hpp>

namespace toricale {

namespace {

template <class S> S convert(const Rational& q) {
    if constexpr (std::is_same_v<S, long double>)
        return std::strtold(q.get_num().get_str().c_str(), nullptr) /
               std::strtold(q.get_den().get_str().c_str(), nullptr);
    else
        return q.get_d();
}

template <class S> Poly<S> convert(const Poly<Rational>& p) {
    std::vector<S> c;
    for (const auto& v : p.c) c.push_back(convert<S>(v));
    return Poly<S>(std::move(c));
}

template <class S> AnsatzCoeffs<S> convert_coeffs(const AnsatzCoeffs<Rational>& e) {
    AnsatzCoeffs<S> d;
    for (const auto& v : e.alpha) d.alpha.push_back(convert<S>(v));
    for (const auto& v : e.r) d.r.push_back(convert<S>(v));
    for (const auto& v : e.kappa) d.kappa.push_back(convert<S>(v));
    d.p = convert<S>(e.p);
    d.theta = convert<S>(e.theta);
    d.f_ell = convert<S>(e.f_ell);
    d.lin_a = convert<S>(e.lin_a);
    d.const_b = convert<S>(e.const_b);
    return d;
}

} // namespace

Rational AnsatzData::lower_exact(std::size_t j) const {
    if (j >= ell()) throw InvalidInput("interval index out of range");
    if (j + 1 < ell() || flat) return exact.alpha[j];
    return 0;
}

Rational AnsatzData::sigma1_alpha() const {
    Rational s = 0;
    for (const auto& a : exact.alpha) s += a;
    return s;
}

AnsatzData build_ansatz(const GroupedWeights& g, bool flat) {
    if (g.a0 <= 0) throw InvalidInput("build_ansatz: a0 must be positive");
    if (g.ell() == 0) throw InvalidInput("build_ansatz: no weights");
    if (g.mult.size() != g.ell()) throw InvalidInput("build_ansatz: multiplicity list mismatch");
    for (std::size_t j = 0; j < g.ell(); ++j) {
        if (g.a[j] <= 0) throw InvalidInput("build_ansatz: weights must be positive");
        if (j && g.a[j] <= g.a[j - 1]) throw InvalidInput("build_ansatz: grouped weights must be distinct and ascending");
        if (g.mult[j] < 0) throw InvalidInput("build_ansatz: negative multiplicity");
    }
    if (g.m() < 2) throw InvalidInput("build_ansatz: complex dimension m must be at least 2");
    std::int64_t gg = g.a0;
    for (auto v : g.a) gg = gcd64(gg, v);
    if (gg != 1) throw InvalidInput("build_ansatz: weights must have gcd 1");

    AnsatzData d;
    d.weights = g;
    d.flat = flat;
    const std::size_t l = g.ell();
    const int m = g.m();
    d.c = g.a0;
    for (auto v : g.a) d.c *= v;

    auto& E = d.exact;
    for (std::size_t j = 0; j < l; ++j) E.alpha.push_back(Rational(-d.c / g.a[j]));
    for (std::size_t j = 0; j < l; ++j) {
        Rational den = 1;
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) den *= E.alpha[j] - E.alpha[k];
        Rational rj = Rational(((l - 1 - j) % 2) ? -1 : 1) / den;
        if (rj <= 0) throw NumericFailure("build_ansatz: non-positive r_j for " + g.str());
        E.r.push_back(rj);
        E.kappa.push_back(Rational(d.c / (rj * g.a[j])));
    }

    E.p = Poly<Rational>::constant(2);
    E.theta = Poly<Rational>::constant(2);
    for (std::size_t j = 0; j < l; ++j) {
        auto lin = Poly<Rational>::linear_root(E.alpha[j]);
        E.p = E.p * lin.pow(static_cast<unsigned>(1 + g.mult[j]));
        E.theta = E.theta * lin;
    }

    Rational a0sq = Rational(g.a0) * g.a0;
    d.c0 = 1 / (a0sq * rpow(d.c, static_cast<int>(l) - 2));
    Rational prod = 1;
    for (std::size_t j = 0; j < l; ++j) prod *= rpow(E.alpha[j], g.mult[j]);
    d.b0 = (((m - static_cast<int>(l)) % 2) ? -1 : 1) * prod / d.c0;

    if (flat) {
        E.f_ell = E.p;
        E.lin_a = 0;
        E.const_b = 0;
    } else {
        E.lin_a = 2 * d.b0 - E.p.derivative().coeff(0);
        E.const_b = -E.p.coeff(0);
        E.f_ell = E.p + Poly<Rational>(QVec{E.const_b, E.lin_a});
    }
    std::int64_t weighted = 0;
    for (std::size_t j = 0; j < l; ++j) weighted += (g.mult[j] + 1) * g.a[j];
    d.ricci_flat = flat || g.a0 == weighted;
    d.num = convert_coeffs<double>(E);
    d.ext = convert_coeffs<long double>(E);
    return d;
}

AnsatzData build_ansatz(std::int64_t a0, const std::vector<std::int64_t>& ws, bool flat) {
    return build_ansatz(group_weights(a0, ws), flat);
}

QVec r_product_form(const GroupedWeights& g) {
    const std::size_t l = g.ell();
    Rational c = g.a0;
    for (auto v : g.a) c *= v;
    QVec out;
    for (std::size_t j = 0; j < l; ++j) {
        Rational v = rpow(Rational(c / g.a[j]), static_cast<int>(l) - 2) * g.a0;
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) v *= g.a[j] - g.a[k];
        if ((l - 1 - j) % 2) v = -v;
        out.push_back(v);
    }
    return out;
}

Rational c0_from_roots(const AnsatzData& d) {
    Rational prod = 1;
    for (std::size_t j = 0; j < d.ell(); ++j) prod *= rpow(d.exact.alpha[j], d.mult()[j]);
    Rational sign = ((d.m() - static_cast<int>(d.ell())) % 2) ? -1 : 1;
    return sign * prod / d.b0;
}

template <class T> bool in_domain(const BasicXiPoint<T>& pt, const AnsatzData& d) {
    if (pt.xi.size() != d.ell()) return false;
    for (std::size_t j = 0; j < d.ell(); ++j)
        if (!(pt.xi[j] > d.lower_t<T>(j) && pt.xi[j] < d.upper_t<T>(j))) return false;
    if (pt.fibers.size() != d.ell()) return false;
    for (std::size_t j = 0; j < d.ell(); ++j) {
        if (pt.fibers[j].size() != static_cast<std::size_t>(d.mult()[j])) return false;
        T s = 0;
        for (T v : pt.fibers[j]) {
            if (!(v > 0)) return false;
            s += v;
        }
        if (!(s < 1)) return false;
    }
    return true;
}

template <class T> void require_domain(const BasicXiPoint<T>& pt, const AnsatzData& d) {
    if (!in_domain(pt, d)) throw DomainError("point outside the open domain of " + d.weights.str());
}

template <class T> std::vector<T> sigma_to_xi(const std::vector<T>& sigma, const AnsatzData& d) {
    const std::size_t l = d.ell();
    if (sigma.size() != l) throw InvalidInput("sigma_to_xi: wrong length");
    auto Q = [&](T t) {
        T acc = 1;
        for (std::size_t r = 1; r <= l; ++r) acc = acc * t + ((r % 2) ? -sigma[r - 1] : sigma[r - 1]);
        return acc;
    };
    std::vector<T> xi(l);
    for (std::size_t j = 0; j < l; ++j) {
        const T lo = d.lower_t<T>(j);
        T hi = d.upper_t<T>(j);
        const T qlo = Q(lo);
        if (!std::isfinite(hi)) {
            T span = std::max(T(1), std::abs(lo));
            hi = lo + span;
            int guard = 0;
            while ((Q(hi) > 0) == (qlo > 0) && guard++ < 2000) {
                span *= 2;
                hi = lo + span;
            }
        }
        const T qhi = Q(hi);
        if (qlo == 0 || qhi == 0 || (qlo > 0) == (qhi > 0))
            throw DomainError("sigma_to_xi: root not bracketed in interval " + std::to_string(j + 1));
        boost::uintmax_t iters = 300;
        auto res = boost::math::tools::toms748_solve(Q, lo, hi, qlo, qhi,
                                                     boost::math::tools::eps_tolerance<T>(), iters);
        const T root = (res.first + res.second) / 2;
        if (!(root > lo && root < d.upper_t<T>(j))) throw DomainError("sigma_to_xi: root on the interval boundary");
        xi[j] = root;
    }
    return xi;
}

template <class T> std::vector<T> momentum_coords(const BasicXiPoint<T>& pt, const AnsatzData& d) {
    require_domain(pt, d);
    const auto& K = d.coeffs<T>().kappa;
    auto x = xi_to_x(pt.xi, d);
    std::vector<T> y = x;
    for (std::size_t j = 0; j < d.ell(); ++j)
        for (T v : pt.fibers[j]) y.push_back(K[j] * x[j] * v);
    return y;
}

template <class T> BasicXiPoint<T> point_from_momentum(const std::vector<T>& y, const AnsatzData& d) {
    const std::size_t l = d.ell();
    if (y.size() != static_cast<std::size_t>(d.m())) throw InvalidInput("point_from_momentum: wrong length");
    const auto& K = d.coeffs<T>().kappa;
    std::vector<T> x(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(l));
    BasicXiPoint<T> pt;
    pt.xi = sigma_to_xi(x_to_sigma(x, d), d);
    std::size_t pos = l;
    pt.fibers.resize(l);
    for (std::size_t j = 0; j < l; ++j) {
        if (!(x[j] > 0)) throw DomainError("point_from_momentum: non-positive base coordinate");
        for (int k = 0; k < d.mult()[j]; ++k) pt.fibers[j].push_back(y[pos++] / (K[j] * x[j]));
    }
    require_domain(pt, d);
    return pt;
}

BasicXiPoint<long double> extend(const XiPoint& pt) {
    BasicXiPoint<long double> out;
    out.xi.assign(pt.xi.begin(), pt.xi.end());
    for (const auto& f : pt.fibers) out.fibers.emplace_back(f.begin(), f.end());
    return out;
}

std::vector<double> xtilde_coords(const XiPoint& pt, const AnsatzData& d) {
    require_domain(pt, d);
    return x_to_xtilde(xi_to_x(pt.xi, d), pt.fibers);
}

XiPoint point_from_xtilde(const std::vector<double>& xt, const AnsatzData& d) {
    std::vector<double> x;
    XiPoint pt;
    xtilde_to_x(xt, d.mult(), x, pt.fibers);
    pt.xi = sigma_to_xi(x_to_sigma(x, d), d);
    require_domain(pt, d);
    return pt;
}

Eigen::MatrixXd xtilde_to_momentum(const AnsatzData& d) {
    const std::size_t l = d.ell();
    const int m = d.m();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    std::size_t pos = l;
    for (std::size_t j = 0; j < l; ++j) {
        M(j, j) = 1.0;
        for (int k = 0; k < d.mult()[j]; ++k) {
            M(j, pos) = 1.0;
            M(pos, pos) = d.num.kappa[j];
            ++pos;
        }
    }
    return M;
}

template <class T> EMatrix<T> fubini_study_gram(const std::vector<T>& fiber, T rj) {
    const auto n = static_cast<Eigen::Index>(fiber.size());
    Eigen::Matrix<T, Eigen::Dynamic, 1> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = fiber[i];
    EMatrix<T> H = EMatrix<T>(v.asDiagonal()) - v * v.transpose();
    return (T(2) / rj) * H;
}

template <class T> EMatrix<T> full_gram(const BasicXiPoint<T>& pt, const AnsatzData& d) {
    require_domain(pt, d);
    const std::size_t l = d.ell();
    const int m = d.m();
    EMatrix<T> Gxx = to_eigen(base_gram(pt.xi, d));
    if (m == static_cast<int>(l)) return Gxx;
    auto x = xi_to_x(pt.xi, d);
    const auto& K = d.coeffs<T>().kappa;

    // (group, coordinate) of each fiber slot.
    std::vector<std::pair<std::size_t, T>> slot;
    for (std::size_t j = 0; j < l; ++j)
        for (T v : pt.fibers[j]) slot.emplace_back(j, v);

    EMatrix<T> G = EMatrix<T>::Zero(m, m);
    G.topLeftCorner(l, l) = Gxx;
    for (std::size_t a = 0; a < slot.size(); ++a) {
        const auto [j, xa] = slot[a];
        const auto A = static_cast<Eigen::Index>(l + a);
        for (std::size_t i = 0; i < l; ++i) {
            G(i, A) = K[j] * xa * Gxx(i, j);
            G(A, i) = G(i, A);
        }
        for (std::size_t b = 0; b < slot.size(); ++b) {
            const auto [jb, xb] = slot[b];
            G(A, l + b) = K[j] * K[jb] * xa * xb * Gxx(j, jb);
        }
    }
    std::size_t pos = l;
    for (std::size_t j = 0; j < l; ++j) {
        const auto n = static_cast<Eigen::Index>(pt.fibers[j].size());
        if (n == 0) continue;
        G.block(pos, pos, n, n) += K[j] * x[j] * fubini_study_gram(pt.fibers[j], d.coeffs<T>().r[j]);
        pos += static_cast<std::size_t>(n);
    }
    return G;
}

#define TORICALE_INSTANTIATE(T)                                                                    \
    template bool in_domain<T>(const BasicXiPoint<T>&, const AnsatzData&);                        \
    template void require_domain<T>(const BasicXiPoint<T>&, const AnsatzData&);                   \
    template std::vector<T> sigma_to_xi<T>(const std::vector<T>&, const AnsatzData&);             \
    template std::vector<T> momentum_coords<T>(const BasicXiPoint<T>&, const AnsatzData&);        \
    template BasicXiPoint<T> point_from_momentum<T>(const std::vector<T>&, const AnsatzData&);     \
    template EMatrix<T> fubini_study_gram<T>(const std::vector<T>&, T);                           \
    template EMatrix<T> full_gram<T>(const BasicXiPoint<T>&, const AnsatzData&);

TORICALE_INSTANTIATE(double)
TORICALE_INSTANTIATE(long double)
#undef TORICALE_INSTANTIATE

Eigen::MatrixXd xtilde_gram(const XiPoint& pt, const AnsatzData& d) {
    Eigen::MatrixXd Minv = xtilde_to_momentum(d).inverse();
    return Minv * full_gram(pt, d) * Minv.transpose();
}

namespace {

double base_point(const AnsatzData& d, std::size_t j) {
    if (j + 1 < d.ell()) return 0.5 * (d.num.alpha[j] + d.num.alpha[j + 1]);
    return 1.0;
}

// Weight g_j of the j-th integral: 1/Theta, or p/(Theta F_l) on the last interval.
double potential_weight(const AnsatzData& d, std::size_t j, double t) {
    if (j + 1 < d.ell() || d.flat) return 1.0 / d.num.theta(t);
    return d.num.p(t) / (d.num.theta(t) * d.num.f_ell(t));
}

double fiber_entropy(const std::vector<double>& v) {
    double s = 0, acc = 0;
    for (double x : v) {
        acc += x * std::log(x);
        s += x;
    }
    return acc + (1 - s) * std::log(1 - s);
}

} // namespace

double symplectic_potential(const XiPoint& pt, const AnsatzData& d) {
    require_domain(pt, d);
    const std::size_t l = d.ell();
    double u0 = 0;
    for (std::size_t j = 0; j < l; ++j) {
        auto f = [&](double t) {
            double q = 1;
            for (double xk : pt.xi) q *= (t - xk);
            return q * potential_weight(d, j, t);
        };
        u0 -= integrate(f, base_point(d, j), pt.xi[j]);
    }
    auto x = xi_to_x(pt.xi, d);
    double fib = 0;
    for (std::size_t j = 0; j < l; ++j)
        if (!pt.fibers[j].empty()) fib += d.num.kappa[j] * x[j] * 0.5 * d.num.r[j] * fiber_entropy(pt.fibers[j]);
    return u0 + fib;
}

std::vector<double> symplectic_gradient(const XiPoint& pt, const AnsatzData& d) {
    require_domain(pt, d);
    const std::size_t l = d.ell();
    std::vector<double> dsigma(l, 0.0);
    for (std::size_t r = 1; r <= l; ++r) {
        const int pw = static_cast<int>(l - r);
        double acc = 0;
        for (std::size_t j = 0; j < l; ++j) {
            auto f = [&](double t) { return std::pow(t, pw) * potential_weight(d, j, t); };
            acc += integrate(f, base_point(d, j), pt.xi[j]);
        }
        dsigma[r - 1] = (r % 2) ? acc : -acc; // -(-1)^r acc
    }
    auto J = sigma_x_jacobian<double>(d);
    std::vector<double> grad(d.m(), 0.0);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t r = 0; r < l; ++r) grad[i] += dsigma[r] * J[r][i];
    std::size_t pos = l;
    for (std::size_t j = 0; j < l; ++j) {
        if (pt.fibers[j].empty()) continue;
        const double half_r = 0.5 * d.num.r[j];
        double s = std::accumulate(pt.fibers[j].begin(), pt.fibers[j].end(), 0.0);
        grad[j] += d.num.kappa[j] * half_r * std::log(1 - s);
        for (double v : pt.fibers[j]) grad[pos++] = half_r * std::log(v / (1 - s));
    }
    return grad;
}

double flat_kahler_potential(const std::vector<double>& xi, const AnsatzData& d) {
    double s = 0;
    for (double v : xi) s += v;
    return 0.5 * (s - d.sigma1_alpha().get_d());
}

double kahler_potential(const std::vector<double>& xi, const AnsatzData& d) {
    if (xi.size() != d.ell()) throw InvalidInput("kahler_potential: wrong length");
    double hf = flat_kahler_potential(xi, d);
    if (d.flat) return hf;
    const double top = xi.back();
    if (!(top > 0)) throw DomainError("kahler_potential: last coordinate must be positive");
    const double a = d.num.lin_a, b = d.num.const_b;
    // t = e^u keeps the integrand tame for large and small top.
    auto f = [&](double u) {
        double t = std::exp(u);
        return (a * t + b) * t / d.num.f_ell(t);
    };
    return hf - 0.5 * integrate(f, 0.0, std::log(top));
}

double CalabiProfile::operator()(double xi) const {
    return 2.0 / r.get_d() * P.cast<double>()(xi) / std::pow(xi, n);
}

Rational CalabiProfile::exact(const Rational& xi) const {
    return Rational(2 / r * P(xi) / rpow(xi, n));
}

Rational CalabiProfile::exact_derivative(const Rational& xi) const {
    // (2/r) (P' xi - n P) / xi^{n+1}
    return Rational(2 / r * (P.derivative()(xi) * xi - n * P(xi)) / rpow(xi, n + 1));
}

Poly<Rational> CalabiProfile::quotient_formula() const {
    QVec c(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(n - i)] = rpow(alpha, i);
    c[0] = (r - n) * rpow(alpha, n);
    return Poly<Rational>(c);
}

CalabiProfile calabi_profile(const Rational& r, int n, const Rational& alpha) {
    if (r <= 0) throw InvalidInput("calabi_profile: r must be positive");
    if (n < 1) throw InvalidInput("calabi_profile: n must be at least 1");
    if (alpha < 0) throw InvalidInput("calabi_profile: alpha must be non-negative");
    CalabiProfile cp;
    cp.r = r;
    cp.n = n;
    cp.alpha = alpha;
    QVec c(static_cast<std::size_t>(n) + 2, Rational(0));
    c[static_cast<std::size_t>(n) + 1] = 1;
    c[1] = (r - n - 1) * rpow(alpha, n);
    c[0] = (n - r) * rpow(alpha, n + 1);
    cp.P = Poly<Rational>(c);
    return cp;
}

} // namespace toricale
