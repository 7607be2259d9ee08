#include "toricale/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace toricale {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
constexpr double kPi = 3.14159265358979323846;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

unsigned prime(std::size_t i) {
    if (i >= std::size(kPrimes)) throw InvalidInput("too many quasi-random dimensions");
    return kPrimes[i];
}

// Unit interval value mapped into the j-th open xi interval.
double map_interval(const AnsatzData& d, std::size_t j, double u) {
    const double lo = d.lower(j), hi = d.upper(j);
    if (std::isfinite(hi)) return lo + (hi - lo) * u;
    const double s = std::abs(d.num.alpha.back());
    return lo + s * std::tan(0.5 * kPi * u);
}

// n values in the open simplex, kept a margin away from its facets.
std::vector<double> simplex_point(const std::vector<double>& u) {
    const std::size_t n = u.size();
    std::vector<double> cuts = u;
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out(n);
    const double eps = 0.1;
    double prev = 0;
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = (cuts[k] - prev + eps) / (1 + (n + 1) * eps);
        prev = cuts[k];
    }
    return out;
}

std::vector<std::vector<double>> fiber_sample(const AnsatzData& d, std::uint64_t index, std::size_t first_dim) {
    std::vector<std::vector<double>> fibers(d.ell());
    std::size_t dim = first_dim;
    for (std::size_t j = 0; j < d.ell(); ++j) {
        std::vector<double> u;
        for (int k = 0; k < d.mult()[j]; ++k) u.push_back(halton(index, prime(dim++)));
        fibers[j] = simplex_point(u);
    }
    return fibers;
}

std::uint64_t start_index(std::uint64_t seed) { return 1 + seed * 7919; }

Eigen::VectorXd as_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> as_std(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct Approach {
    Eigen::VectorXd base;
    Eigen::VectorXd dir; // the facet functional grows by t along t * dir
    Eigen::VectorXd normal;
};

Approach facet_approach(const AnsatzData& d, std::size_t facet) {
    const auto P = ansatz_polytope(d);
    if (facet >= P.facets.size()) throw InvalidInput("facet index out of range");
    const int m = d.m();
    const auto& F = P.facets[facet];
    Approach a;
    a.normal = Eigen::VectorXd(m);
    for (int i = 0; i < m; ++i) a.normal(i) = F.normal[i].get_d();
    if (F.label == "sum") {
        a.base = Eigen::VectorXd::Constant(m, 1.0 / m);
        a.dir = Eigen::VectorXd::Constant(m, 1.0 / m);
    } else {
        int idx = 0;
        while (F.coeffs[idx] == 0) ++idx;
        a.base = Eigen::VectorXd::Constant(m, 3.0 / m);
        a.base(idx) = 0;
        a.dir = Eigen::VectorXd::Zero(m);
        a.dir(idx) = 1;
    }
    return a;
}

Eigen::MatrixXd gram_at_xtilde(const Eigen::VectorXd& xt, const AnsatzData& d) {
    return xtilde_gram(point_from_xtilde(as_std(xt), d), d);
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
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

nlohmann::ordered_json to_json(const CheckReport& r, bool with_timing) {
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["grid"] = r.grid;
    j["max_residual"] = r.max_residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["points"] = r.points;
    j["seconds"] = with_timing ? r.seconds : 0.0;
    j["details"] = r.details;
    return j;
}

double halton(std::uint64_t index, unsigned base) {
    double f = 1, r = 0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

std::vector<XiPoint> xi_grid(const AnsatzData& d, int per_interval, std::uint64_t seed) {
    if (per_interval < 1) throw InvalidInput("xi_grid: need at least one point per interval");
    const std::size_t l = d.ell();
    std::vector<XiPoint> out;
    std::vector<int> idx(l, 0);
    std::uint64_t counter = start_index(seed);
    while (true) {
        XiPoint pt;
        for (std::size_t j = 0; j < l; ++j)
            pt.xi.push_back(map_interval(d, j, (idx[j] + 1.0) / (per_interval + 1.0)));
        pt.fibers = fiber_sample(d, counter++, 0);
        out.push_back(std::move(pt));
        std::size_t j = 0;
        while (j < l && idx[j] == per_interval - 1) idx[j++] = 0;
        if (j == l) break;
        ++idx[j];
    }
    return out;
}

std::vector<XiPoint> halton_points(const AnsatzData& d, int count, std::uint64_t seed) {
    std::vector<XiPoint> out;
    const std::size_t l = d.ell();
    for (int i = 0; i < count; ++i) {
        const std::uint64_t index = start_index(seed) + static_cast<std::uint64_t>(i);
        XiPoint pt;
        for (std::size_t j = 0; j < l; ++j) pt.xi.push_back(map_interval(d, j, 0.02 + 0.96 * halton(index, prime(j))));
        pt.fibers = fiber_sample(d, index, l);
        out.push_back(std::move(pt));
    }
    return out;
}

LabelledPolytope ansatz_polytope(const AnsatzData& d) { return wps_polytope(d.weights, d.flat); }

double boundary_distance(const XiPoint& pt, const AnsatzData& d) {
    auto xt = xtilde_coords(pt, d);
    double dist = *std::min_element(xt.begin(), xt.end());
    if (!d.flat) dist = std::min(dist, std::accumulate(xt.begin(), xt.end(), 0.0) - 1.0);
    return dist;
}

double abreu_scalar(const XiPoint& pt, const AnsatzData& d, double h) {
    using L = long double;
    const double dist = boundary_distance(pt, d);
    if (h <= 0) h = std::max(1e-4, 1e-2 * dist);
    if (dist < 4 * h) throw DomainError("abreu_scalar: point too close to the boundary for the stencil");
    // Root recovery at nearby xi loses digits; the stencil runs in extended precision.
    const auto p0 = extend(pt);
    const auto y0 = momentum_coords(p0, d);
    const int m = d.m();
    auto gram = [&](const std::vector<L>& y) { return full_gram(point_from_momentum(y, d), d); };
    const EMatrix<L> G0 = full_gram(p0, d);
    auto scalar = [&](L s) {
        L acc = 0;
        for (int u = 0; u < m; ++u) {
            auto yp = y0, ym = y0;
            yp[u] += s;
            ym[u] -= s;
            acc += (gram(yp)(u, u) - 2 * G0(u, u) + gram(ym)(u, u)) / (s * s);
        }
        for (int u = 0; u < m; ++u)
            for (int v = u + 1; v < m; ++v) {
                auto ypp = y0, ypm = y0, ymp = y0, ymm = y0;
                ypp[u] += s, ypp[v] += s;
                ypm[u] += s, ypm[v] -= s;
                ymp[u] -= s, ymp[v] += s;
                ymm[u] -= s, ymm[v] -= s;
                acc += 2 * (gram(ypp)(u, v) - gram(ypm)(u, v) - gram(ymp)(u, v) + gram(ymm)(u, v)) / (4 * s * s);
            }
        return -acc;
    };
    const L hl = h;
    return static_cast<double>((4 * scalar(hl / 2) - scalar(hl)) / 3);
}

FacetResult boundary_check_facet(const AnsatzData& d, std::size_t facet, const VerifyConfig& cfg) {
    const auto P = ansatz_polytope(d);
    const Approach a = facet_approach(d, facet);
    FacetResult res;
    res.label = P.facets[facet].label;
    const double t0 = 0.02;
    const int K = 6;
    std::vector<double> lt, ln;
    for (int k = 0; k < K; ++k) {
        const double t = t0 * std::pow(0.5, k);
        Eigen::VectorXd H_u = gram_at_xtilde(a.base + t * a.dir, d) * a.normal;
        lt.push_back(std::log(t));
        ln.push_back(std::log(H_u.norm()));
    }
    res.slope = fit_slope(lt, ln);
    res.halving_ratio = std::exp(ln[K - 2] - ln[K - 1]);

    auto grad = [&](double t) {
        const Eigen::VectorXd x = a.base + t * a.dir;
        const double step = t / 8;
        const int m = d.m();
        Eigen::VectorXd g(m);
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp(i) += step;
            xm(i) -= step;
            const double fp = a.normal.dot(gram_at_xtilde(xp, d) * a.normal);
            const double fm = a.normal.dot(gram_at_xtilde(xm, d) * a.normal);
            g(i) = (fp - fm) / (2 * step);
        }
        return g;
    };
    const double ts = t0 / 16;
    const Eigen::VectorXd g0 = 2 * grad(ts) - grad(2 * ts);
    res.derivative_error = (g0 - 2 * a.normal).norm() / (2 * a.normal).norm();
    res.pass = std::abs(res.slope - 1) <= cfg.slope_tol && std::abs(res.halving_ratio - 2) <= cfg.ratio_tol &&
               res.derivative_error <= cfg.derivative_tol;
    return res;
}

CheckReport abreu_check(const AnsatzData& d, const VerifyConfig& cfg) {
    Timer timer;
    CheckReport rep;
    rep.check = "abreu";
    rep.tolerance = d.flat ? cfg.flat_noise_tol : cfg.abreu_tol;
    auto grid = xi_grid(d, cfg.grid_per_interval, cfg.seed);
    rep.grid = std::to_string(cfg.grid_per_interval) + "^" + std::to_string(d.ell()) + " xi tensor grid";
    double worst = 0;
    std::size_t skipped = 0;
    for (const auto& pt : grid) {
        double s;
        try {
            s = abreu_scalar(pt, d);
        } catch (const DomainError&) {
            ++skipped;
            continue;
        }
        worst = std::max(worst, std::abs(s));
        ++rep.points;
    }
    rep.max_residual = worst;
    rep.pass = rep.points > 0 && worst <= rep.tolerance;
    rep.details["skipped_near_boundary"] = skipped;
    rep.seconds = timer.seconds();
    return rep;
}

CheckReport boundary_check(const AnsatzData& d, const VerifyConfig& cfg) {
    Timer timer;
    CheckReport rep;
    rep.check = "boundary";
    rep.grid = "facet approach t = 0.02 * 2^-k, k < 6";
    rep.tolerance = cfg.derivative_tol;
    rep.pass = true;
    const auto P = ansatz_polytope(d);
    nlohmann::json facets = nlohmann::json::array();
    for (std::size_t f = 0; f < P.facets.size(); ++f) {
        FacetResult r = boundary_check_facet(d, f, cfg);
        rep.pass = rep.pass && r.pass;
        rep.max_residual = std::max(rep.max_residual, r.derivative_error);
        facets.push_back({{"facet", r.label},
                          {"slope", r.slope},
                          {"halving_ratio", r.halving_ratio},
                          {"derivative_error", r.derivative_error},
                          {"pass", r.pass}});
        ++rep.points;
    }
    rep.details["facets"] = facets;
    rep.seconds = timer.seconds();
    return rep;
}

CheckReport positivity_check(const AnsatzData& d, const VerifyConfig& cfg) {
    Timer timer;
    CheckReport rep;
    rep.check = "positivity";
    rep.grid = std::to_string(cfg.random_points) + " Halton points";
    rep.tolerance = 0;
    double min_eig = std::numeric_limits<double>::infinity();
    double min_w = std::numeric_limits<double>::infinity();
    for (const auto& pt : halton_points(d, cfg.random_points, cfg.seed)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full_gram(pt, d), Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        for (double w : vertical_weights(pt.xi, d)) min_w = std::min(min_w, w);
        ++rep.points;
    }
    rep.max_residual = std::max(0.0, -std::min(min_eig, min_w));
    rep.pass = min_eig > 0 && min_w > 0;
    rep.details["min_eigenvalue"] = min_eig;
    rep.details["min_vertical_weight"] = min_w;
    rep.seconds = timer.seconds();
    return rep;
}

namespace {

double det_ratio(const Eigen::VectorXd& xt, const AnsatzData& d) {
    const double det = gram_at_xtilde(xt, d).determinant();
    double den = xt.prod();
    if (!d.flat) den *= xt.sum() - 1;
    return det / den;
}

} // namespace

CheckReport det_factorization(const AnsatzData& d, const VerifyConfig& cfg) {
    Timer timer;
    CheckReport rep;
    rep.check = "det_factorization";
    rep.grid = std::to_string(cfg.random_points) + " Halton points + facet approaches";
    rep.tolerance = cfg.det_variation_tol;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& pt : halton_points(d, cfg.random_points, cfg.seed)) {
        min_ratio = std::min(min_ratio, det_ratio(as_vec(xtilde_coords(pt, d)), d));
        ++rep.points;
    }
    const auto P = ansatz_polytope(d);
    nlohmann::json facets = nlohmann::json::array();
    double worst = 0;
    for (std::size_t f = 0; f < P.facets.size(); ++f) {
        const Approach a = facet_approach(d, f);
        std::vector<double> vals;
        for (int k = 2; k < 6; ++k) {
            double v = det_ratio(a.base + 0.02 * std::pow(0.5, k) * a.dir, d);
            min_ratio = std::min(min_ratio, v);
            vals.push_back(v);
            ++rep.points;
        }
        auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
        const double variation = (*hi - *lo) / std::abs(*lo);
        worst = std::max(worst, variation);
        facets.push_back({{"facet", P.facets[f].label}, {"limit_estimate", vals.back()}, {"variation", variation}});
    }
    rep.max_residual = worst;
    rep.pass = min_ratio > 0 && worst <= rep.tolerance;
    rep.details["min_ratio"] = min_ratio;
    rep.details["facets"] = facets;
    rep.seconds = timer.seconds();
    return rep;
}

bool vandermonde_identities(const QVec& alpha, std::string* why) {
    const std::size_t l = alpha.size();
    QVec den(l, Rational(1));
    Rational prod_alpha = 1;
    for (std::size_t j = 0; j < l; ++j) {
        prod_alpha *= alpha[j];
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) den[j] *= alpha[j] - alpha[k];
    }
    for (std::size_t s = 1; s <= l; ++s) {
        Rational sum = 0;
        for (std::size_t j = 0; j < l; ++j) sum += rpow(alpha[j], static_cast<int>(l - s)) / den[j];
        if (sum != (s == 1 ? 1 : 0)) {
            if (why) *why = "power identity fails at s = " + std::to_string(s) + ": " + to_string(sum);
            return false;
        }
    }
    Rational inv = 0;
    for (std::size_t j = 0; j < l; ++j) inv += 1 / (alpha[j] * den[j]);
    Rational expect = Rational((l % 2) ? 1 : -1) / prod_alpha;
    if (inv != expect) {
        if (why) *why = "reciprocal identity: " + to_string(inv) + " vs " + to_string(expect);
        return false;
    }
    return true;
}

CheckReport vandermonde_check(const AnsatzData& d) {
    CheckReport rep;
    rep.check = "vandermonde";
    rep.grid = "exact";
    rep.points = 1;
    std::string why;
    rep.pass = vandermonde_identities(d.exact.alpha, &why);
    rep.max_residual = rep.pass ? 0 : 1;
    if (!rep.pass) rep.details["failure"] = why;
    return rep;
}

Eigen::MatrixXd potential_gram_fd(const XiPoint& pt, const AnsatzData& d, double h) {
    const auto y0 = momentum_coords(pt, d);
    const double dist = boundary_distance(pt, d);
    if (h <= 0) h = std::max(1e-4, 1e-2 * dist);
    if (dist < 4 * h) throw DomainError("potential_gram_fd: point too close to the boundary");
    const int m = d.m();
    auto hess = [&](double s) {
        Eigen::MatrixXd H(m, m);
        for (int i = 0; i < m; ++i) {
            auto yp = y0, ym = y0;
            yp[i] += s;
            ym[i] -= s;
            auto gp = symplectic_gradient(point_from_momentum(yp, d), d);
            auto gm = symplectic_gradient(point_from_momentum(ym, d), d);
            for (int k = 0; k < m; ++k) H(k, i) = (gp[k] - gm[k]) / (2 * s);
        }
        return H;
    };
    Eigen::MatrixXd R = (4 * hess(h / 2) - hess(h)) / 3;
    R = 0.5 * (R + R.transpose());
    return R.inverse();
}

CheckReport hessian_consistency(const AnsatzData& d, const VerifyConfig& cfg) {
    Timer timer;
    CheckReport rep;
    rep.check = "hessian_consistency";
    rep.grid = std::to_string(cfg.hessian_points) + " Halton points";
    rep.tolerance = cfg.hessian_tol;
    double worst_cond = 0;
    for (const auto& pt : halton_points(d, cfg.hessian_points, cfg.seed + 1)) {
        const Eigen::MatrixXd G = full_gram(pt, d);
        const Eigen::MatrixXd Gfd = potential_gram_fd(pt, d);
        rep.max_residual = std::max(rep.max_residual, (Gfd - G).norm() / G.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
        worst_cond = std::max(worst_cond, es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff());
        ++rep.points;
    }
    rep.pass = rep.points > 0 && rep.max_residual <= rep.tolerance;
    rep.details["max_condition_number"] = worst_cond;
    if (worst_cond > 1e10) rep.details["warning"] = "ill-conditioned Gram matrix";
    rep.seconds = timer.seconds();
    return rep;
}

CheckReport lattice_check(const GroupedWeights& g) {
    CheckReport rep;
    rep.check = "lattice_index";
    rep.grid = "exact";
    rep.points = 1;
    const std::size_t l = g.ell();
    const auto P = base_polytope(g);
    const Integer index = lattice_index(normal_lattice(P), standard_lattice(l));
    Integer prod = g.a0;
    for (auto v : g.a) prod *= v;
    const Integer expected = ipow(prod, static_cast<unsigned>(l - 1));
    IMatrix rows;
    for (const auto& f : P.facets) {
        std::vector<Integer> row;
        for (const auto& q : f.normal) row.push_back(q.get_num());
        rows.push_back(std::move(row));
    }
    const Integer minors = gcd_of_maximal_minors(rows);
    rep.pass = index == expected && minors == expected;
    rep.max_residual = rep.pass ? 0 : 1;
    rep.details["index"] = index.get_str();
    rep.details["gcd_of_maximal_minors"] = minors.get_str();
    rep.details["expected"] = expected.get_str();
    return rep;
}

BiPoly calabi_scalar_residual(const Rational& r, int n) {
    if (r <= 0 || n < 1) throw InvalidInput("calabi_scalar_residual: need r > 0, n >= 1");
    // xi^n Theta = (2/r) P, P = xi^{n+1} + (r-n-1) alpha^n xi + (n-r) alpha^{n+1}
    BiPoly P;
    P[{n + 1, 0}] += 1;
    P[{1, n}] += r - n - 1;
    P[{0, n + 1}] += n - r;
    BiPoly out;
    for (const auto& [deg, coef] : P) {
        const int i = deg.first;
        if (i < 2) continue;
        out[{i - 2, deg.second}] -= Rational(2) / r * coef * i * (i - 1);
    }
    out[{n - 1, 0}] += Rational(2 * n * (n + 1)) / r;
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == 0)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

} // namespace toricale
