#include "toricale/surface.hpp"

#include <algorithm>
#include <cmath>

#include "toricale/verify.hpp"

namespace toricale {

namespace {

template <class T> Poly<T> as(const Poly<Rational>& p) {
    if constexpr (std::is_same_v<T, Rational>)
        return p;
    else
        return p.template cast<T>();
}

template <class T> T tabs(const T& x) { return x < T(0) ? T(-x) : x; }

// Radical inverse as an exact fraction.
Rational halton_q(std::uint64_t index, unsigned base) {
    Integer num = 0, den = 1;
    while (index) {
        num = num * base + index % base;
        den *= base;
        index /= base;
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

template <class T> void sample_point(const SurfaceData& s, const T& u, const T& w, T& p1, T& p2) {
    const auto& C = s.ansatz.coeffs<T>();
    const T stretch = T(w / (T(1) - w));
    if (s.kind == SurfaceKind::orthotoric) {
        p1 = T(C.alpha[0] + (C.alpha[1] - C.alpha[0]) * u);
        p2 = T(stretch * T(s.a0 * s.a0));
    } else {
        p1 = T(stretch * tabs(C.alpha[0]));
        p2 = u;
    }
}

struct FacetDef {
    std::string label;
    Rational g1, g2, c, mult;
};

// Dual simplex facets, in the order x1, x2, sum of the standard simplex.
std::vector<FacetDef> facet_defs(const SurfaceData& s) {
    const auto& A = s.ansatz.exact.alpha;
    if (s.kind == SurfaceKind::orthotoric) {
        const Rational gap = A[1] - A[0];
        return {{"x1", Rational(-A[0]), 1, Rational(-1, 2), Rational(-A[1] / gap)},
                {"x2", A[1], -1, Rational(1, 2), Rational(-A[0] / gap)},
                {"sum", 0, 1, Rational(1, 2), 1}};
    }
    const Rational w = abs(A[0]);
    return {{"x1", 1, -1, 0, w}, {"x2", 0, 1, 0, w}, {"sum", -1, 0, Rational(1 / w), w}};
}

std::vector<std::pair<int, int>> monomials(int degree) {
    std::vector<std::pair<int, int>> out;
    for (int tot = 0; tot <= degree; ++tot)
        for (int i = tot; i >= 0; --i) out.emplace_back(i, tot - i);
    return out;
}

enum class Fit { unique, inconsistent, underdetermined };

// Exact row reduction of an overdetermined system.
Fit solve_overdetermined(std::vector<QVec> A, QVec b, QVec& x) {
    const std::size_t rows = A.size(), cols = A.empty() ? 0 : A.front().size();
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t piv = r;
        while (piv < rows && A[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[r]);
        std::swap(b[piv], b[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][col] == 0) continue;
            Rational f = A[i][col] / A[r][col];
            for (std::size_t k = col; k < cols; ++k) A[i][k] -= f * A[r][k];
            b[i] -= f * b[r];
        }
        pivots.push_back(col);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0) return Fit::inconsistent;
    if (r < cols) return Fit::underdetermined;
    x.assign(cols, Rational(0));
    for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = b[i] / A[i][pivots[i]];
    return Fit::unique;
}

Rational partial(const BiPolyS& p, int var, const Rational& s1, const Rational& s2) {
    Rational acc = 0;
    for (const auto& [k, c] : p) {
        const int e = var == 0 ? k.first : k.second;
        if (e == 0) continue;
        const int e1 = var == 0 ? k.first - 1 : k.first;
        const int e2 = var == 0 ? k.second : k.second - 1;
        acc += c * e * rpow(s1, e1) * rpow(s2, e2);
    }
    return acc;
}

QVec intersect(const FacetDef& f, const FacetDef& g) {
    const Rational det = f.g1 * g.g2 - f.g2 * g.g1;
    if (det == 0) throw NumericFailure("dual facets are parallel");
    return {Rational((-f.c * g.g2 + g.c * f.g2) / det), Rational((-g.c * f.g1 + f.c * g.g1) / det)};
}

std::string monomial_key(int i, int j) { return "s1^" + std::to_string(i) + " s2^" + std::to_string(j); }

nlohmann::ordered_json strings(const QVec& v) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

} // namespace

SurfaceData surface_data(std::int64_t a0, std::int64_t a1, std::int64_t a2) {
    if (a0 <= 0 || a1 <= 0 || a2 <= 0) throw InvalidInput("surface: weights must be positive");
    if (gcd64(a0, gcd64(a1, a2)) != 1) throw InvalidInput("surface: gcd(a0, a1, a2) must be 1");
    if (a1 > a2) std::swap(a1, a2);
    SurfaceData s;
    s.a0 = a0;
    s.a1 = a1;
    s.a2 = a2;
    s.kind = a1 == a2 ? SurfaceKind::calabi : SurfaceKind::orthotoric;
    s.ansatz = build_ansatz(a0, {a1, a2});
    if (s.kind == SurfaceKind::orthotoric) {
        s.theta1 = Poly<Rational>::constant(2) * Poly<Rational>::linear_root(Rational(-a0 * a1)) *
                   Poly<Rational>::linear_root(Rational(-a0 * a2));
        s.theta2 = Poly<Rational>::constant(2) * Poly<Rational>::linear_root(0) *
                   Poly<Rational>::linear_root(Rational(-a0 * a0));
        s.lambda = Rational(a0 * a0) * a1 * a2;
    } else {
        s.theta1 = s.ansatz.exact.theta;
        s.theta2 = s.ansatz.exact.f_ell;
        s.lambda = Rational(1, static_cast<unsigned long>(a1 * a1 * a1 * a1));
    }
    return s;
}

template <class T> bool surface_in_domain(const T& p1, const T& p2, const SurfaceData& s) {
    const auto& A = s.ansatz.coeffs<T>().alpha;
    if (s.kind == SurfaceKind::orthotoric) return p1 > A[0] && p1 < A[1] && p2 > T(0);
    return p1 > T(0) && p2 > T(0) && p2 < T(1);
}

template <class T> Mat<T> orthotoric_gram(const T& xi1, const T& xi2, const SurfaceData& s) {
    if (s.kind != SurfaceKind::orthotoric) throw InvalidInput("orthotoric_gram: Calabi data");
    if (!surface_in_domain(xi1, xi2, s)) throw DomainError("orthotoric_gram: point outside the domain");
    const T t1 = as<T>(s.theta1)(xi1), t2 = as<T>(s.theta2)(xi2);
    const T gap = T(xi2 - xi1);
    Mat<T> H(2, std::vector<T>(2));
    H[0][0] = T((t2 - t1) / gap);
    H[0][1] = H[1][0] = T((xi1 * t2 - xi2 * t1) / gap);
    H[1][1] = T((xi1 * xi1 * t2 - xi2 * xi2 * t1) / gap);
    return H;
}

template <class T> Mat<T> surface_gram(const T& p1, const T& p2, const SurfaceData& s) {
    if (s.kind == SurfaceKind::orthotoric) return orthotoric_gram(p1, p2, s);
    if (!surface_in_domain(p1, p2, s)) throw DomainError("surface_gram: point outside the domain");
    const auto& C = s.ansatz.coeffs<T>();
    const T G = base_gram(std::vector<T>{p1}, s.ansatz)[0][0];
    const T q = T(-C.alpha[0] / C.r[0]);
    const T z = T(p1 - C.alpha[0]);
    const T qq = T(q * q);
    Mat<T> H(2, std::vector<T>(2));
    H[0][0] = T(G * qq);
    H[0][1] = H[1][0] = T(p2 * G * qq);
    H[1][1] = T(p2 * p2 * G * qq + T(2) / T(C.kappa[0] * C.r[0]) * z * q * (p2 - p2 * p2));
    return H;
}

template <class T> DualPoint<T> bochner_dual(const T& p1, const T& p2, const SurfaceData& s) {
    DualPoint<T> d;
    d.H = surface_gram(p1, p2, s);
    d.Htilde.assign(2, std::vector<T>(2));
    if (s.kind == SurfaceKind::orthotoric) {
        const T diff = T(p1 - p2);
        d.s1 = T(T(-1) / diff);
        d.s2 = T(-(p1 + p2) / (T(2) * diff));
        const T t1 = as<T>(s.theta1)(p1), t2 = as<T>(s.theta2)(p2);
        const T cube = T(diff * diff * diff);
        d.Htilde[0][0] = T((t1 - t2) / cube);
        d.Htilde[0][1] = d.Htilde[1][0] = T((p2 * t1 - p1 * t2) / cube);
        d.Htilde[1][1] = T((p2 * p2 * t1 - p1 * p1 * t2) / cube);
    } else {
        const T z = T(p1 - s.ansatz.coeffs<T>().alpha[0]);
        d.s1 = T(T(1) / z);
        d.s2 = T(p2 / z);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) d.Htilde[i][j] = T(d.H[i][j] / (z * z));
    }
    d.factor = d.s1;
    return d;
}

Rational evaluate(const BiPolyS& p, const Rational& s1, const Rational& s2) {
    Rational acc = 0;
    for (const auto& [k, c] : p) acc += c * rpow(s1, k.first) * rpow(s2, k.second);
    return acc;
}

PolynomialityReport polynomiality_check(const SurfaceData& s, int degree, std::size_t samples, std::size_t held_out) {
    if (degree < 1) throw InvalidInput("polynomiality_check: degree must be positive");
    const auto mons = monomials(degree);
    const auto lower = monomials(degree - 1);
    const int pairs[3][2] = {{0, 0}, {0, 1}, {1, 1}};

    auto dual_at = [&](std::uint64_t k) {
        Rational p1, p2;
        sample_point<Rational>(s, halton_q(k, 2), halton_q(k, 3), p1, p2);
        return bochner_dual(p1, p2, s);
    };
    auto design = [](const std::vector<DualPoint<Rational>>& pts, const std::vector<std::pair<int, int>>& ms) {
        std::vector<QVec> A;
        for (const auto& p : pts) {
            QVec row;
            for (const auto& [i, j] : ms) row.push_back(rpow(p.s1, i) * rpow(p.s2, j));
            A.push_back(std::move(row));
        }
        return A;
    };

    PolynomialityReport rep;
    rep.degree = degree;
    std::vector<DualPoint<Rational>> pts;
    std::uint64_t next = 1;
    for (; pts.size() < samples; ++next) pts.push_back(dual_at(next));
    // Enlarge until the monomials are separated by the sample.
    while (rank(design(pts, mons)) < mons.size()) {
        if (pts.size() > 4 * mons.size() + samples) throw NumericFailure("polynomiality_check: sample stays rank deficient");
        pts.push_back(dual_at(next++));
    }
    std::vector<DualPoint<Rational>> test;
    for (std::size_t i = 0; i < held_out; ++i) test.push_back(dual_at(next++));
    rep.samples = pts.size();
    rep.held_out = test.size();

    const auto A = design(pts, mons);
    const auto A_low = design(pts, lower);
    rep.pass = true;
    for (const auto& e : pairs) {
        QVec b;
        for (const auto& p : pts) b.push_back(p.Htilde[e[0]][e[1]]);
        QVec x;
        BiPolyS poly;
        if (solve_overdetermined(A, b, x) != Fit::unique) {
            rep.pass = false;
        } else {
            for (std::size_t k = 0; k < mons.size(); ++k)
                if (x[k] != 0) poly[mons[k]] = x[k];
            for (const auto& p : test)
                if (evaluate(poly, p.s1, p.s2) != p.Htilde[e[0]][e[1]]) rep.pass = false;
        }
        rep.entries.push_back(std::move(poly));
        QVec y;
        if (solve_overdetermined(A_low, b, y) == Fit::inconsistent) rep.lower_degree_fails = true;
    }
    return rep;
}

DualPolytope dual_polytope(const SurfaceData& s) {
    const auto defs = facet_defs(s);
    const auto poly = polynomiality_check(s);
    DualPolytope dp;
    dp.simplex.dim = 2;
    dp.simplex.bounded = true;
    dp.boundary_ok = poly.pass;

    // Affine map to the standard simplex: rows of its linear part.
    const Rational A11 = defs[0].mult * defs[0].g1, A12 = defs[0].mult * defs[0].g2;
    const Rational A21 = defs[1].mult * defs[1].g1, A22 = defs[1].mult * defs[1].g2;
    const Rational det = A11 * A22 - A12 * A21;
    {
        const auto& f0 = defs[2];
        const bool linear = -(A11 + A21) == f0.mult * f0.g1 && -(A12 + A22) == f0.mult * f0.g2;
        const bool offset = 1 - defs[0].mult * defs[0].c - defs[1].mult * defs[1].c == f0.mult * f0.c;
        if (!linear || !offset) dp.boundary_ok = false;
    }

    std::vector<QVec> verts;
    for (std::size_t i = 0; i < 3; ++i) verts.push_back(intersect(defs[(i + 1) % 3], defs[(i + 2) % 3]));
    QVec centroid{Rational((verts[0][0] + verts[1][0] + verts[2][0]) / 3),
                  Rational((verts[0][1] + verts[1][1] + verts[2][1]) / 3)};
    dp.simplex.interior_point = centroid;

    for (std::size_t f = 0; f < 3; ++f) {
        const auto& def = defs[f];
        DualFacet out;
        out.label = def.label;
        out.functional = {def.g1, def.g2, def.c};
        out.multiplier = def.mult;
        const auto& va = verts[(f + 1) % 3];
        const auto& vb = verts[(f + 2) % 3];
        const Rational p1 = (va[0] + 2 * vb[0]) / 3, p2 = (va[1] + 2 * vb[1]) / 3;
        out.boundary_ok = poly.pass;
        if (poly.pass) {
            const auto& E = poly.entries;
            const Rational h11 = evaluate(E[0], p1, p2), h12 = evaluate(E[1], p1, p2), h22 = evaluate(E[2], p1, p2);
            // H~ g = 0 on the facet.
            if (h11 * def.g1 + h12 * def.g2 != 0 || h12 * def.g1 + h22 * def.g2 != 0) out.boundary_ok = false;
            QVec grad(2);
            for (int v = 0; v < 2; ++v)
                grad[v] = def.g1 * def.g1 * partial(E[0], v, p1, p2) + 2 * def.g1 * def.g2 * partial(E[1], v, p1, p2) +
                          def.g2 * def.g2 * partial(E[2], v, p1, p2);
            const int i = def.g1 != 0 ? 0 : 1;
            const Rational gi = i == 0 ? def.g1 : def.g2;
            if (grad[i] == 0) {
                out.boundary_ok = false;
            } else {
                const Rational mu = 2 * gi / grad[i];
                if (mu <= 0 || mu * grad[0] != 2 * def.g1 || mu * grad[1] != 2 * def.g2) out.boundary_ok = false;
                out.normal_dual = {Rational(mu * def.g1), Rational(mu * def.g2)};
                // u = A^T v
                const auto& u = out.normal_dual;
                out.normal_standard = {Rational((A22 * u[0] - A21 * u[1]) / det),
                                       Rational((-A12 * u[0] + A11 * u[1]) / det)};
            }
        }
        dp.boundary_ok = dp.boundary_ok && out.boundary_ok;
        Facet pf;
        pf.coeffs = {def.g1, def.g2};
        pf.offset = def.c;
        pf.normal = out.normal_dual;
        pf.label = def.label;
        dp.simplex.facets.push_back(std::move(pf));
        dp.facets.push_back(std::move(out));
    }

    if (dp.boundary_ok) {
        const Rational a0 = s.a0, a1 = s.a1, a2 = s.a2;
        dp.normal_scale = dp.facets[0].normal_standard[0] / (a0 * a2);
        const Rational& k = dp.normal_scale;
        dp.weight_pattern = dp.facets[0].normal_standard == QVec{Rational(k * a0 * a2), Rational(0)} &&
                            dp.facets[1].normal_standard == QVec{Rational(0), Rational(k * a0 * a1)} &&
                            dp.facets[2].normal_standard == QVec{Rational(-k * a1 * a2), Rational(-k * a1 * a2)};
    }
    return dp;
}

std::vector<double> dual_to_standard(double s1, double s2, const SurfaceData& s) {
    const auto defs = facet_defs(s);
    std::vector<double> out;
    for (std::size_t f = 0; f < 2; ++f)
        out.push_back(defs[f].mult.get_d() * (defs[f].g1.get_d() * s1 + defs[f].g2.get_d() * s2 + defs[f].c.get_d()));
    return out;
}

ConformalReport conformal_factor_check(const SurfaceData& s, int points, double tol) {
    ConformalReport rep;
    rep.inside_simplex = true;
    rep.min_factor = std::numeric_limits<double>::infinity();
    rep.min_momentum_form = std::numeric_limits<double>::infinity();
    rep.max_momentum_form = -std::numeric_limits<double>::infinity();
    const double w = std::abs(s.ansatz.num.alpha[0]);
    for (int k = 1; k <= points; ++k) {
        double p1, p2;
        sample_point<double>(s, halton(k, 2), halton(k, 3), p1, p2);
        const auto d = bochner_dual(p1, p2, s);
        double scale = 0, dev = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                scale = std::max(scale, std::abs(d.H[i][j]));
                dev = std::max(dev, std::abs(d.Htilde[i][j] / (d.factor * d.factor) - d.H[i][j]));
            }
        rep.conformal_residual = std::max(rep.conformal_residual, dev / scale);
        const auto xt = dual_to_standard(d.s1, d.s2, s);
        if (!(xt[0] > 0 && xt[1] > 0 && 1 - xt[0] - xt[1] > 0)) rep.inside_simplex = false;
        double affine, form;
        if (s.kind == SurfaceKind::orthotoric) {
            affine = xt[0] / static_cast<double>(s.a0 * s.a1) + xt[1] / static_cast<double>(s.a0 * s.a2);
            form = -affine;
        } else {
            affine = (xt[0] + xt[1]) / w;
            form = affine;
        }
        rep.affine_residual = std::max(rep.affine_residual, std::abs(affine - d.factor) / std::abs(d.factor));
        rep.min_factor = std::min(rep.min_factor, d.factor);
        rep.min_momentum_form = std::min(rep.min_momentum_form, form);
        rep.max_momentum_form = std::max(rep.max_momentum_form, form);
        ++rep.points;
    }
    const bool sign_ok = s.kind == SurfaceKind::orthotoric ? rep.max_momentum_form < 0 : rep.min_momentum_form > 0;
    rep.pass = rep.inside_simplex && rep.min_factor > 0 && sign_ok && rep.conformal_residual <= tol &&
               rep.affine_residual <= tol;
    return rep;
}

nlohmann::ordered_json to_json(const SurfaceData& s, const DualPolytope& dp, const PolynomialityReport& pr,
                               const ConformalReport& cr) {
    nlohmann::ordered_json j;
    j["kind"] = s.kind == SurfaceKind::orthotoric ? "orthotoric" : "calabi";
    j["weights"] = {s.a0, s.a1, s.a2};
    j["lambda_a"] = to_string(s.lambda);
    j["normal_scale"] = dp.boundary_ok ? to_string(dp.normal_scale) : "";
    j["theta1"] = strings(s.theta1.c);
    j["theta2"] = strings(s.theta2.c);
    auto facets = nlohmann::ordered_json::array();
    for (const auto& f : dp.facets) {
        nlohmann::ordered_json jf;
        jf["label"] = f.label;
        jf["functional"] = strings(f.functional);
        jf["multiplier"] = to_string(f.multiplier);
        jf["normal_dual"] = strings(f.normal_dual);
        jf["normal_standard"] = strings(f.normal_standard);
        jf["boundary_ok"] = f.boundary_ok;
        facets.push_back(std::move(jf));
    }
    j["dual_facets"] = std::move(facets);
    j["weight_pattern"] = dp.weight_pattern;
    j["boundary_ok"] = dp.boundary_ok;

    nlohmann::ordered_json jp;
    jp["degree"] = pr.degree;
    jp["pass"] = pr.pass;
    jp["lower_degree_fails"] = pr.lower_degree_fails;
    jp["samples"] = pr.samples;
    jp["held_out"] = pr.held_out;
    const char* names[] = {"11", "12", "22"};
    nlohmann::ordered_json entries;
    for (std::size_t e = 0; e < pr.entries.size(); ++e) {
        nlohmann::ordered_json je = nlohmann::ordered_json::object();
        for (const auto& [k, c] : pr.entries[e]) je[monomial_key(k.first, k.second)] = to_string(c);
        entries[names[e]] = std::move(je);
    }
    jp["entries"] = std::move(entries);
    j["polynomiality"] = std::move(jp);

    nlohmann::ordered_json jc;
    jc["points"] = cr.points;
    jc["conformal_residual"] = cr.conformal_residual;
    jc["affine_residual"] = cr.affine_residual;
    jc["min_factor"] = cr.min_factor;
    jc["min_momentum_form"] = cr.min_momentum_form;
    jc["max_momentum_form"] = cr.max_momentum_form;
    jc["inside_simplex"] = cr.inside_simplex;
    jc["pass"] = cr.pass;
    j["conformal"] = std::move(jc);
    return j;
}

template bool surface_in_domain<double>(const double&, const double&, const SurfaceData&);
template bool surface_in_domain<Rational>(const Rational&, const Rational&, const SurfaceData&);
template Mat<double> orthotoric_gram<double>(const double&, const double&, const SurfaceData&);
template Mat<Rational> orthotoric_gram<Rational>(const Rational&, const Rational&, const SurfaceData&);
template Mat<double> surface_gram<double>(const double&, const double&, const SurfaceData&);
template Mat<Rational> surface_gram<Rational>(const Rational&, const Rational&, const SurfaceData&);
template DualPoint<double> bochner_dual<double>(const double&, const double&, const SurfaceData&);
template DualPoint<Rational> bochner_dual<Rational>(const Rational&, const Rational&, const SurfaceData&);

} // namespace toricale
