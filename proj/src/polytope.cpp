#include "toricale/polytope.hpp"

#include <algorithm>
#include <numeric>

namespace toricale {

Rational Facet::eval(const QVec& x) const {
    if (x.size() != coeffs.size()) throw InvalidInput("facet: dimension mismatch");
    Rational s = offset;
    for (std::size_t i = 0; i < x.size(); ++i) s += coeffs[i] * x[i];
    return s;
}

bool LabelledPolytope::contains(const QVec& x) const {
    return std::all_of(facets.begin(), facets.end(), [&](const Facet& f) { return f.eval(x) > 0; });
}

std::vector<std::size_t> coordinate_groups(const GroupedWeights& g) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < g.ell(); ++j) out.push_back(j);
    for (std::size_t j = 0; j < g.ell(); ++j)
        for (int k = 0; k < g.mult[j]; ++k) out.push_back(j);
    return out;
}

namespace {

Rational weight_product(const GroupedWeights& g) {
    Rational c = g.a0;
    for (auto v : g.a) c *= v;
    return c;
}

QVec unit(std::size_t d, std::size_t i, const Rational& s = 1) {
    QVec e(d, Rational(0));
    e[i] = s;
    return e;
}

Facet sum_facet(std::size_t d, const Rational& scale) {
    Facet f;
    f.coeffs = QVec(d, Rational(1));
    f.offset = -1;
    f.normal = QVec(d, scale);
    f.label = "sum";
    return f;
}

} // namespace

LabelledPolytope wps_polytope(const GroupedWeights& g, bool cone) {
    if (g.ell() == 0) throw InvalidInput("wps_polytope: no weights");
    const Rational c = weight_product(g);
    const auto groups = coordinate_groups(g);
    const std::size_t d = groups.size();
    LabelledPolytope p;
    p.dim = d;
    p.bounded = false;
    std::vector<int> seen(g.ell(), 0);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t j = groups[i];
        Facet f;
        f.coeffs = unit(d, i);
        f.offset = 0;
        f.normal = unit(d, i, Rational(c / g.a[j]));
        f.label = "x" + std::to_string(j + 1) + "_" + std::to_string(seen[j]++);
        p.facets.push_back(std::move(f));
    }
    if (!cone) p.facets.push_back(sum_facet(d, Rational(c / g.a0)));
    p.interior_point = QVec(d, cone ? Rational(1) : Rational(2, static_cast<unsigned long>(d)));
    for (auto& q : p.interior_point) q.canonicalize();
    return p;
}

LabelledPolytope base_polytope(const GroupedWeights& g) {
    GroupedWeights flat = g;
    std::fill(flat.mult.begin(), flat.mult.end(), 0);
    LabelledPolytope p = wps_polytope(flat, false);
    for (std::size_t j = 0; j < g.ell(); ++j) p.facets[j].label = "x" + std::to_string(j + 1);
    return p;
}

QVec facet_distance(const LabelledPolytope& p, const QVec& x) {
    if (x.size() != p.dim) throw InvalidInput("facet_distance: dimension mismatch");
    QVec out;
    for (const auto& f : p.facets) out.push_back(f.eval(x));
    return out;
}

std::vector<double> facet_distance(const LabelledPolytope& p, const std::vector<double>& x) {
    if (x.size() != p.dim) throw InvalidInput("facet_distance: dimension mismatch");
    std::vector<double> out;
    for (const auto& f : p.facets) {
        double s = f.offset.get_d();
        for (std::size_t i = 0; i < x.size(); ++i) s += f.coeffs[i].get_d() * x[i];
        out.push_back(s);
    }
    return out;
}

namespace {

// Solves A y = b exactly; returns false if A is singular.
bool solve_exact(std::vector<QVec> A, QVec b, QVec& y) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rational f = A[r][col] / A[col][col];
            for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
            b[r] -= f * b[col];
        }
    }
    y.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) y[i] = b[i] / A[i][i];
    return true;
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    combinations(n, k, 0, cur, out);
    return out;
}

} // namespace

std::vector<QVec> vertices(const LabelledPolytope& p) {
    std::vector<QVec> out;
    for (const auto& idx : combinations(p.facets.size(), p.dim)) {
        std::vector<QVec> A;
        QVec b;
        for (auto i : idx) {
            A.push_back(p.facets[i].coeffs);
            b.push_back(Rational(-p.facets[i].offset));
        }
        QVec y;
        if (!solve_exact(A, b, y)) continue;
        bool feasible = std::all_of(p.facets.begin(), p.facets.end(), [&](const Facet& f) { return f.eval(y) >= 0; });
        if (feasible && std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t rank(const std::vector<QVec>& rows) {
    std::vector<QVec> A = rows;
    if (A.empty()) return 0;
    const std::size_t cols = A.front().size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < A.size(); ++col) {
        std::size_t piv = r;
        while (piv < A.size() && A[piv][col] == 0) ++piv;
        if (piv == A.size()) continue;
        std::swap(A[piv], A[r]);
        for (std::size_t i = r + 1; i < A.size(); ++i) {
            if (A[i][col] == 0) continue;
            Rational f = A[i][col] / A[r][col];
            for (std::size_t k = col; k < cols; ++k) A[i][k] -= f * A[r][k];
        }
        ++r;
    }
    return r;
}

Rational determinant(std::vector<QVec> A) {
    const std::size_t n = A.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(A[piv], A[col]);
            det = -det;
        }
        det *= A[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (A[r][col] == 0) continue;
            Rational f = A[r][col] / A[col][col];
            for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
        }
    }
    return det;
}

bool is_simple(const LabelledPolytope& p, std::string* why) {
    for (const auto& v : vertices(p)) {
        std::vector<QVec> normals;
        for (const auto& f : p.facets)
            if (f.eval(v) == 0) normals.push_back(f.normal);
        if (normals.size() != p.dim || rank(normals) != p.dim) {
            if (why) {
                *why = "vertex (";
                for (std::size_t i = 0; i < v.size(); ++i) *why += (i ? "," : "") + to_string(v[i]);
                *why += ") lies on " + std::to_string(normals.size()) + " facets";
            }
            return false;
        }
    }
    return true;
}

nlohmann::json to_json(const LabelledPolytope& p) {
    auto strs = [](const QVec& v) {
        std::vector<std::string> out;
        for (const auto& q : v) out.push_back(to_string(q));
        return out;
    };
    nlohmann::json j;
    j["dim"] = p.dim;
    j["bounded"] = p.bounded;
    j["facets"] = nlohmann::json::array();
    for (const auto& f : p.facets)
        j["facets"].push_back(
            {{"label", f.label}, {"coeffs", strs(f.coeffs)}, {"offset", to_string(f.offset)}, {"normal", strs(f.normal)}});
    j["interior_point"] = strs(p.interior_point);
    return j;
}

Lattice standard_lattice(std::size_t d) {
    Lattice L;
    for (std::size_t i = 0; i < d; ++i) L.generators.push_back(unit(d, i));
    return L;
}

Lattice normal_lattice(const LabelledPolytope& p) {
    Lattice L;
    for (const auto& f : p.facets) L.generators.push_back(f.normal);
    return L;
}

IMatrix hermite_normal_form(IMatrix A) {
    if (A.empty()) return A;
    const std::size_t cols = A.front().size();
    std::size_t pr = 0;
    for (std::size_t col = 0; col < cols && pr < A.size(); ++col) {
        while (true) {
            std::size_t best = A.size();
            for (std::size_t i = pr; i < A.size(); ++i)
                if (A[i][col] != 0 && (best == A.size() || abs(A[i][col]) < abs(A[best][col]))) best = i;
            if (best == A.size()) break;
            std::swap(A[pr], A[best]);
            bool clean = true;
            for (std::size_t i = pr + 1; i < A.size(); ++i) {
                if (A[i][col] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), A[i][col].get_mpz_t(), A[pr][col].get_mpz_t());
                for (std::size_t k = col; k < cols; ++k) A[i][k] -= q * A[pr][k];
                if (A[i][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (A[pr][col] == 0) continue;
        if (A[pr][col] < 0)
            for (auto& v : A[pr]) v = -v;
        for (std::size_t i = 0; i < pr; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), A[i][col].get_mpz_t(), A[pr][col].get_mpz_t());
            for (std::size_t k = col; k < cols; ++k) A[i][k] -= q * A[pr][k];
        }
        ++pr;
    }
    A.resize(pr);
    return A;
}

namespace {

Integer common_denominator(const std::vector<QVec>& rows, Integer acc) {
    for (const auto& r : rows)
        for (const auto& q : r) mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), q.get_den_mpz_t());
    return acc;
}

IMatrix scaled(const std::vector<QVec>& rows, const Integer& D) {
    IMatrix out;
    for (const auto& r : rows) {
        std::vector<Integer> row;
        for (const auto& q : r) {
            Rational s = q * D;
            s.canonicalize();
            row.push_back(s.get_num());
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<QVec> to_rational(const IMatrix& A) {
    std::vector<QVec> out;
    for (const auto& r : A) {
        QVec row;
        for (const auto& v : r) row.emplace_back(v);
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace

Integer lattice_index(const Lattice& sub, const Lattice& super) {
    const std::size_t d = super.dim();
    if (d == 0 || sub.dim() != d) throw InvalidInput("lattice_index: dimension mismatch");
    Integer D = common_denominator(super.generators, common_denominator(sub.generators, Integer(1)));
    IMatrix hs = hermite_normal_form(scaled(sub.generators, D));
    IMatrix hS = hermite_normal_form(scaled(super.generators, D));
    if (hs.size() != d || hS.size() != d) throw InvalidInput("lattice_index: lattice is not full rank");
    auto Bs = to_rational(hs);
    auto BS = to_rational(hS);
    // Containment: each row of Bs is an integer combination of rows of BS.
    std::vector<QVec> BT(d, QVec(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) BT[i][k] = BS[k][i];
    for (const auto& v : Bs) {
        QVec y;
        solve_exact(BT, v, y);
        for (const auto& q : y)
            if (q.get_den() != 1) throw InvalidInput("lattice_index: sublattice not contained in superlattice");
    }
    Rational idx = determinant(Bs) / determinant(BS);
    idx = abs(idx);
    if (idx.get_den() != 1) throw NumericFailure("lattice_index: non-integral index");
    return idx.get_num();
}

Integer gcd_of_maximal_minors(const IMatrix& rows) {
    if (rows.empty()) return 0;
    const std::size_t d = rows.front().size();
    auto R = to_rational(rows);
    Integer g = 0;
    for (const auto& idx : combinations(rows.size(), d)) {
        std::vector<QVec> M;
        for (auto i : idx) M.push_back(R[i]);
        Rational det = determinant(M);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_num_mpz_t());
    }
    return g;
}

} // namespace toricale
