#include "toricale/weights.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "toricale/rational.hpp"

namespace toricale {

WeightVector WeightVector::from_list(const std::vector<std::int64_t>& all) {
    if (all.empty()) throw InvalidInput("empty weight list");
    return WeightVector(all.front(), std::vector<std::int64_t>(all.begin() + 1, all.end()));
}

std::vector<std::int64_t> WeightVector::entries() const {
    std::vector<std::int64_t> out{a0};
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

std::string WeightVector::str() const {
    std::ostringstream os;
    os << "(" << a0 << ";";
    for (std::size_t i = 0; i < rest.size(); ++i) os << (i ? "," : "") << rest[i];
    os << ")";
    return os.str();
}

bool pairwise_coprime(const WeightVector& w) {
    auto e = w.entries();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            if (std::gcd(e[i], e[j]) != 1) return false;
    return true;
}

bool isolated(const WeightVector& w) {
    for (auto v : w.rest)
        if (std::gcd(w.a0, v) != 1) return false;
    return true;
}

ValidityReport validate_weight_vector(const WeightVector& w) {
    ValidityReport r;
    r.length_ok = w.m() >= 2;
    auto e = w.entries();
    r.positive = std::all_of(e.begin(), e.end(), [](std::int64_t v) { return v > 0; });
    std::int64_t g = 0;
    for (auto v : e) g = std::gcd(g, v);
    r.gcd_one = g == 1;
    r.pairwise_coprime = pairwise_coprime(w);
    r.isolated = isolated(w);
    r.smooth_total_space = std::all_of(w.rest.begin(), w.rest.end(), [](std::int64_t v) { return v == 1; });
    return r;
}

WeightVector residues(const WeightVector& b) {
    if (b.a0 <= 1) throw InvalidInput("residues: trivial group (a0 = 1) in " + b.str());
    WeightVector out(b.a0, {});
    for (auto v : b.rest) {
        std::int64_t r = v % b.a0;
        if (r <= 0) r += b.a0;
        out.rest.push_back(r);
    }
    return out;
}

WeightVector chart_group(const WeightVector& a, std::size_t slot) {
    if (slot < 1 || slot > a.m()) throw InvalidInput("chart_group: slot out of range");
    WeightVector out(a.rest[slot - 1], {});
    for (std::size_t i = 0; i < a.m(); ++i) {
        if (i + 1 == slot)
            out.rest.push_back(-a.a0);
        else
            out.rest.push_back(a.rest[i]);
    }
    // -a0 sits at the vacated slot; move it to the front of the remaining list
    // so that the tuple reads (a_i; -a0, a_1, ..., a_m without a_i).
    std::rotate(out.rest.begin(), out.rest.begin() + static_cast<std::ptrdiff_t>(slot - 1),
                out.rest.begin() + static_cast<std::ptrdiff_t>(slot));
    return out;
}

std::vector<std::pair<std::size_t, WeightVector>> singular_points(const WeightVector& a) {
    if (!pairwise_coprime(a)) throw InvalidInput("singular_points: non-isolated singularities in " + a.str());
    std::vector<std::pair<std::size_t, WeightVector>> out;
    for (std::size_t i = 0; i < a.m(); ++i)
        if (a.rest[i] > 1) out.emplace_back(i + 1, chart_group(a, i + 1));
    return out;
}

CyclicGroupSpec gamma_group(const WeightVector& a) {
    CyclicGroupSpec g;
    g.order = a.a0 > 0 ? a.a0 : -a.a0;
    if (g.order == 0) throw InvalidInput("gamma_group: zero order");
    for (auto v : a.rest) {
        std::int64_t e = v % g.order;
        if (e < 0) e += g.order;
        g.exponents.push_back(e);
    }
    g.isolated = std::all_of(g.exponents.begin(), g.exponents.end(),
                             [&](std::int64_t e) { return std::gcd(g.order, e) == 1; });
    if (g.order == 1) g.isolated = true;
    return g;
}

bool isolated_by_enumeration(const CyclicGroupSpec& g) {
    for (std::int64_t k = 1; k < g.order; ++k)
        for (auto e : g.exponents)
            if ((k * e) % g.order == 0) return false;
    return true;
}

int GroupedWeights::m() const {
    int s = 0;
    for (int n : mult) s += n + 1;
    return s;
}

WeightVector GroupedWeights::expanded() const {
    WeightVector w(a0, {});
    for (std::size_t j = 0; j < a.size(); ++j)
        for (int k = 0; k <= mult[j]; ++k) w.rest.push_back(a[j]);
    return w;
}

std::string GroupedWeights::str() const {
    std::ostringstream os;
    os << "(" << a0 << ";";
    for (std::size_t j = 0; j < a.size(); ++j) {
        os << (j ? "," : "") << a[j];
        if (mult[j] > 0) os << "^" << (mult[j] + 1);
    }
    os << ")";
    return os.str();
}

GroupedWeights group_weights(std::int64_t a0, std::vector<std::int64_t> ws) {
    if (a0 <= 0) throw InvalidInput("a0 must be positive");
    if (ws.empty()) throw InvalidInput("at least one weight required");
    for (auto v : ws)
        if (v <= 0) throw InvalidInput("weights must be positive");
    std::sort(ws.begin(), ws.end());
    GroupedWeights g;
    g.a0 = a0;
    for (auto v : ws) {
        if (!g.a.empty() && g.a.back() == v)
            ++g.mult.back();
        else {
            g.a.push_back(v);
            g.mult.push_back(0);
        }
    }
    return g;
}

} // namespace toricale
