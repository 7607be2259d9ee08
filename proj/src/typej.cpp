#include "toricale/typej.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "toricale/rational.hpp"

namespace toricale {

namespace {

bool all_ones(const WeightVector& w) {
    return std::all_of(w.rest.begin(), w.rest.end(), [](std::int64_t v) { return v == 1; });
}

ResolutionTree leaf_of(const WeightVector& w) { return ResolutionTree{w, {}}; }

std::vector<std::int64_t> units_mod(std::int64_t n) {
    std::vector<std::int64_t> u;
    for (std::int64_t k = 1; k < n; ++k)
        if (std::gcd(k, n) == 1) u.push_back(k);
    return u;
}

WeightVector scale_residues(const WeightVector& r, std::int64_t u) {
    WeightVector out(r.a0, {});
    for (auto v : r.rest) out.rest.push_back(v * u);
    return residues(out);
}

// Subtrees are searched on sorted residues; this puts every lift back in
// line, entrywise, with the chart group it resolves.
ResolutionTree align_tree(const ResolutionTree& t, const WeightVector& target) {
    const WeightVector& w = t.weights;
    if (w.a0 == 1 || all_ones(w) || w.m() != target.m() || w.a0 != target.a0) return t;
    const WeightVector tr = residues(target);
    const WeightVector wr = residues(w);
    std::vector<std::int64_t> scales{1};
    for (auto u : units_mod(w.a0))
        if (u != 1) scales.push_back(u);
    for (auto u : scales) {
        const WeightVector want = u == 1 ? tr : scale_residues(tr, u);
        std::vector<std::size_t> from;
        std::vector<bool> used(w.m(), false);
        for (std::size_t i = 0; i < w.m(); ++i) {
            for (std::size_t j = 0; j < w.m(); ++j) {
                if (!used[j] && wr.rest[j] == want.rest[i]) {
                    used[j] = true;
                    from.push_back(j);
                    break;
                }
            }
            if (from.size() != i + 1) break;
        }
        if (from.size() != w.m()) continue;
        ResolutionTree out{WeightVector(w.a0, {}), {}};
        for (auto j : from) out.weights.rest.push_back(w.rest[j]);
        for (std::size_t i = 0; i < w.m(); ++i) {
            if (out.weights.rest[i] <= 1) continue;
            for (const auto& [slot, child] : t.children)
                if (slot == from[i] + 1) out.children.emplace_back(i + 1, align_tree(child, chart_group(out.weights, i + 1)));
        }
        return out;
    }
    return t;
}

} // namespace

std::size_t ResolutionTree::depth() const {
    std::size_t d = 0;
    for (const auto& [slot, child] : children) d = std::max(d, child.depth());
    return d + 1;
}

std::size_t ResolutionTree::vertex_count() const {
    std::size_t n = 1;
    for (const auto& [slot, child] : children) n += child.vertex_count();
    return n;
}

WeightVector canonical_residues(const WeightVector& b) {
    WeightVector r = residues(b);
    std::sort(r.rest.begin(), r.rest.end());
    return r;
}

std::vector<WeightVector> candidate_lifts(const WeightVector& b, const ClassifierConfig& cfg) {
    if (cfg.lift_bound < 0) throw InvalidInput("lift_bound must be non-negative");
    const WeightVector r = residues(b);
    const std::size_t m = r.m();
    const std::int64_t K = cfg.lift_bound;
    std::vector<WeightVector> out;
    std::vector<std::int64_t> k(m, 0);
    while (true) {
        WeightVector a(r.a0, r.rest);
        for (std::size_t i = 0; i < m; ++i) a.rest[i] += k[i] * r.a0;
        if (all_ones(a) || pairwise_coprime(a)) out.push_back(std::move(a));
        std::size_t i = 0;
        while (i < m && k[i] == K) k[i++] = 0;
        if (i == m) break;
        ++k[i];
    }
    std::sort(out.begin(), out.end(), [](const WeightVector& x, const WeightVector& y) {
        auto mx = *std::max_element(x.rest.begin(), x.rest.end());
        auto my = *std::max_element(y.rest.begin(), y.rest.end());
        mx = std::max(mx, x.a0);
        my = std::max(my, y.a0);
        if (mx != my) return mx < my;
        return x.rest < y.rest;
    });
    return out;
}

Classifier::Classifier(ClassifierConfig cfg) : cfg_(cfg) {
    if (cfg_.lift_bound < 0) throw InvalidInput("lift_bound must be non-negative");
    if (cfg_.max_depth < 1) throw InvalidInput("max_depth must be at least 1");
}

std::optional<std::optional<ResolutionTree>> Classifier::memo_get(const Key& k) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(k);
    if (it == memo_.end()) return std::nullopt;
    return it->second;
}

void Classifier::memo_put(const Key& k, const std::optional<ResolutionTree>& v) {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(k, v);
}

std::optional<ResolutionTree> Classifier::try_class(const WeightVector& r, int depth, std::set<Key>& path,
                                                    SearchStats& st) {
    for (const auto& lift : candidate_lifts(r, cfg_)) {
        ++st.lifts_tried;
        if (all_ones(lift)) return leaf_of(lift);
        ResolutionTree node{lift, {}};
        bool ok = true;
        for (const auto& [slot, chart] : singular_points(lift)) {
            auto sub = solve(canonical_residues(chart), depth + 1, path, st, false);
            if (!sub) {
                ok = false;
                break;
            }
            node.children.emplace_back(slot, std::move(*sub));
        }
        if (ok) return node;
        if (st.budget_exhausted) break;
    }
    return std::nullopt;
}

std::optional<ResolutionTree> Classifier::solve(const WeightVector& r, int depth, std::set<Key>& path,
                                                SearchStats& st, bool keep_order) {
    if (all_ones(r)) return leaf_of(r);
    const Key key = canonical_residues(r).entries();
    const bool use_memo = cfg_.memoize && !keep_order;
    if (use_memo) {
        if (auto hit = memo_get(key)) {
            ++st.memo_hits;
            return *hit;
        }
    }
    if (st.nodes >= cfg_.node_budget) {
        st.budget_exhausted = true;
        return std::nullopt;
    }
    ++st.nodes;
    if (depth > cfg_.max_depth) {
        ++st.depth_cutoffs;
        return std::nullopt;
    }
    if (path.count(key)) {
        ++st.cycle_cutoffs;
        return std::nullopt;
    }
    path.insert(key);
    const std::size_t cut_before = st.depth_cutoffs + st.cycle_cutoffs;

    std::vector<WeightVector> variants{keep_order ? r : canonical_residues(r)};
    if (cfg_.unit_canonicalization) {
        for (auto u : units_mod(r.a0)) {
            if (u == 1) continue;
            WeightVector v = scale_residues(r, u);
            if (!keep_order) std::sort(v.rest.begin(), v.rest.end());
            if (std::find(variants.begin(), variants.end(), v) == variants.end()) variants.push_back(v);
        }
    }
    std::optional<ResolutionTree> result;
    for (const auto& v : variants) {
        result = try_class(v, depth, path, st);
        if (result || st.budget_exhausted) break;
    }
    path.erase(key);
    const bool clean = st.depth_cutoffs + st.cycle_cutoffs == cut_before && !st.budget_exhausted;
    if (use_memo && (result || clean)) memo_put(key, result);
    return result;
}

TypeJVerdict Classifier::classify(const WeightVector& b) {
    if (b.m() < 1) throw InvalidInput("classify: empty weight vector");
    if (b.a0 < 1) throw InvalidInput("classify: a0 must be positive");
    if (!isolated(b)) throw InvalidInput("classify: non-isolated singularity " + b.str());
    TypeJVerdict v;
    if (b.a0 == 1) {
        v.yes = true;
        v.tree = leaf_of(WeightVector(1, std::vector<std::int64_t>(b.m(), 1)));
        return v;
    }
    std::set<Key> path;
    v.tree = solve(residues(b), 1, path, v.stats, true);
    v.yes = v.tree.has_value();
    if (v.tree) v.tree = align_tree(*v.tree, b);
    return v;
}

TypeJVerdict classify(const WeightVector& b, const ClassifierConfig& cfg) {
    Classifier c(cfg);
    return c.classify(b);
}

std::vector<std::pair<std::int64_t, std::int64_t>> euclid_overestimated(std::int64_t q, std::int64_t p) {
    if (!(q > p && p >= 1)) throw InvalidInput("euclid_overestimated: need q > p >= 1");
    if (std::gcd(q, p) != 1) throw InvalidInput("euclid_overestimated: q and p must be coprime");
    std::vector<std::pair<std::int64_t, std::int64_t>> seq{{q, p}};
    while (p > 1) {
        std::int64_t np = p - (q % p);
        q = p;
        p = np;
        seq.emplace_back(q, p);
    }
    return seq;
}

namespace {

bool same_class(const WeightVector& x, const WeightVector& y, bool allow_units) {
    if (x.a0 != y.a0 || x.m() != y.m()) return false;
    auto sorted_rest = [](WeightVector w) {
        std::sort(w.rest.begin(), w.rest.end());
        return w.rest;
    };
    if (x.a0 == 1) return true;
    auto ry = sorted_rest(residues(y));
    if (sorted_rest(residues(x)) == ry) return true;
    if (!allow_units) return false;
    for (auto u : units_mod(x.a0))
        if (sorted_rest(scale_residues(residues(x), u)) == ry) return true;
    return false;
}

bool validate_node(const ResolutionTree& t, std::string* why, bool allow_units) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const WeightVector& w = t.weights;
    if (all_ones(w)) {
        if (!t.children.empty()) return fail("smooth node " + w.str() + " has children");
        return true;
    }
    if (!pairwise_coprime(w)) return fail("node " + w.str() + " is not pairwise coprime");
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < w.m(); ++i)
        if (w.rest[i] > 1) expected.push_back(i + 1);
    std::vector<std::size_t> got;
    for (const auto& [slot, child] : t.children) got.push_back(slot);
    if (got != expected) return fail("node " + w.str() + " children do not match its singular slots");
    for (const auto& [slot, child] : t.children) {
        if (child.weights.a0 != w.rest[slot - 1])
            return fail("edge " + w.str() + " slot " + std::to_string(slot) + ": child order mismatch");
        if (!same_class(chart_group(w, slot), child.weights, allow_units))
            return fail("edge " + w.str() + " slot " + std::to_string(slot) + ": residues differ");
        if (!validate_node(child, why, allow_units)) return false;
    }
    return true;
}

nlohmann::ordered_json tree_to_json(const ResolutionTree& t) {
    nlohmann::ordered_json j;
    j["weights"] = t.weights.entries();
    nlohmann::ordered_json ch = nlohmann::ordered_json::object();
    for (const auto& [slot, child] : t.children) ch[std::to_string(slot)] = tree_to_json(child);
    j["children"] = ch;
    return j;
}

ResolutionTree tree_from_json(const nlohmann::json& j) {
    ResolutionTree t;
    t.weights = WeightVector::from_list(j.at("weights").get<std::vector<std::int64_t>>());
    if (j.contains("children")) {
        for (const auto& [k, v] : j.at("children").items())
            t.children.emplace_back(static_cast<std::size_t>(std::stoul(k)), tree_from_json(v));
    }
    std::sort(t.children.begin(), t.children.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return t;
}

void dot_nodes(const ResolutionTree& t, int& counter, std::ostringstream& os) {
    int me = counter++;
    os << "  n" << me << " [label=\"" << t.weights.str() << "\"];\n";
    for (const auto& [slot, child] : t.children) {
        int id = counter;
        dot_nodes(child, counter, os);
        os << "  n" << me << " -> n" << id << " [label=\"" << slot << "\"];\n";
    }
}

} // namespace

bool validate_tree(const ResolutionTree& t, std::string* why, bool allow_units) {
    return validate_node(t, why, allow_units);
}

std::string export_tree(const ResolutionTree& t, TreeFormat fmt) {
    if (fmt == TreeFormat::Json) return tree_to_json(t).dump(2);
    std::ostringstream os;
    os << "digraph resolution {\n";
    int counter = 0;
    dot_nodes(t, counter, os);
    os << "}\n";
    return os.str();
}

ResolutionTree parse_tree_json(const std::string& text) {
    try {
        return tree_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("tree json: ") + e.what());
    }
}

} // namespace toricale
