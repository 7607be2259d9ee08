#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "toricale/weights.hpp"

namespace toricale {

struct ClassifierConfig {
    int lift_bound = 3;
    int max_depth = 64;
    bool unit_canonicalization = false;
    bool memoize = true;
    std::size_t node_budget = 200000;
};

struct ResolutionTree {
    WeightVector weights;
    // Sorted by slot. A vector keeps the recursive type well-formed.
    std::vector<std::pair<std::size_t, ResolutionTree>> children;

    std::size_t depth() const;
    std::size_t vertex_count() const;
    bool leaf() const { return children.empty(); }
    friend bool operator==(const ResolutionTree&, const ResolutionTree&) = default;
};

struct SearchStats {
    std::size_t nodes = 0;
    std::size_t lifts_tried = 0;
    std::size_t memo_hits = 0;
    std::size_t depth_cutoffs = 0;
    std::size_t cycle_cutoffs = 0;
    bool budget_exhausted = false;
};

struct TypeJVerdict {
    bool yes = false;
    std::optional<ResolutionTree> tree;
    SearchStats stats;
};

// Lifts of b (entrywise congruent mod b0, positive) that are pairwise coprime
// or of the shape (b0,1,...,1), ordered by max entry then lexicographically.
std::vector<WeightVector> candidate_lifts(const WeightVector& b, const ClassifierConfig& cfg = {});

class Classifier {
public:
    explicit Classifier(ClassifierConfig cfg = {});
    TypeJVerdict classify(const WeightVector& b);
    const ClassifierConfig& config() const { return cfg_; }

private:
    using Key = std::vector<std::int64_t>;
    std::optional<ResolutionTree> solve(const WeightVector& r, int depth, std::set<Key>& path, SearchStats& st,
                                        bool keep_order);
    std::optional<ResolutionTree> try_class(const WeightVector& r, int depth, std::set<Key>& path,
                                            SearchStats& st);
    std::optional<std::optional<ResolutionTree>> memo_get(const Key& k);
    void memo_put(const Key& k, const std::optional<ResolutionTree>& v);

    ClassifierConfig cfg_;
    std::mutex mu_;
    std::map<Key, std::optional<ResolutionTree>> memo_;
};

TypeJVerdict classify(const WeightVector& b, const ClassifierConfig& cfg = {});

// (q,p) -> (p, p - (q mod p)) while p > 1.
std::vector<std::pair<std::int64_t, std::int64_t>> euclid_overestimated(std::int64_t q, std::int64_t p);

// Sorted non-leading residues: the memo key and the canonical class label.
WeightVector canonical_residues(const WeightVector& b);

// Every edge: child a0 = parent weight at slot and residues of the chart
// group agree with the child's residues up to permutation (and, if allowed,
// up to a unit multiple).
bool validate_tree(const ResolutionTree& t, std::string* why = nullptr, bool allow_units = false);

enum class TreeFormat { Json, Dot };
std::string export_tree(const ResolutionTree& t, TreeFormat fmt);
ResolutionTree parse_tree_json(const std::string& text);

} // namespace toricale
