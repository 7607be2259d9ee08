#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace toricale {

// (a0; a1..am). Entries of rest may be negative for raw chart tuples.
struct WeightVector {
    std::int64_t a0 = 1;
    std::vector<std::int64_t> rest;

    WeightVector() = default;
    WeightVector(std::int64_t lead, std::vector<std::int64_t> tail) : a0(lead), rest(std::move(tail)) {}
    // First entry is a0.
    static WeightVector from_list(const std::vector<std::int64_t>& all);

    std::size_t m() const { return rest.size(); }
    std::vector<std::int64_t> entries() const;
    std::string str() const; // "(a0;a1,...,am)"

    friend bool operator==(const WeightVector&, const WeightVector&) = default;
    friend auto operator<=>(const WeightVector&, const WeightVector&) = default;
};

struct ValidityReport {
    bool length_ok = false;
    bool positive = false;
    bool gcd_one = false;
    bool pairwise_coprime = false;
    bool isolated = false;
    bool smooth_total_space = false; // all non-leading entries equal 1

    bool valid() const { return length_ok && positive && gcd_one; }
};

ValidityReport validate_weight_vector(const WeightVector& w);
bool pairwise_coprime(const WeightVector& w);
bool isolated(const WeightVector& w);

// Minimal positive residues in [1, a0]; a0 = 1 throws InvalidInput.
WeightVector residues(const WeightVector& b);

// (a_i; -a0, a_1, ..., a_{i-1}, a_{i+1}, ..., a_m), slot is 1-based.
WeightVector chart_group(const WeightVector& a, std::size_t slot);

// One entry per slot with a_i > 1. Requires pairwise coprimality.
std::vector<std::pair<std::size_t, WeightVector>> singular_points(const WeightVector& a);

struct CyclicGroupSpec {
    std::int64_t order = 1;
    std::vector<std::int64_t> exponents; // in [0, order)
    bool isolated = true;
};

CyclicGroupSpec gamma_group(const WeightVector& a);

// Brute force: no nontrivial power of the generator fixes a coordinate axis.
bool isolated_by_enumeration(const CyclicGroupSpec& g);

// (a0; a_1 < ... < a_l) with multiplicities n_j, built from a list with repeats.
struct GroupedWeights {
    std::int64_t a0 = 1;
    std::vector<std::int64_t> a;  // distinct, ascending
    std::vector<int> mult;        // n_j >= 0, so a_j appears n_j + 1 times

    std::size_t ell() const { return a.size(); }
    int m() const;
    WeightVector expanded() const;
    std::string str() const;
};

GroupedWeights group_weights(std::int64_t a0, std::vector<std::int64_t> ws);

} // namespace toricale
