#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "toricale/typej.hpp"
#include "toricale/rational.hpp"

using namespace toricale;

namespace {
WeightVector W(std::vector<std::int64_t> v) { return WeightVector::from_list(v); }
} // namespace

TEST_CASE("first lifts") {
    auto a = candidate_lifts(W({3, -5, 2, 1}));
    REQUIRE_FALSE(a.empty());
    CHECK(a.front() == W({3, 1, 2, 1}));
    auto b = candidate_lifts(W({2, -5, 3, 1}));
    REQUIRE_FALSE(b.empty());
    CHECK(b.front() == W({2, 1, 1, 1}));

    // Minimal residues of (6,1,2,3) are not pairwise coprime; every lift is.
    ClassifierConfig cfg;
    for (const auto& l : candidate_lifts(W({6, 1, 2, 3}), cfg)) {
        CHECK(l.rest != std::vector<std::int64_t>{1, 2, 3});
        for (std::size_t i = 0; i < 3; ++i) CHECK((l.rest[i] - W({6, 1, 2, 3}).rest[i]) % 6 == 0);
    }
}

TEST_CASE("the (5,3,2,1) tree") {
    auto v = classify(W({5, 3, 2, 1}));
    REQUIRE(v.yes);
    const auto& t = *v.tree;
    CHECK(t.weights == W({5, 3, 2, 1}));
    REQUIRE(t.children.size() == 2);
    CHECK(t.children[0].first == 1);
    CHECK(t.children[0].second.weights == W({3, 1, 2, 1}));
    REQUIRE(t.children[0].second.children.size() == 1);
    CHECK(t.children[0].second.children[0].first == 2);
    CHECK(t.children[0].second.children[0].second.weights == W({2, 1, 1, 1}));
    CHECK(t.children[1].first == 2);
    CHECK(t.children[1].second.weights == W({2, 1, 1, 1}));
    CHECK(t.depth() == 3);
    CHECK(t.vertex_count() == 4);
    std::string why;
    CHECK_MESSAGE(validate_tree(t, &why), why);
}

TEST_CASE("smooth total space is a single node") {
    for (std::int64_t b0 = 2; b0 <= 9; ++b0) {
        auto v = classify(WeightVector(b0, {1, 1, 1}));
        REQUIRE(v.yes);
        CHECK(v.tree->vertex_count() == 1);
    }
}

TEST_CASE("overestimated remainder sequence") {
    using P = std::vector<std::pair<std::int64_t, std::int64_t>>;
    CHECK(euclid_overestimated(5, 3) == P{{5, 3}, {3, 1}});
    CHECK(euclid_overestimated(7, 5) == P{{7, 5}, {5, 3}, {3, 1}});
    CHECK(euclid_overestimated(60, 7) == P{{60, 7}, {7, 3}, {3, 2}, {2, 1}});
    CHECK(euclid_overestimated(13, 8) == P{{13, 8}, {8, 3}, {3, 1}});
    CHECK(euclid_overestimated(9, 1) == P{{9, 1}});
    CHECK_THROWS_AS(euclid_overestimated(6, 4), InvalidInput);
}

TEST_CASE("(q,p,1,1) trees follow the sequence") {
    for (std::int64_t q = 2; q <= 20; ++q)
        for (std::int64_t p = 1; p < q; ++p) {
            if (std::gcd(q, p) != 1) continue;
            auto v = classify(W({q, p, 1, 1}));
            REQUIRE(v.yes);
            CHECK(v.tree->depth() == euclid_overestimated(q, p).size());
            CHECK(validate_tree(*v.tree));
        }
}

TEST_CASE("memoization does not change verdicts") {
    ClassifierConfig with, without;
    without.memoize = false;
    // Unknown verdicts run the search to its budget; keep that short here.
    with.node_budget = without.node_budget = 20000;
    for (std::int64_t b0 = 2; b0 <= 12; ++b0)
        for (std::int64_t x = 1; x < b0; ++x)
            for (std::int64_t y = x; y < b0; ++y) {
                WeightVector w(b0, {x, y, 1});
                if (!isolated(w)) continue;
                auto a = classify(w, with);
                auto b = classify(w, without);
                CHECK(a.yes == b.yes);
                if (a.yes) CHECK(validate_tree(*a.tree));
            }
}

TEST_CASE("tree export round trip") {
    auto t = *classify(W({5, 3, 2, 1})).tree;
    CHECK(parse_tree_json(export_tree(t, TreeFormat::Json)) == t);
    auto dot = export_tree(t, TreeFormat::Dot);
    CHECK(dot.find("digraph") == 0);
    std::size_t labels = 0;
    for (std::size_t pos = 0; (pos = dot.find("[label=\"(", pos)) != std::string::npos; ++pos) ++labels;
    CHECK(labels == 4);
    CHECK_THROWS_AS(parse_tree_json("{not json"), InvalidInput);
}

TEST_CASE("validation rejects broken trees") {
    auto t = *classify(W({5, 3, 2, 1})).tree;
    auto bad = t;
    bad.children[1].second.weights = W({2, 1, 1, 3});
    std::string why;
    CHECK_FALSE(validate_tree(bad, &why));
    CHECK_FALSE(why.empty());
    auto missing = t;
    missing.children.pop_back();
    CHECK_FALSE(validate_tree(missing));
}

TEST_CASE("bad input") {
    CHECK_THROWS_AS(classify(W({4, 2, 1})), InvalidInput);
    ClassifierConfig cfg;
    cfg.max_depth = 0;
    CHECK_THROWS_AS(classify(W({5, 3, 2, 1}), cfg), InvalidInput);
}

TEST_CASE("bounded search reports Unknown with statistics") {
    ClassifierConfig cfg;
    cfg.lift_bound = 0;
    cfg.max_depth = 1;
    auto v = classify(W({7, 5, 1, 1}), cfg);
    CHECK_FALSE(v.yes);
    CHECK(v.stats.nodes >= 1);
}
