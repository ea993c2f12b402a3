// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "actionprop/association.hpp"
#include "actionprop/oracle.hpp"
#include "actionprop/rng.hpp"
#include "helpers.hpp"

using namespace actionprop;

namespace {

const double kSigmaOne = 1.0 / (1.0 + std::exp(-1.0));

// Paths whose feature centers sit exactly 0.5 apart in both spaces:
// color (0.5, 0.5, 0, 0) vs uniform and the mirrored pair for gradients.
ActionPath halfApartA() {
    return testutil::path(0, {{.cx = 10, .cy = 10, .actionness = 2.0,
                               .color = {1, 1, 0, 0}, .grad = {1, 1, 1, 1}}});
}

ActionPath halfApartB() {
    return testutil::path(5, {{.cx = 90, .cy = 90, .actionness = 1.0,
                               .color = {1, 1, 1, 1}, .grad = {1, 1, 0, 0}}});
}

std::vector<ActionPath> randomPool(Rng& rng, int n) {
    std::vector<ActionPath> pool;
    for (int i = 0; i < n; ++i) {
        const int start = static_cast<int>(rng.uniform(0.0, 6.0));
        const int len = 1 + static_cast<int>(rng.uniform(0.0, 5.0));
        std::vector<testutil::DetSpec> specs;
        const double cx = rng.uniform(15.0, 85.0);
        const double cy = rng.uniform(15.0, 85.0);
        for (int t = 0; t < len; ++t)
            specs.push_back({.cx = cx + t, .cy = cy, .w = 20, .h = 20,
                             .actionness = rng.uniform(0.1, 1.5)});
        pool.push_back(testutil::path(start, specs, i));
    }
    return pool;
}

}  // namespace

TEST_SUITE("association") {

TEST_CASE("similarity is the reciprocal combined center distance") {
    const auto p = halfApartA();
    const auto q = halfApartB();
    // ||dC|| = ||dH|| = 0.5, so W = 1 / (0.5 + lambda_a * 0.5).
    CHECK(pathSimilarity(p, q, 1.0, 1e3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pathSimilarity(p, q, 3.0, 1e3) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pathSimilarity(p, q, 0.0, 1e3) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pathSimilarity(q, p, 1.0, 1e3) == pathSimilarity(p, q, 1.0, 1e3));
}

TEST_CASE("identical feature centers hit the similarity cap") {
    const auto p = testutil::path(0, {{.cx = 10, .cy = 10}});
    const auto q = testutil::path(9, {{.cx = 80, .cy = 80}});  // same default hists
    CHECK(pathSimilarity(p, q, 1.0, 1e3) == 1e3);
    CHECK(pathSimilarity(p, q, 1.0, 50.0) == 50.0);
}

TEST_CASE("coverage counts each detection exactly once") {
    // p1 and p2 share the frame-1 detection; its score must not be doubled.
    const auto shared = testutil::det(1, 0, {.cx = 20, .cy = 20, .actionness = 0.5});
    ActionPath p1{0, 1, {testutil::det(0, 0, {.cx = 20, .cy = 20, .actionness = 1.0}), shared},
                  1.5};
    ActionPath p2{1, 2, {shared, testutil::det(2, 0, {.cx = 20, .cy = 20, .actionness = 0.25})},
                  0.75};
    AssocConfig cfg;
    cfg.use_similarity = false;
    CHECK(setObjective({p1, p2}, cfg) == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(setObjective({p1}, cfg) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(setObjective({}, cfg) == 0.0);
}

TEST_CASE("similarity bonus adds the logistic of the mean member similarity") {
    AssocConfig cfg;  // use_similarity = true, lambda_a = 1
    const auto p = halfApartA();  // score 2.0
    const auto q = halfApartB();  // score 1.0
    // Coverage 3.0 plus logistic(W) for the weaker member, W = 1.
    CHECK(setObjective({p, q}, cfg) == doctest::Approx(3.0 + kSigmaOne).epsilon(1e-12));
    // Member order is canonical, so input order must not matter.
    CHECK(setObjective({q, p}, cfg) == doctest::Approx(setObjective({p, q}, cfg)).epsilon(1e-15));
}

TEST_CASE("greedy on a single path returns that path") {
    const auto p = testutil::path(0, {{.cx = 10, .cy = 10, .actionness = 0.7}});
    const auto set = greedyAssociate({p}, {});
    REQUIRE(set.paths.size() == 1);
    CHECK(set.candidate_indices == std::vector<int>{0});
    CHECK(set.objective == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("mutually exclusive duplicates admit only one member") {
    std::vector<testutil::DetSpec> specs(5, {.cx = 40, .cy = 40, .actionness = 1.0});
    const auto p = testutil::path(0, specs, 0);
    const auto q = testutil::path(0, specs, 1);
    AssocConfig cfg;
    cfg.eta_p = 0.9;  // overlap of the pair is 1.0, above the gate
    const auto set = greedyAssociate({p, q}, cfg);
    REQUIRE(set.paths.size() == 1);
    CHECK(set.candidate_indices == std::vector<int>{0});
}

TEST_CASE("the seed is the highest-score path, lowest index on ties") {
    std::vector<ActionPath> pool;
    pool.push_back(testutil::path(0, {{.cx = 10, .cy = 10, .actionness = 2.0}}, 0));
    pool.push_back(testutil::path(3, {{.cx = 60, .cy = 60, .actionness = 3.0}}, 1));
    pool.push_back(testutil::path(6, {{.cx = 10, .cy = 60, .actionness = 3.0}}, 2));
    const auto set = greedyAssociate(pool, {});
    REQUIRE(!set.candidate_indices.empty());
    CHECK(set.candidate_indices[0] == 1);
}

TEST_CASE("every emitted set respects the size cap and the pairwise gate") {
    Rng rng(314);
    AssocConfig cfg;
    cfg.max_paths = 3;
    cfg.eta_p = 0.25;
    for (int trial = 0; trial < 40; ++trial) {
        const auto pool = randomPool(rng, 8);
        const auto set = greedyAssociate(pool, cfg);
        CHECK(set.paths.size() <= 3);
        for (std::size_t i = 0; i < set.paths.size(); ++i)
            for (std::size_t j = i + 1; j < set.paths.size(); ++j)
                CHECK(pathOverlap(set.paths[i], set.paths[j]) <= cfg.eta_p);
        CHECK(set.objective == doctest::Approx(setObjective(set.paths, cfg)).epsilon(1e-12));
    }
}

TEST_CASE("the objective never drops as the member cap grows") {
    Rng rng(7);
    const auto pool = randomPool(rng, 7);
    AssocConfig cfg;
    cfg.eta_p = 0.5;
    double prev = 0.0;
    for (int cap = 1; cap <= 7; ++cap) {
        cfg.max_paths = cap;
        const auto set = greedyAssociate(pool, cfg);
        CHECK(set.objective >= prev - 1e-12);
        prev = set.objective;
    }
}

TEST_CASE("greedy is near-optimal against the exhaustive oracle") {
    Rng rng(4242);
    AssocConfig cfg;
    cfg.max_paths = 3;
    cfg.eta_p = 0.4;
    const double bound = 1.0 - 1.0 / std::exp(1.0);

    SUBCASE("coverage-only objective meets the submodular bound") {
        cfg.use_similarity = false;
        for (int trial = 0; trial < 20; ++trial) {
            const auto pool = randomPool(rng, 6);
            const auto greedy = greedyAssociate(pool, cfg);
            const auto oracle = bruteForceBestPathSet(pool, cfg);
            CHECK(greedy.objective <= oracle.objective + 1e-12);
            CHECK(greedy.objective >= bound * oracle.objective - 1e-12);
        }
    }
    SUBCASE("with the similarity bonus greedy stays below the oracle") {
        for (int trial = 0; trial < 20; ++trial) {
            const auto pool = randomPool(rng, 6);
            const auto greedy = greedyAssociate(pool, cfg);
            const auto oracle = bruteForceBestPathSet(pool, cfg);
            CHECK(greedy.objective <= oracle.objective + 1e-12);
        }
    }
}

TEST_CASE("extraction emits the first set even when every path is short") {
    std::vector<testutil::DetSpec> specs(5, {.cx = 40, .cy = 40, .actionness = 1.0});
    const auto pool = std::vector<ActionPath>{testutil::path(0, specs, 0),
                                              testutil::path(0, specs, 1)};
    AssocConfig cfg;  // min_path_duration = 10; both paths last 5 frames
    const auto sets = extractAllPathSets(pool, cfg);
    // The duplicate is infeasible inside the first set, and the leftover is
    // too short to seed a second one.
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].paths.size() == 1);
}

TEST_CASE("extraction partitions the pool without reusing candidates") {
    Rng rng(11);
    AssocConfig cfg;
    cfg.max_paths = 2;
    cfg.eta_p = 0.2;
    cfg.min_path_duration = 1;  // keep extracting until the pool runs dry
    for (int trial = 0; trial < 10; ++trial) {
        const auto pool = randomPool(rng, 9);
        const auto sets = extractAllPathSets(pool, cfg);
        REQUIRE(!sets.empty());
        std::set<int> seen;
        std::size_t total = 0;
        for (const auto& s : sets) {
            for (int idx : s.candidate_indices) {
                CHECK(idx >= 0);
                CHECK(idx < 9);
                CHECK(seen.insert(idx).second);  // no index claimed twice
            }
            total += s.candidate_indices.size();
            CHECK(s.paths.size() == s.candidate_indices.size());
        }
        CHECK(total == 9);  // with the relaxed stop rule everything is used
    }
}

TEST_CASE("empty pools and non-positive caps give empty results") {
    CHECK(greedyAssociate({}, {}).paths.empty());
    AssocConfig cfg;
    cfg.max_paths = 0;
    const auto p = testutil::path(0, {{.cx = 1, .cy = 1}});
    CHECK(greedyAssociate({p}, cfg).paths.empty());
    CHECK(extractAllPathSets({}, {}).empty());
}

}  // TEST_SUITE
