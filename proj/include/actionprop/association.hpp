// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "actionprop/path_search.hpp"

namespace actionprop {

struct AssocConfig {
    int max_paths = 12;          // cap on |P|
    double eta_p = 0.3;          // pairwise path-overlap threshold
    double lambda_a = 1.0;       // gradient weight inside the similarity
    double similarity_cap = 1e3; // guard for near-zero feature distances
    bool use_similarity = true;  // drop the bonus for coverage-only ablations
    int min_path_duration = 10;  // extraction stop rule (longest path shorter than this)
};

/// Group of paths attributed to one actor.
struct PathSet {
    std::vector<ActionPath> paths;
    std::vector<int> candidate_indices;  // positions within the candidate pool
    double objective = 0.0;              // value under setObjective
};

/// Reciprocal feature-center distance between two paths:
/// W = 1 / (||C(p)-C(q)|| + lambda_a * ||H(p)-H(q)||), capped.
/// C(p), H(p) are the per-path means of member color/gradient histograms.
double pathSimilarity(const ActionPath& p, const ActionPath& q, double lambda_a, double cap);

/// Set-level objective: union coverage of actionness plus, per member after
/// the first, the logistic of its mean similarity to the members before it
/// (members taken in score-descending order). The same functional scores
/// greedy and oracle sets so their ratio is meaningful.
double setObjective(const std::vector<ActionPath>& paths, const AssocConfig& cfg);

/// Greedy selection: seed with the highest-score path, then repeatedly add
/// the feasible candidate maximizing union coverage plus the similarity
/// bonus; stop at max_paths or when nothing feasible remains. Feasible means
/// pathOverlap <= eta_p against every member.
PathSet greedyAssociate(const std::vector<ActionPath>& pool, const AssocConfig& cfg);

/// Repeatedly run greedyAssociate, removing each selected set from the pool.
/// The first set is always emitted; extraction stops when a set's longest
/// path is shorter than min_path_duration.
std::vector<PathSet> extractAllPathSets(const std::vector<ActionPath>& pool,
                                        const AssocConfig& cfg);

}  // namespace actionprop
