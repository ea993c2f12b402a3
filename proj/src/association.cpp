// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace actionprop {

namespace {

struct PathFeatures {
    std::vector<double> color_center;
    std::vector<double> grad_center;
};

PathFeatures featureCenters(const ActionPath& p) {
    PathFeatures f;
    if (p.boxes.empty()) {
        throw std::invalid_argument("similarity requires non-empty paths");
    }
    f.color_center.assign(p.boxes.front().color_hist.dim(), 0.0);
    f.grad_center.assign(p.boxes.front().grad_hist.dim(), 0.0);
    for (const auto& d : p.boxes) {
        for (std::size_t i = 0; i < f.color_center.size(); ++i) {
            f.color_center[i] += d.color_hist[i];
        }
        for (std::size_t i = 0; i < f.grad_center.size(); ++i) {
            f.grad_center[i] += d.grad_hist[i];
        }
    }
    const double inv = 1.0 / static_cast<double>(p.boxes.size());
    for (double& v : f.color_center) {
        v *= inv;
    }
    for (double& v : f.grad_center) {
        v *= inv;
    }
    return f;
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double similarityFromCenters(const PathFeatures& a, const PathFeatures& b, double lambda_a,
                             double cap) {
    const double dist = l2(a.color_center, b.color_center) +
                        lambda_a * l2(a.grad_center, b.grad_center);
    if (dist <= 1.0 / cap) {
        return cap;
    }
    return 1.0 / dist;
}

}  // namespace

double pathSimilarity(const ActionPath& p, const ActionPath& q, double lambda_a, double cap) {
    return similarityFromCenters(featureCenters(p), featureCenters(q), lambda_a, cap);
}

double setObjective(const std::vector<ActionPath>& paths, const AssocConfig& cfg) {
    if (paths.empty()) {
        return 0.0;
    }
    // Union coverage: each distinct detection counts once.
    std::set<DetectionKey> covered;
    double coverage = 0.0;
    for (const auto& p : paths) {
        for (const auto& d : p.boxes) {
            if (covered.insert(d.key()).second) {
                coverage += d.actionness.value_or(0.0);
            }
        }
    }
    if (!cfg.use_similarity || paths.size() < 2) {
        return coverage;
    }
    // Canonical member order: score descending, then input position.
    std::vector<std::size_t> order(paths.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&paths](std::size_t a, std::size_t b) {
        return paths[a].score > paths[b].score;
    });
    std::vector<PathFeatures> feats;
    feats.reserve(paths.size());
    for (const auto& p : paths) {
        feats.push_back(featureCenters(p));
    }
    double bonus = 0.0;
    for (std::size_t k = 1; k < order.size(); ++k) {
        double mean_w = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            mean_w += similarityFromCenters(feats[order[k]], feats[order[j]], cfg.lambda_a,
                                            cfg.similarity_cap);
        }
        mean_w /= static_cast<double>(k);
        bonus += logistic(mean_w);
    }
    return coverage + bonus;
}

PathSet greedyAssociate(const std::vector<ActionPath>& pool, const AssocConfig& cfg) {
    PathSet result;
    if (pool.empty() || cfg.max_paths <= 0) {
        return result;
    }
    const std::size_t n = pool.size();

    std::vector<PathFeatures> feats;
    feats.reserve(n);
    for (const auto& p : pool) {
        feats.push_back(featureCenters(p));
    }

    // Seed: largest accumulated score, lowest index on ties.
    std::size_t seed = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (pool[i].score > pool[seed].score) {
            seed = i;
        }
    }

    std::vector<bool> selected(n, false);
    std::vector<std::size_t> members{seed};
    selected[seed] = true;
    std::set<DetectionKey> covered;
    double covered_score = 0.0;
    auto absorb = [&](const ActionPath& p) {
        for (const auto& d : p.boxes) {
            if (covered.insert(d.key()).second) {
                covered_score += d.actionness.value_or(0.0);
            }
        }
    };
    absorb(pool[seed]);

    while (static_cast<int>(members.size()) < cfg.max_paths) {
        std::size_t best = n;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n; ++c) {
            if (selected[c]) {
                continue;
            }
            bool feasible = true;
            for (std::size_t m : members) {
                if (pathOverlap(pool[c], pool[m]) > cfg.eta_p) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) {
                continue;
            }
            double marginal = 0.0;
            for (const auto& d : pool[c].boxes) {
                if (!covered.contains(d.key())) {
                    marginal += d.actionness.value_or(0.0);
                }
            }
            double value = covered_score + marginal;
            if (cfg.use_similarity) {
                double mean_w = 0.0;
                for (std::size_t m : members) {
                    mean_w += similarityFromCenters(feats[c], feats[m], cfg.lambda_a,
                                                    cfg.similarity_cap);
                }
                mean_w /= static_cast<double>(members.size());
                value += logistic(mean_w);
            }
            if (value > best_value) {
                best_value = value;
                best = c;
            }
        }
        if (best == n) {
            break;  // nothing feasible left
        }
        selected[best] = true;
        members.push_back(best);
        absorb(pool[best]);
    }

    for (std::size_t m : members) {
        result.paths.push_back(pool[m]);
        result.candidate_indices.push_back(static_cast<int>(m));
    }
    result.objective = setObjective(result.paths, cfg);
    return result;
}

std::vector<PathSet> extractAllPathSets(const std::vector<ActionPath>& pool,
                                        const AssocConfig& cfg) {
    std::vector<PathSet> sets;
    std::vector<int> remaining(pool.size());
    std::iota(remaining.begin(), remaining.end(), 0);

    while (!remaining.empty()) {
        std::vector<ActionPath> sub;
        sub.reserve(remaining.size());
        for (int idx : remaining) {
            sub.push_back(pool[idx]);
        }
        PathSet ps = greedyAssociate(sub, cfg);
        if (ps.paths.empty()) {
            break;
        }
        int longest = 0;
        for (const auto& p : ps.paths) {
            longest = std::max(longest, p.duration());
        }
        // The first set is always kept; later ones must carry a path of
        // useful duration or extraction stops.
        if (!sets.empty() && longest < cfg.min_path_duration) {
            break;
        }
        // Map indices back into the original pool and shrink the remainder.
        std::vector<int> original;
        original.reserve(ps.candidate_indices.size());
        for (int sub_idx : ps.candidate_indices) {
            original.push_back(remaining[sub_idx]);
        }
        ps.candidate_indices = original;
        std::vector<int> next;
        next.reserve(remaining.size());
        for (int idx : remaining) {
            if (std::find(original.begin(), original.end(), idx) == original.end()) {
                next.push_back(idx);
            }
        }
        remaining = std::move(next);
        sets.push_back(std::move(ps));
    }
    return sets;
}

}  // namespace actionprop
