// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/oracle.hpp"

#include <limits>
#include <stdexcept>

namespace actionprop {

namespace {

struct ChainSearch {
    const VideoDetections* video = nullptr;
    const LinkConfig* cfg = nullptr;
    std::size_t limit = 0;
    std::size_t count = 0;

    double best_tau = -std::numeric_limits<double>::infinity();
    std::vector<const Detection*> best_chain;
    std::vector<const Detection*> chain;

    void visit(double tau) {
        if (++count > limit) throw std::invalid_argument("oracle instance too large");
        const Detection* tail = chain.back();
        const bool better =
            tau > best_tau ||
            (tau == best_tau && !best_chain.empty() &&
             DetectionKey{tail->box.frame, tail->index} < best_chain.back()->key());
        if (better || best_chain.empty()) {
            best_tau = tau;
            best_chain = chain;
        }
        const std::size_t next = static_cast<std::size_t>(tail->box.frame) + 1;
        if (next >= video->frames.size()) return;
        for (const auto& d : video->frames[next]) {
            if (!linkable(*tail, d, *cfg)) continue;
            chain.push_back(&d);
            visit(tau + *d.actionness);
            chain.pop_back();
        }
    }
};

}  // namespace

ActionPath bruteForceBestPath(const VideoDetections& video, const LinkConfig& cfg,
                              const OracleLimits& limits) {
    if (video.totalDetections() == 0) throw std::invalid_argument("empty instance");
    for (const auto& frame : video.frames)
        for (const auto& d : frame)
            if (!d.actionness) throw std::invalid_argument("detection missing actionness score");

    ChainSearch search;
    search.video = &video;
    search.cfg = &cfg;
    search.limit = limits.max_enumeration;
    for (const auto& frame : video.frames) {
        for (const auto& d : frame) {
            search.chain.push_back(&d);
            search.visit(*d.actionness);
            search.chain.pop_back();
        }
    }

    ActionPath p;
    p.start_frame = search.best_chain.front()->box.frame;
    p.end_frame = search.best_chain.back()->box.frame;
    p.score = search.best_tau;
    for (const auto* d : search.best_chain) p.boxes.push_back(*d);
    return p;
}

PathSet bruteForceBestPathSet(const std::vector<ActionPath>& pool, const AssocConfig& cfg,
                              const OracleLimits& limits) {
    if (pool.empty()) throw std::invalid_argument("empty candidate pool");
    if (cfg.max_paths < 1) throw std::invalid_argument("max_paths must be positive");

    const std::size_t n = pool.size();
    const std::size_t max_k = std::min<std::size_t>(static_cast<std::size_t>(cfg.max_paths), n);

    std::size_t count = 0;
    bool have_best = false;
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_idx;

    std::vector<ActionPath> members;
    for (std::size_t k = 1; k <= max_k; ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            if (++count > limits.max_enumeration)
                throw std::invalid_argument("oracle instance too large");

            bool feasible = true;
            for (std::size_t i = 0; i < k && feasible; ++i)
                for (std::size_t j = i + 1; j < k && feasible; ++j)
                    if (pathOverlap(pool[idx[i]], pool[idx[j]]) > cfg.eta_p) feasible = false;
            if (feasible) {
                members.clear();
                for (std::size_t i : idx) members.push_back(pool[i]);
                const double value = setObjective(members, cfg);
                if (!have_best || value > best_value) {
                    have_best = true;
                    best_value = value;
                    best_idx = idx;
                }
            }

            // Next lexicographic combination of size k.
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
    }

    PathSet out;
    if (!have_best) return out;  // unreachable: singletons are always feasible
    for (std::size_t i : best_idx) {
        out.paths.push_back(pool[i]);
        out.candidate_indices.push_back(static_cast<int>(i));
    }
    out.objective = best_value;
    return out;
}

}  // namespace actionprop
