// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/path_search.hpp"

#include <algorithm>
#include <stdexcept>

namespace actionprop {

double pathOverlap(const ActionPath& p, const ActionPath& q) {
    if (p.boxes.empty() || q.boxes.empty()) {
        throw std::invalid_argument("path overlap requires non-empty paths");
    }
    const int shared_lo = std::max(p.start_frame, q.start_frame);
    const int shared_hi = std::min(p.end_frame, q.end_frame);
    if (shared_hi < shared_lo) {
        return 0.0;
    }
    const int denom = std::max(p.end_frame, q.end_frame) - std::min(p.start_frame, q.start_frame);
    if (denom == 0) {
        // Both paths are the same single frame.
        return iou(p.boxes.front().box, q.boxes.front().box);
    }
    double sum = 0.0;
    for (int t = shared_lo; t <= shared_hi; ++t) {
        sum += iou(p.at(t).box, q.at(t).box);
    }
    return std::clamp(sum / denom, 0.0, 1.0);
}

bool linkable(const Detection& a, const Detection& b, const LinkConfig& cfg) {
    if (b.box.frame != a.box.frame + 1) {
        throw std::invalid_argument("non-adjacent link query");
    }
    if (iou(a.box, b.box) < cfg.eta_o) {
        return false;
    }
    return appearanceDistance(a, b, cfg.lambda_a) <= cfg.eta_f;
}

namespace {

// Pool entry: score plus the tail detection it would be traced back from.
struct PoolSlot {
    double tau = 0.0;
    int frame = 0;
    int index = 0;
};

bool slotOrder(const PoolSlot& a, const PoolSlot& b) {
    if (a.tau != b.tau) {
        return a.tau > b.tau;
    }
    if (a.frame != b.frame) {
        return a.frame < b.frame;
    }
    return a.index < b.index;
}

}  // namespace

std::vector<ActionPath> forwardBackwardSearch(const VideoDetections& video,
                                              const SearchConfig& cfg) {
    const int frame_count = static_cast<int>(video.frames.size());
    if (frame_count == 0 || cfg.pool_size <= 0) {
        return {};
    }

    // tau and predecessor backpointer per detection.
    std::vector<std::vector<double>> tau(frame_count);
    std::vector<std::vector<int>> backptr(frame_count);
    std::vector<PoolSlot> pool;
    pool.reserve(cfg.pool_size + 1);

    auto isTail = [&pool](int frame, int index) {
        for (const auto& s : pool) {
            if (s.frame == frame && s.index == index) {
                return true;
            }
        }
        return false;
    };

    for (int t = 0; t < frame_count; ++t) {
        const auto& dets = video.frames[t];
        tau[t].assign(dets.size(), 0.0);
        backptr[t].assign(dets.size(), -1);

        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (!dets[i].actionness.has_value()) {
                throw std::invalid_argument("detection missing actionness score");
            }
            const double s = *dets[i].actionness;
            int best_pred = -1;
            if (t > 0) {
                const auto& prev = video.frames[t - 1];
                for (std::size_t j = 0; j < prev.size(); ++j) {
                    if (!linkable(prev[j], dets[i], cfg.link)) {
                        continue;
                    }
                    if (best_pred < 0 || tau[t - 1][j] > tau[t - 1][best_pred]) {
                        best_pred = static_cast<int>(j);
                    }
                }
            }
            backptr[t][i] = best_pred;
            tau[t][i] = best_pred >= 0 ? tau[t - 1][best_pred] + s : s;
        }

        // Step 1: advance every entry whose tail links into this frame.
        for (auto& slot : pool) {
            if (slot.frame != t - 1) {
                continue;  // frozen tail, no adjacent successor possible
            }
            const Detection& tail = video.frames[t - 1][slot.index];
            int best = -1;
            for (std::size_t i = 0; i < dets.size(); ++i) {
                if (!linkable(tail, dets[i], cfg.link)) {
                    continue;
                }
                if (best < 0 || tau[t][i] > tau[t][best]) {
                    best = static_cast<int>(i);
                }
            }
            if (best >= 0) {
                slot = {tau[t][best], t, best};
            }
        }

        // Step 1 can drive two entries onto the same tail; such copies are
        // the same path twice, so collapse them before step 2.
        std::sort(pool.begin(), pool.end(), slotOrder);
        pool.erase(std::unique(pool.begin(), pool.end(),
                               [](const PoolSlot& a, const PoolSlot& b) {
                                   return a.frame == b.frame && a.index == b.index;
                               }),
                   pool.end());

        // Step 2: detections not already tracked claim a slot when they beat
        // the weakest entry.
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (isTail(t, static_cast<int>(i))) {
                continue;
            }
            const PoolSlot slot{tau[t][i], t, static_cast<int>(i)};
            if (static_cast<int>(pool.size()) < cfg.pool_size) {
                pool.insert(std::upper_bound(pool.begin(), pool.end(), slot, slotOrder), slot);
            } else if (slot.tau > pool.back().tau) {
                pool.back() = slot;
                std::sort(pool.begin(), pool.end(), slotOrder);
            }
        }
    }

    // Backward trace: recover each pool entry's chain through the backpointers.
    std::vector<ActionPath> paths;
    paths.reserve(pool.size());
    for (const auto& slot : pool) {
        ActionPath p;
        p.score = slot.tau;
        std::vector<Detection> chain;
        int f = slot.frame;
        int i = slot.index;
        while (i >= 0) {
            chain.push_back(video.frames[f][i]);
            i = backptr[f][i];
            --f;
        }
        std::reverse(chain.begin(), chain.end());
        p.start_frame = chain.front().box.frame;
        p.end_frame = chain.back().box.frame;
        p.boxes = std::move(chain);
        paths.push_back(std::move(p));
    }
    return paths;
}

}  // namespace actionprop
