// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "actionprop/core.hpp"

namespace actionprop {

/// Temporally contiguous chain of detections with its accumulated
/// actionness score. boxes[i] sits on frame start_frame + i.
struct ActionPath {
    int start_frame = 0;
    int end_frame = 0;
    std::vector<Detection> boxes;
    double score = 0.0;

    int duration() const { return end_frame - start_frame + 1; }
    const Detection& at(int frame) const { return boxes[frame - start_frame]; }
    bool covers(int frame) const { return frame >= start_frame && frame <= end_frame; }
};

/// Temporal overlap of two paths: the summed per-frame IoU over the shared
/// span, normalized by the union frame-index span and clamped to [0, 1].
/// Two single-frame paths on the same frame fall back to plain box IoU.
double pathOverlap(const ActionPath& p, const ActionPath& q);

struct LinkConfig {
    double eta_o = 0.3;    // minimum IoU between consecutive boxes
    double eta_f = 0.5;    // maximum combined appearance distance
    double lambda_a = 1.0; // gradient-term weight in the appearance distance
};

/// Whether detection b (at frame a.frame + 1) may continue a path ending at a:
/// IoU >= eta_o and appearance distance <= eta_f.
/// Throws std::invalid_argument when the frames are not adjacent.
bool linkable(const Detection& a, const Detection& b, const LinkConfig& cfg);

struct SearchConfig {
    LinkConfig link;
    int pool_size = 50;  // candidate pool capacity (top-N paths kept)
};

/// Forward search with a top-N candidate pool, then backpointer trace.
///
/// Each detection accumulates tau(b_t) = max over linkable predecessors of
/// tau(b_{t-1}) + S(b_t); detections with no linkable predecessor start a new
/// path. Per frame the pool is updated in two steps: every entry whose tail
/// links to some detection advances to its best-tau successor, then any
/// detection beating the weakest entry claims a slot. Entries whose tail has
/// no successor stay frozen but remain displaceable.
///
/// Requires actionness on every detection. Returns up to pool_size paths
/// sorted by score descending; ties broken by lowest (frame, index) tail.
std::vector<ActionPath> forwardBackwardSearch(const VideoDetections& video,
                                              const SearchConfig& cfg);

}  // namespace actionprop
