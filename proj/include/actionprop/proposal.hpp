// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "actionprop/completion.hpp"

namespace actionprop {

/// A completed track that survived the duration gate.
struct ActionProposal {
    Track track;
    int duration() const { return track.duration(); }
    double score() const { return track.score; }
};

struct EmitConfig {
    int min_duration = 20;
    // Inclusive gate (duration >= min_duration) unless strict, which demands
    // duration > min_duration.
    bool strict = false;
};

/// Duration-gate tracks into proposals, stably ordered by descending summed
/// actionness.
std::vector<ActionProposal> emitProposals(const std::vector<Track>& tracks, const EmitConfig& cfg);

}  // namespace actionprop
