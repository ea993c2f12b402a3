// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/proposal.hpp"

#include <algorithm>
#include <stdexcept>

namespace actionprop {

std::vector<ActionProposal> emitProposals(const std::vector<Track>& tracks,
                                          const EmitConfig& cfg) {
    if (cfg.min_duration < 1) throw std::invalid_argument("min_duration must be positive");
    std::vector<ActionProposal> out;
    for (const auto& t : tracks) {
        if (t.empty()) continue;
        const int d = t.duration();
        const bool pass = cfg.strict ? d > cfg.min_duration : d >= cfg.min_duration;
        if (pass) out.push_back(ActionProposal{t});
    }
    std::stable_sort(out.begin(), out.end(), [](const ActionProposal& a, const ActionProposal& b) {
        return a.score() > b.score();
    });
    return out;
}

}  // namespace actionprop
