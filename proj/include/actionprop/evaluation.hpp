// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "actionprop/core.hpp"
#include "actionprop/proposal.hpp"

namespace actionprop {

/// Annotated actor span; boxes[i] belongs to frame start_frame + i and may be
/// null inside the span.
struct GroundTruthTrack {
    std::string video;
    std::string label;
    int start_frame = 0;
    std::vector<std::optional<BoundingBox>> boxes;

    std::optional<BoundingBox> boxAt(int frame) const;
    int annotatedFrames() const;  // non-null count
};

/// Mean per-frame IoU over the frames where either side has a box; one-sided
/// frames contribute 0 but still count.
/// Throws std::invalid_argument when there are no comparable frames.
double trackIou(const GroundTruthTrack& g, const Track& t);

/// Fraction of ground truths matched one-to-one (greedy best-first) by a
/// proposal with trackIou >= eta. Throws when gts is empty.
double recallAt(const std::vector<ActionProposal>& proposals,
                const std::vector<GroundTruthTrack>& gts, double eta);

struct AboResult {
    double abo = 0.0;   // mean best overlap over ground truths
    double mabo = 0.0;  // mean of per-class ABO
    std::map<std::string, double> per_class;
};

AboResult aboMabo(const std::vector<ActionProposal>& proposals,
                  const std::vector<GroundTruthTrack>& gts);

struct MetricsReport {
    double eta = 0.5;
    double recall = 0.0;
    double abo = 0.0;
    double mabo = 0.0;
    std::map<std::string, double> per_class_abo;
    std::map<std::string, int> proposals_per_video;
    int total_proposals = 0;
    int total_ground_truths = 0;
};

MetricsReport evaluateProposals(const std::vector<ActionProposal>& proposals,
                                const std::vector<GroundTruthTrack>& gts, double eta);

}  // namespace actionprop
