// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actionprop/completion.hpp"
#include "actionprop/config.hpp"
#include "actionprop/core.hpp"
#include "actionprop/evaluation.hpp"
#include "actionprop/gmm.hpp"
#include "actionprop/proposal.hpp"

namespace actionprop {

struct PipelineInputs {
    std::vector<VideoDetections> videos;
    // Actionness models; both null -> actionness falls back to the human score.
    const GmmModel* positive_model = nullptr;
    const GmmModel* negative_model = nullptr;
    // Optional feature oracle for completion scan windows; without it gaps
    // are filled geometrically along the flow shift.
    FeatureProvider provider;
    // Frame bounds for window clipping, when known.
    std::optional<double> canvas_w;
    std::optional<double> canvas_h;
    // Non-empty ground truth enables the metrics stage.
    std::vector<GroundTruthTrack> ground_truth;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct VideoSummary {
    std::string video;
    std::size_t detections = 0;
    std::size_t paths = 0;
    std::size_t sets = 0;
    std::size_t tracks = 0;
    std::size_t proposals = 0;
};

struct PipelineResult {
    std::vector<ActionProposal> proposals;
    std::optional<MetricsReport> metrics;
    std::vector<StageTiming> timings;
    std::vector<VideoSummary> summaries;
};

/// score -> search -> associate -> complete -> emit (-> evaluate), per video
/// in input order. Deterministic for fixed inputs and config. Errors from a
/// stage are rethrown with the stage name prefixed.
PipelineResult runPipeline(const PipelineInputs& inputs, const PipelineConfig& config);

}  // namespace actionprop
