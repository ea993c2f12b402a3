// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "actionprop/association.hpp"
#include "actionprop/completion.hpp"
#include "actionprop/gmm.hpp"
#include "actionprop/path_search.hpp"
#include "actionprop/proposal.hpp"

namespace actionprop {

/// Every tunable of the pipeline in one place. Defaults reproduce the
/// shipped behavior; validate() rejects out-of-range values.
struct PipelineConfig {
    // Scoring
    double lambda_p = 1.0;  // motion-score weight in the combined actionness
    int gmm_components = 2;
    GmmFitOptions gmm;
    std::uint64_t gmm_seed = 11;

    // Linking / search
    double eta_o = 0.3;
    double eta_f = 0.5;
    double lambda_a = 1.0;
    int pool_size = 50;

    // Association
    int max_paths = 12;
    double eta_p = 0.3;
    double similarity_cap = 1e3;
    bool use_similarity = true;
    int min_path_duration = 10;

    // Track building / completion
    double track_gate = 0.5;
    int max_gap = 30;
    double region_scale = 1.5;
    std::vector<double> scales = {0.8, 0.9, 1.0, 1.1, 1.2};
    double stride_frac = 0.1;
    int negatives_per_positive = 8;
    double negative_max_iou = 0.3;
    double negative_offset_frac = 0.5;
    int initial_negative_cap = 256;  // excluded detections used as negatives
    ClassifierOptions classifier;

    // Emission / evaluation
    int min_proposal_duration = 20;
    bool strict_duration = false;
    double eval_eta = 0.5;

    std::uint64_t seed = 7;

    void validate() const;  // throws std::invalid_argument

    LinkConfig linkConfig() const;
    SearchConfig searchConfig() const;
    AssocConfig assocConfig() const;
    TrackBuildConfig trackBuildConfig() const;
    CompletionConfig completionConfig() const;
    EmitConfig emitConfig() const;

    std::string toJson() const;
    static PipelineConfig fromJson(const std::string& text);
    static PipelineConfig fromFile(const std::string& path);
};

}  // namespace actionprop
