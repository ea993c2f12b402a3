// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "actionprop/completion.hpp"
#include "actionprop/core.hpp"
#include "actionprop/evaluation.hpp"

namespace actionprop {

/// One scripted actor: a drifting box with a fixed appearance prototype.
struct ActorSpec {
    std::string label = "action";
    int start_frame = 0;
    int end_frame = -1;  // inclusive; -1 means the scenario's last frame
    BoundingBox start;   // box at start_frame (frame field ignored)

    std::string motion = "linear";  // "linear" or "sinusoidal"
    double vx = 0.0;                // px/frame drift
    double vy = 0.0;
    double amp_x = 0.0;  // sinusoidal sway amplitude (px)
    double amp_y = 0.0;
    double period = 30.0;     // sway period in frames
    double size_drift = 0.0;  // relative size change per frame

    std::vector<double> motion_proto;
    std::vector<double> color_proto;
    std::vector<double> grad_proto;
    double human_score = 0.9;

    // Inclusive frame ranges where the detector "misses" the actor.
    std::vector<std::pair<int, int>> forced_gaps;

    BoundingBox boxAt(int frame) const;  // noiseless ground-truth box
};

struct NoiseSpec {
    double center_jitter = 0.0;     // px sigma on detection centers
    double scale_jitter = 0.0;      // relative sigma on detection size
    double dropout = 0.0;           // per-frame miss probability
    int clutter_per_frame = 0;      // random low-score distractors
    double score_noise = 0.0;       // sigma on human_score
    double appearance_noise = 0.0;  // per-bin sigma before renormalization
};

struct ScenarioSpec {
    std::uint64_t seed = 1;
    std::string video = "synthetic";
    int frames = 100;
    double canvas_w = 320.0;
    double canvas_h = 240.0;
    std::vector<ActorSpec> actors;
    NoiseSpec noise;

    std::string toJson() const;
    static ScenarioSpec fromJson(const std::string& text);
};

struct Scenario {
    VideoDetections detections;
    std::vector<GroundTruthTrack> ground_truth;
    double canvas_w = 0.0;
    double canvas_h = 0.0;
};

/// Roll out the scenario deterministically: per frame, actors in spec order
/// (jittered box, noisy score/appearance, true-velocity shift), then clutter.
/// Throws std::invalid_argument on an invalid spec.
Scenario generateScenario(const ScenarioSpec& spec);

/// Feature oracle over the scenario's ground truth: a query box gets the
/// best-overlapping actor's prototype blended with a uniform background,
/// weighted by that IoU. Stands in for real feature extraction.
FeatureProvider makeScenarioProvider(const ScenarioSpec& spec);

}  // namespace actionprop
