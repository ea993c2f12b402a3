// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/actionness.hpp"

#include <cmath>

namespace actionprop {

namespace {
constexpr double kDensityFloor = 1e-300;
constexpr double kRatioCap = 1e6;
}  // namespace

double motionScore(const FeatureHistogram& h, const GmmModel& positive, const GmmModel& negative) {
    const double log_p = positive.logDensity(h);
    const double log_n = std::max(negative.logDensity(h), std::log(kDensityFloor));
    double ratio;
    if (!std::isfinite(log_p)) {
        ratio = 0.0;  // positive density underflowed entirely
    } else {
        ratio = std::min(std::exp(log_p - log_n), kRatioCap);
    }
    return logistic(ratio);
}

double scoreDetection(Detection& d, const GmmModel& positive, const GmmModel& negative,
                      double lambda_p) {
    const double s_m = motionScore(d.motion_hist, positive, negative);
    const double s = d.human_score + lambda_p * s_m;
    d.actionness = s;
    return s;
}

void scoreDetections(VideoDetections& video, const GmmModel* positive, const GmmModel* negative,
                     double lambda_p) {
    for (auto& frame : video.frames) {
        for (auto& d : frame) {
            if (positive != nullptr && negative != nullptr) {
                scoreDetection(d, *positive, *negative, lambda_p);
            } else {
                d.actionness = d.human_score;
            }
        }
    }
}

}  // namespace actionprop
