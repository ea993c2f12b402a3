// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "actionprop/core.hpp"
#include "actionprop/gmm.hpp"

namespace actionprop {

/// Likelihood-ratio motion score: logistic(Gp(h) / Gn(h)).
/// The negative density is floored at 1e-300 and the ratio capped at 1e6,
/// so the result is always defined and lies in (0, 1].
double motionScore(const FeatureHistogram& h, const GmmModel& positive, const GmmModel& negative);

/// Combined actionness S = human score + lambda_p * motion score.
/// Writes the value back into the detection and returns it.
double scoreDetection(Detection& d, const GmmModel& positive, const GmmModel& negative,
                      double lambda_p);

/// Score every detection in place. Without mixture models the motion term is
/// dropped and S = human score.
void scoreDetections(VideoDetections& video, const GmmModel* positive, const GmmModel* negative,
                     double lambda_p);

}  // namespace actionprop
