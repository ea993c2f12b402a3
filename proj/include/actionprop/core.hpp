// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace actionprop {

/// Axis-aligned box. (cx, cy) is the center, w/h are full extents in pixels.
struct BoundingBox {
    int frame = 0;
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    double left() const { return cx - 0.5 * w; }
    double right() const { return cx + 0.5 * w; }
    double top() const { return cy - 0.5 * h; }
    double bottom() const { return cy + 0.5 * h; }
    double area() const { return w * h; }

    bool valid() const { return frame >= 0 && w > 0.0 && h > 0.0; }
};

/// Spatial intersection-over-union; frame indices are ignored.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Non-negative feature histogram, L1-normalized on construction.
class FeatureHistogram {
public:
    FeatureHistogram() = default;

    /// Throws std::invalid_argument on negative entries or zero mass.
    explicit FeatureHistogram(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t dim() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

double l2Distance(const FeatureHistogram& a, const FeatureHistogram& b);

/// Identifies one detection record within a video: (frame, index within frame).
struct DetectionKey {
    int frame = 0;
    int index = 0;

    friend bool operator==(const DetectionKey&, const DetectionKey&) = default;
    friend auto operator<=>(const DetectionKey&, const DetectionKey&) = default;
};

/// One frame-level scored bounding box with its feature histograms.
struct Detection {
    BoundingBox box;
    int index = 0;  // position within the frame's detection list
    double human_score = 0.0;
    FeatureHistogram motion_hist;
    FeatureHistogram color_hist;
    FeatureHistogram grad_hist;
    std::optional<double> actionness;
    // Optional flow-median shift of this box toward the next frame.
    double shift_dx = 0.0;
    double shift_dy = 0.0;

    DetectionKey key() const { return {box.frame, index}; }
};

/// Combined appearance distance between two detections:
/// ||color_a - color_b|| + lambda_a * ||grad_a - grad_b||.
double appearanceDistance(const Detection& a, const Detection& b, double lambda_a);

/// All detections of one video, grouped per frame (index 0..T-1).
struct VideoDetections {
    std::string video;
    std::vector<std::vector<Detection>> frames;

    std::size_t frameCount() const { return frames.size(); }
    std::size_t totalDetections() const;
};

/// Logistic squashing used by the motion score and the association bonus.
double logistic(double x);

}  // namespace actionprop
