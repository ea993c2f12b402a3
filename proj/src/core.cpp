// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace actionprop {

double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
    const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
    if (ix <= 0.0 || iy <= 0.0) {
        return 0.0;
    }
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

FeatureHistogram::FeatureHistogram(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("histogram must be non-empty");
    }
    double sum = 0.0;
    for (double v : values_) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw std::invalid_argument("histogram entries must be finite and non-negative");
        }
        sum += v;
    }
    if (sum <= 0.0) {
        throw std::invalid_argument("histogram has zero mass");
    }
    for (double& v : values_) {
        v /= sum;
    }
}

double l2Distance(const FeatureHistogram& a, const FeatureHistogram& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("histogram dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double appearanceDistance(const Detection& a, const Detection& b, double lambda_a) {
    return l2Distance(a.color_hist, b.color_hist) +
           lambda_a * l2Distance(a.grad_hist, b.grad_hist);
}

std::size_t VideoDetections::totalDetections() const {
    std::size_t n = 0;
    for (const auto& f : frames) {
        n += f.size();
    }
    return n;
}

double logistic(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace actionprop
