// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "actionprop/core.hpp"

namespace actionprop {

/// Diagonal-covariance Gaussian mixture over feature histograms.
struct GmmComponent {
    double weight = 1.0;
    std::vector<double> mean;
    std::vector<double> variance;
};

class GmmModel {
public:
    GmmModel() = default;

    /// Throws std::invalid_argument when weights do not form a distribution,
    /// dimensions disagree, or a variance falls below the floor.
    explicit GmmModel(std::vector<GmmComponent> components);

    std::size_t dim() const { return components_.empty() ? 0 : components_[0].mean.size(); }
    const std::vector<GmmComponent>& components() const { return components_; }

    /// Mixture density at x (linear domain, may underflow to 0 far from mass).
    double density(const FeatureHistogram& x) const;

    /// log density via log-sum-exp; -inf when the density underflows entirely.
    double logDensity(const FeatureHistogram& x) const;

    std::string toJson() const;
    static GmmModel fromJson(const std::string& text);

    static constexpr double kVarianceFloor = 1e-6;

private:
    std::vector<GmmComponent> components_;
};

struct GmmFitOptions {
    int max_iterations = 200;
    double tolerance = 1e-6;  // stop when log-likelihood improves by less
};

struct GmmFitResult {
    GmmModel model;
    // Total log-likelihood after each EM iteration; non-decreasing.
    std::vector<double> log_likelihood;
    int iterations = 0;
    bool converged = false;
};

/// EM fit with k-means++ seeding. Deterministic for a fixed seed.
/// Throws std::invalid_argument on an empty sample set or k > samples.
GmmFitResult fitGmm(const std::vector<FeatureHistogram>& samples, int k,
                    std::uint64_t seed, const GmmFitOptions& options = {});

}  // namespace actionprop
