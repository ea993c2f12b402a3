// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "actionprop/rng.hpp"

namespace actionprop {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double logGaussianDiag(const std::vector<double>& x, const GmmComponent& c) {
    double acc = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - c.mean[d];
        acc += diff * diff / c.variance[d] + std::log(c.variance[d]) + kLogTwoPi;
    }
    return -0.5 * acc;
}

double logSumExp(const std::vector<double>& xs) {
    const double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m)) {
        return m;
    }
    double acc = 0.0;
    for (double x : xs) {
        acc += std::exp(x - m);
    }
    return m + std::log(acc);
}

double squaredDistance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// k-means++ seeding: subsequent centers drawn proportionally to the squared
// distance from the nearest already-chosen center.
std::vector<std::vector<double>> seedCenters(const std::vector<const std::vector<double>*>& xs,
                                             int k, Rng& rng) {
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    centers.push_back(*xs[rng.uniformInt(0, static_cast<int>(xs.size()) - 1)]);
    std::vector<double> d2(xs.size(), 0.0);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) {
                best = std::min(best, squaredDistance(*xs[i], c));
            }
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // All remaining mass sits on existing centers; duplicate one.
            centers.push_back(*xs[rng.uniformInt(0, static_cast<int>(xs.size()) - 1)]);
            continue;
        }
        const double target = rng.uniform() * total;
        double cum = 0.0;
        std::size_t pick = xs.size() - 1;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            cum += d2[i];
            if (cum >= target) {
                pick = i;
                break;
            }
        }
        centers.push_back(*xs[pick]);
    }
    return centers;
}

}  // namespace

GmmModel::GmmModel(std::vector<GmmComponent> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw std::invalid_argument("mixture must have at least one component");
    }
    const std::size_t d = components_[0].mean.size();
    double weight_sum = 0.0;
    for (const auto& c : components_) {
        if (c.mean.size() != d || c.variance.size() != d) {
            throw std::invalid_argument("component dimensions disagree");
        }
        if (c.weight <= 0.0) {
            throw std::invalid_argument("component weights must be positive");
        }
        for (double v : c.variance) {
            if (v < kVarianceFloor) {
                throw std::invalid_argument("variance below floor");
            }
        }
        weight_sum += c.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("component weights must sum to 1");
    }
}

double GmmModel::logDensity(const FeatureHistogram& x) const {
    if (x.dim() != dim()) {
        throw std::invalid_argument("input dimension does not match model");
    }
    std::vector<double> terms;
    terms.reserve(components_.size());
    for (const auto& c : components_) {
        terms.push_back(std::log(c.weight) + logGaussianDiag(x.values(), c));
    }
    return logSumExp(terms);
}

double GmmModel::density(const FeatureHistogram& x) const {
    return std::exp(logDensity(x));
}

std::string GmmModel::toJson() const {
    nlohmann::json j;
    j["dim"] = dim();
    auto& comps = j["components"] = nlohmann::json::array();
    for (const auto& c : components_) {
        comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"variance", c.variance}});
    }
    return j.dump();
}

GmmModel GmmModel::fromJson(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<GmmComponent> comps;
    for (const auto& jc : j.at("components")) {
        GmmComponent c;
        c.weight = jc.at("weight").get<double>();
        c.mean = jc.at("mean").get<std::vector<double>>();
        c.variance = jc.at("variance").get<std::vector<double>>();
        comps.push_back(std::move(c));
    }
    GmmModel model(std::move(comps));
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != model.dim()) {
        throw std::invalid_argument("declared dim does not match components");
    }
    return model;
}

GmmFitResult fitGmm(const std::vector<FeatureHistogram>& samples, int k, std::uint64_t seed,
                    const GmmFitOptions& options) {
    if (samples.empty()) {
        throw std::invalid_argument("no training data");
    }
    if (k <= 0) {
        throw std::invalid_argument("component count must be positive");
    }
    if (static_cast<std::size_t>(k) > samples.size()) {
        throw std::invalid_argument("over-parameterized: k exceeds sample count");
    }
    const std::size_t n = samples.size();
    const std::size_t d = samples[0].dim();
    std::vector<const std::vector<double>*> xs;
    xs.reserve(n);
    for (const auto& s : samples) {
        if (s.dim() != d) {
            throw std::invalid_argument("sample dimensions disagree");
        }
        xs.push_back(&s.values());
    }

    Rng rng(seed);
    auto means = seedCenters(xs, k, rng);

    // Initial spread: global per-dimension variance, floored.
    std::vector<double> global_mean(d, 0.0);
    for (const auto* x : xs) {
        for (std::size_t j = 0; j < d; ++j) {
            global_mean[j] += (*x)[j];
        }
    }
    for (double& m : global_mean) {
        m /= static_cast<double>(n);
    }
    std::vector<double> global_var(d, 0.0);
    for (const auto* x : xs) {
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = (*x)[j] - global_mean[j];
            global_var[j] += diff * diff;
        }
    }
    for (double& v : global_var) {
        v = std::max(v / static_cast<double>(n), GmmModel::kVarianceFloor);
    }

    std::vector<GmmComponent> comps(k);
    for (int j = 0; j < k; ++j) {
        comps[j].weight = 1.0 / k;
        comps[j].mean = means[j];
        comps[j].variance = global_var;
    }

    GmmFitResult result;
    std::vector<std::vector<double>> resp(n, std::vector<double>(k, 0.0));
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        // E-step (log domain) and current log-likelihood.
        double ll = 0.0;
        std::vector<double> terms(k);
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                GmmComponent& c = comps[j];
                double acc = 0.0;
                for (std::size_t t = 0; t < d; ++t) {
                    const double diff = (*xs[i])[t] - c.mean[t];
                    acc += diff * diff / c.variance[t] + std::log(c.variance[t]) + kLogTwoPi;
                }
                terms[j] = std::log(c.weight) - 0.5 * acc;
            }
            const double lse = logSumExp(terms);
            ll += lse;
            for (int j = 0; j < k; ++j) {
                resp[i][j] = std::exp(terms[j] - lse);
            }
        }
        result.log_likelihood.push_back(ll);
        result.iterations = iter + 1;
        if (iter > 0 && ll - prev_ll < options.tolerance) {
            result.converged = true;
            break;
        }
        prev_ll = ll;

        // M-step.
        for (int j = 0; j < k; ++j) {
            double nj = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                nj += resp[i][j];
            }
            GmmComponent& c = comps[j];
            if (nj <= 1e-12) {
                // Dead component: keep parameters, give it a token weight.
                c.weight = 1e-8;
                continue;
            }
            c.weight = nj / static_cast<double>(n);
            std::fill(c.mean.begin(), c.mean.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t t = 0; t < d; ++t) {
                    c.mean[t] += resp[i][j] * (*xs[i])[t];
                }
            }
            for (double& m : c.mean) {
                m /= nj;
            }
            std::fill(c.variance.begin(), c.variance.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t t = 0; t < d; ++t) {
                    const double diff = (*xs[i])[t] - c.mean[t];
                    c.variance[t] += resp[i][j] * diff * diff;
                }
            }
            for (double& v : c.variance) {
                v = std::max(v / nj, GmmModel::kVarianceFloor);
            }
        }
        double wsum = 0.0;
        for (const auto& c : comps) {
            wsum += c.weight;
        }
        for (auto& c : comps) {
            c.weight /= wsum;
        }
    }

    result.model = GmmModel(std::move(comps));
    return result;
}

}  // namespace actionprop
