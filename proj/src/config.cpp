// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace actionprop {

using nlohmann::json;

void PipelineConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
    if (lambda_p < 0.0 || lambda_a < 0.0) fail("lambda weights must be non-negative");
    if (eta_o < 0.0 || eta_o > 1.0) fail("eta_o must lie in [0,1]");
    if (eta_f < 0.0) fail("eta_f must be non-negative");
    if (eta_p < 0.0 || eta_p > 1.0) fail("eta_p must lie in [0,1]");
    if (eval_eta < 0.0 || eval_eta > 1.0) fail("eval_eta must lie in [0,1]");
    if (pool_size < 1) fail("pool_size must be positive");
    if (max_paths < 1) fail("max_paths must be positive");
    if (max_paths > pool_size) fail("max_paths must not exceed pool_size");
    if (min_path_duration < 1 || min_proposal_duration < 1) fail("durations must be positive");
    if (max_gap < 0) fail("max_gap must be non-negative");
    if (region_scale < 1.0) fail("region_scale must be >= 1");
    if (scales.empty()) fail("scales must be non-empty");
    for (double s : scales)
        if (s <= 0.0) fail("scales must be positive");
    if (stride_frac <= 0.0) fail("stride_frac must be positive");
    if (negatives_per_positive < 0 || initial_negative_cap < 0)
        fail("negative sample counts must be non-negative");
    if (negative_max_iou < 0.0 || negative_max_iou > 1.0) fail("negative_max_iou must lie in [0,1]");
    if (negative_offset_frac < 0.0) fail("negative_offset_frac must be non-negative");
    if (similarity_cap <= 0.0) fail("similarity_cap must be positive");
    if (track_gate < 0.0) fail("track_gate must be non-negative");
    if (gmm_components < 1) fail("gmm_components must be positive");
    if (gmm.max_iterations < 1) fail("gmm max_iterations must be positive");
    if (gmm.tolerance <= 0.0) fail("gmm tolerance must be positive");
    if (classifier.learning_rate <= 0.0) fail("classifier learning_rate must be positive");
    if (classifier.epochs < 1 || classifier.update_epochs < 1)
        fail("classifier epochs must be positive");
}

LinkConfig PipelineConfig::linkConfig() const { return LinkConfig{eta_o, eta_f, lambda_a}; }

SearchConfig PipelineConfig::searchConfig() const { return SearchConfig{linkConfig(), pool_size}; }

AssocConfig PipelineConfig::assocConfig() const {
    AssocConfig c;
    c.max_paths = max_paths;
    c.eta_p = eta_p;
    c.lambda_a = lambda_a;
    c.similarity_cap = similarity_cap;
    c.use_similarity = use_similarity;
    c.min_path_duration = min_path_duration;
    return c;
}

TrackBuildConfig PipelineConfig::trackBuildConfig() const {
    return TrackBuildConfig{lambda_a, track_gate};
}

CompletionConfig PipelineConfig::completionConfig() const {
    CompletionConfig c;
    c.max_gap = max_gap;
    c.window.region_scale = region_scale;
    c.window.scales = scales;
    c.window.stride_frac = stride_frac;
    c.negatives_per_positive = negatives_per_positive;
    c.negative_max_iou = negative_max_iou;
    c.negative_offset_frac = negative_offset_frac;
    c.seed = seed;
    return c;
}

EmitConfig PipelineConfig::emitConfig() const {
    return EmitConfig{min_proposal_duration, strict_duration};
}

std::string PipelineConfig::toJson() const {
    json j;
    j["lambda_p"] = lambda_p;
    j["gmm_components"] = gmm_components;
    j["gmm_max_iterations"] = gmm.max_iterations;
    j["gmm_tolerance"] = gmm.tolerance;
    j["gmm_seed"] = gmm_seed;
    j["eta_o"] = eta_o;
    j["eta_f"] = eta_f;
    j["lambda_a"] = lambda_a;
    j["pool_size"] = pool_size;
    j["max_paths"] = max_paths;
    j["eta_p"] = eta_p;
    j["similarity_cap"] = similarity_cap;
    j["use_similarity"] = use_similarity;
    j["min_path_duration"] = min_path_duration;
    j["track_gate"] = track_gate;
    j["max_gap"] = max_gap;
    j["region_scale"] = region_scale;
    j["scales"] = scales;
    j["stride_frac"] = stride_frac;
    j["negatives_per_positive"] = negatives_per_positive;
    j["negative_max_iou"] = negative_max_iou;
    j["negative_offset_frac"] = negative_offset_frac;
    j["initial_negative_cap"] = initial_negative_cap;
    j["classifier_learning_rate"] = classifier.learning_rate;
    j["classifier_regularization"] = classifier.regularization;
    j["classifier_epochs"] = classifier.epochs;
    j["classifier_update_epochs"] = classifier.update_epochs;
    j["classifier_seed"] = classifier.seed;
    j["min_proposal_duration"] = min_proposal_duration;
    j["strict_duration"] = strict_duration;
    j["eval_eta"] = eval_eta;
    j["seed"] = seed;
    return j.dump(2);
}

PipelineConfig PipelineConfig::fromJson(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    PipelineConfig c;
    try {
        c.lambda_p = j.value("lambda_p", c.lambda_p);
        c.gmm_components = j.value("gmm_components", c.gmm_components);
        c.gmm.max_iterations = j.value("gmm_max_iterations", c.gmm.max_iterations);
        c.gmm.tolerance = j.value("gmm_tolerance", c.gmm.tolerance);
        c.gmm_seed = j.value("gmm_seed", c.gmm_seed);
        c.eta_o = j.value("eta_o", c.eta_o);
        c.eta_f = j.value("eta_f", c.eta_f);
        c.lambda_a = j.value("lambda_a", c.lambda_a);
        c.pool_size = j.value("pool_size", c.pool_size);
        c.max_paths = j.value("max_paths", c.max_paths);
        c.eta_p = j.value("eta_p", c.eta_p);
        c.similarity_cap = j.value("similarity_cap", c.similarity_cap);
        c.use_similarity = j.value("use_similarity", c.use_similarity);
        c.min_path_duration = j.value("min_path_duration", c.min_path_duration);
        c.track_gate = j.value("track_gate", c.track_gate);
        c.max_gap = j.value("max_gap", c.max_gap);
        c.region_scale = j.value("region_scale", c.region_scale);
        c.scales = j.value("scales", c.scales);
        c.stride_frac = j.value("stride_frac", c.stride_frac);
        c.negatives_per_positive = j.value("negatives_per_positive", c.negatives_per_positive);
        c.negative_max_iou = j.value("negative_max_iou", c.negative_max_iou);
        c.negative_offset_frac = j.value("negative_offset_frac", c.negative_offset_frac);
        c.initial_negative_cap = j.value("initial_negative_cap", c.initial_negative_cap);
        c.classifier.learning_rate = j.value("classifier_learning_rate", c.classifier.learning_rate);
        c.classifier.regularization =
            j.value("classifier_regularization", c.classifier.regularization);
        c.classifier.epochs = j.value("classifier_epochs", c.classifier.epochs);
        c.classifier.update_epochs = j.value("classifier_update_epochs", c.classifier.update_epochs);
        c.classifier.seed = j.value("classifier_seed", c.classifier.seed);
        c.min_proposal_duration = j.value("min_proposal_duration", c.min_proposal_duration);
        c.strict_duration = j.value("strict_duration", c.strict_duration);
        c.eval_eta = j.value("eval_eta", c.eval_eta);
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fromJson(buf.str());
}

}  // namespace actionprop
