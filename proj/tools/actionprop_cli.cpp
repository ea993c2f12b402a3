// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "actionprop/actionness.hpp"
#include "actionprop/association.hpp"
#include "actionprop/completion.hpp"
#include "actionprop/config.hpp"
#include "actionprop/evaluation.hpp"
#include "actionprop/gmm.hpp"
#include "actionprop/io.hpp"
#include "actionprop/path_search.hpp"
#include "actionprop/pipeline.hpp"
#include "actionprop/proposal.hpp"
#include "actionprop/rng.hpp"
#include "actionprop/synthetic.hpp"

namespace ap = actionprop;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
};

void addCommon(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "pipeline config JSON");
    cmd->add_option("--seed", opts.seed, "override the config seed");
}

ap::PipelineConfig loadConfig(const CommonOpts& opts) {
    ap::PipelineConfig cfg;
    if (!opts.config_path.empty()) cfg = ap::PipelineConfig::fromFile(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    cfg.validate();
    return cfg;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct ModelPair {
    ap::GmmModel positive;
    ap::GmmModel negative;
};

ModelPair readModels(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(readFile(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("model file parse error: " + std::string(e.what()));
    }
    if (!j.contains("positive") || !j.contains("negative"))
        throw std::invalid_argument("model file must contain positive and negative mixtures");
    return {ap::GmmModel::fromJson(j.at("positive").dump()),
            ap::GmmModel::fromJson(j.at("negative").dump())};
}

void writeModels(const ModelPair& models, const std::string& path) {
    nlohmann::json j;
    j["positive"] = nlohmann::json::parse(models.positive.toJson());
    j["negative"] = nlohmann::json::parse(models.negative.toJson());
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << j.dump(2) << '\n';
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::vector<ap::FeatureHistogram> motionHistograms(const std::string& path) {
    std::vector<ap::FeatureHistogram> out;
    for (const auto& video : ap::readDetections(path))
        for (const auto& frame : video.frames)
            for (const auto& d : frame) out.push_back(d.motion_hist);
    return out;
}

// ---- subcommand bodies ----

int cmdGenerate(const std::string& spec_path, const CommonOpts& opts, const std::string& output,
                const std::string& gt_output) {
    ap::ScenarioSpec spec = ap::ScenarioSpec::fromJson(readFile(spec_path));
    if (opts.seed) spec.seed = *opts.seed;
    const ap::Scenario scenario = ap::generateScenario(spec);
    ap::writeDetections({scenario.detections}, output);
    if (!gt_output.empty()) ap::writeGroundTruth(scenario.ground_truth, gt_output);
    std::cout << "generated " << scenario.detections.totalDetections() << " detections over "
              << scenario.detections.frameCount() << " frames\n";
    return 0;
}

int cmdScore(const std::string& input, const CommonOpts& opts, const std::string& output,
             const std::string& model_path, bool fit, const std::string& positives_path,
             const std::string& negatives_path, const std::string& model_output) {
    const ap::PipelineConfig cfg = loadConfig(opts);
    std::optional<ModelPair> models;
    if (fit) {
        if (positives_path.empty() || negatives_path.empty())
            throw std::invalid_argument("--fit requires --positives and --negatives");
        const auto pos = motionHistograms(positives_path);
        const auto neg = motionHistograms(negatives_path);
        models = ModelPair{
            ap::fitGmm(pos, cfg.gmm_components, cfg.gmm_seed, cfg.gmm).model,
            ap::fitGmm(neg, cfg.gmm_components, cfg.gmm_seed + 1, cfg.gmm).model};
        if (!model_output.empty()) writeModels(*models, model_output);
    } else if (!model_path.empty()) {
        models = readModels(model_path);
    }

    auto videos = ap::readDetections(input);
    for (auto& v : videos)
        ap::scoreDetections(v, models ? &models->positive : nullptr,
                            models ? &models->negative : nullptr, cfg.lambda_p);
    ap::writeDetections(videos, output);
    return 0;
}

int cmdSearch(const std::string& input, const CommonOpts& opts, const std::string& output) {
    const ap::PipelineConfig cfg = loadConfig(opts);
    std::vector<ap::VideoPaths> out;
    for (const auto& v : ap::readDetections(input))
        out.push_back({v.video, ap::forwardBackwardSearch(v, cfg.searchConfig())});
    ap::writePaths(out, output);
    return 0;
}

int cmdAssociate(const std::string& input, const CommonOpts& opts, const std::string& output) {
    const ap::PipelineConfig cfg = loadConfig(opts);
    std::vector<ap::VideoPathSets> out;
    for (const auto& v : ap::readPaths(input))
        out.push_back({v.video, ap::extractAllPathSets(v.paths, cfg.assocConfig())});
    ap::writePathSets(out, output);
    return 0;
}

int cmdComplete(const std::string& input, const CommonOpts& opts, const std::string& output,
                const std::string& scenario_path) {
    const ap::PipelineConfig cfg = loadConfig(opts);
    ap::CompletionConfig completion = cfg.completionConfig();
    ap::FeatureProvider provider;
    if (!scenario_path.empty()) {
        const ap::ScenarioSpec spec = ap::ScenarioSpec::fromJson(readFile(scenario_path));
        provider = ap::makeScenarioProvider(spec);
        completion.window.canvas_w = spec.canvas_w;
        completion.window.canvas_h = spec.canvas_h;
    }

    std::vector<ap::Track> tracks;
    ap::Rng rng(cfg.seed);
    for (const auto& v : ap::readPathSets(input)) {
        for (const auto& set : v.sets) {
            for (const ap::Track& track :
                 ap::tracksFromPathSet(set, v.video, cfg.trackBuildConfig())) {
                if (provider) {
                    // Initial detector from the track itself; negatives are
                    // provider-sampled distractors around each member box.
                    std::vector<ap::OnlineClassifier::Feature> pos, neg;
                    for (const auto& e : track.entries) {
                        if (e.color_hist.empty() || e.grad_hist.empty()) continue;
                        pos.push_back(ap::classifierFeature(e.color_hist, e.grad_hist));
                        for (const auto& b : ap::sampleNegativeBoxes(
                                 e.box, cfg.negatives_per_positive, cfg.negative_offset_frac,
                                 cfg.negative_max_iou, rng)) {
                            auto [color, grad] = provider(e.frame, b);
                            neg.push_back(ap::classifierFeature(color, grad));
                        }
                    }
                    if (!pos.empty() && !neg.empty()) {
                        ap::OnlineClassifier clf(pos.front().size(), cfg.classifier);
                        clf.fit(pos, neg);
                        tracks.push_back(
                            ap::completeTrack(track, completion, &clf, nullptr, &provider));
                        continue;
                    }
                }
                tracks.push_back(ap::completeTrack(track, completion));
            }
        }
    }
    ap::writeTracks(tracks, output);
    return 0;
}

int cmdEmit(const std::string& input, const CommonOpts& opts, const std::string& output) {
    const ap::PipelineConfig cfg = loadConfig(opts);
    ap::writeProposals(ap::emitProposals(ap::readTracks(input), cfg.emitConfig()), output);
    return 0;
}

int cmdEvaluate(const std::string& proposals_path, const std::string& gt_path,
                const CommonOpts& opts, std::optional<double> eta, const std::string& output,
                const std::string& csv_output) {
    const ap::PipelineConfig cfg = loadConfig(opts);
    const auto proposals = ap::readProposals(proposals_path);
    const auto gts = ap::readGroundTruth(gt_path);
    const ap::MetricsReport report =
        ap::evaluateProposals(proposals, gts, eta.value_or(cfg.eval_eta));
    if (!output.empty()) ap::writeMetricsJson(report, output);
    if (!csv_output.empty()) ap::writeMetricsCsv(report, csv_output);
    std::cout << ap::metricsToJson(report) << '\n';
    return 0;
}

int cmdRun(const std::string& input, const std::string& scenario_path, const std::string& gt_path,
           const CommonOpts& opts, const std::string& output, const std::string& metrics_output,
           const std::string& csv_output, const std::string& model_path, bool timings) {
    if (input.empty() == scenario_path.empty())
        throw std::invalid_argument("run needs exactly one of --input or --scenario");
    const ap::PipelineConfig cfg = loadConfig(opts);

    ap::PipelineInputs inputs;
    if (!scenario_path.empty()) {
        ap::ScenarioSpec spec = ap::ScenarioSpec::fromJson(readFile(scenario_path));
        if (opts.seed) spec.seed = *opts.seed;
        ap::Scenario scenario = ap::generateScenario(spec);
        inputs.videos.push_back(std::move(scenario.detections));
        inputs.ground_truth = std::move(scenario.ground_truth);
        inputs.provider = ap::makeScenarioProvider(spec);
        inputs.canvas_w = spec.canvas_w;
        inputs.canvas_h = spec.canvas_h;
    } else {
        inputs.videos = ap::readDetections(input);
    }
    if (!gt_path.empty()) inputs.ground_truth = ap::readGroundTruth(gt_path);

    std::optional<ModelPair> models;
    if (!model_path.empty()) {
        models = readModels(model_path);
        inputs.positive_model = &models->positive;
        inputs.negative_model = &models->negative;
    }

    const ap::PipelineResult result = ap::runPipeline(inputs, cfg);
    ap::writeProposals(result.proposals, output);
    if (result.metrics) {
        if (!metrics_output.empty()) ap::writeMetricsJson(*result.metrics, metrics_output);
        if (!csv_output.empty()) ap::writeMetricsCsv(*result.metrics, csv_output);
    }

    for (const auto& s : result.summaries)
        std::cout << s.video << ": " << s.detections << " detections, " << s.paths << " paths, "
                  << s.sets << " sets, " << s.proposals << " proposals\n";
    if (result.metrics)
        std::cout << "recall=" << result.metrics->recall << " abo=" << result.metrics->abo
                  << " mabo=" << result.metrics->mabo << '\n';
    if (timings)
        for (const auto& t : result.timings)
            std::cerr << "stage " << t.stage << ": " << t.seconds << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"action proposal pipeline"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "roll out a synthetic scenario");
    CommonOpts gen_opts;
    std::string gen_spec, gen_output, gen_gt_output;
    generate->add_option("--spec", gen_spec, "scenario spec JSON")->required();
    generate->add_option("--output", gen_output, "detections JSONL")->required();
    generate->add_option("--gt-output", gen_gt_output, "ground-truth JSONL");
    addCommon(generate, gen_opts);

    // score
    auto* score = app.add_subcommand("score", "attach actionness scores");
    CommonOpts score_opts;
    std::string score_input, score_output, score_model, score_pos, score_neg, score_model_out;
    bool score_fit = false;
    score->add_option("--input", score_input, "detections JSONL")->required();
    score->add_option("--output", score_output, "scored detections JSONL")->required();
    score->add_option("--model", score_model, "mixture model JSON");
    score->add_flag("--fit", score_fit, "fit mixtures from labeled files");
    score->add_option("--positives", score_pos, "positive-class detections JSONL");
    score->add_option("--negatives", score_neg, "negative-class detections JSONL");
    score->add_option("--model-output", score_model_out, "write fitted mixtures here");
    addCommon(score, score_opts);

    // search
    auto* search = app.add_subcommand("search", "forward/backward path search");
    CommonOpts search_opts;
    std::string search_input, search_output;
    search->add_option("--input", search_input, "scored detections JSONL")->required();
    search->add_option("--output", search_output, "paths JSONL")->required();
    addCommon(search, search_opts);

    // associate
    auto* associate = app.add_subcommand("associate", "group paths into per-actor sets");
    CommonOpts assoc_opts;
    std::string assoc_input, assoc_output;
    associate->add_option("--input", assoc_input, "paths JSONL")->required();
    associate->add_option("--output", assoc_output, "path sets JSONL")->required();
    addCommon(associate, assoc_opts);

    // complete
    auto* complete = app.add_subcommand("complete", "fill temporal gaps in tracks");
    CommonOpts complete_opts;
    std::string complete_input, complete_output, complete_scenario;
    complete->add_option("--input", complete_input, "path sets JSONL")->required();
    complete->add_option("--output", complete_output, "tracks JSONL")->required();
    complete->add_option("--scenario", complete_scenario,
                         "scenario spec JSON providing window features");
    addCommon(complete, complete_opts);

    // emit
    auto* emit = app.add_subcommand("emit", "duration-gate tracks into proposals");
    CommonOpts emit_opts;
    std::string emit_input, emit_output;
    emit->add_option("--input", emit_input, "tracks JSONL")->required();
    emit->add_option("--output", emit_output, "proposals JSONL")->required();
    addCommon(emit, emit_opts);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score proposals against ground truth");
    CommonOpts eval_opts;
    std::string eval_proposals, eval_gt, eval_output, eval_csv;
    std::optional<double> eval_eta;
    evaluate->add_option("--proposals", eval_proposals, "proposals JSONL")->required();
    evaluate->add_option("--gt", eval_gt, "ground-truth JSONL")->required();
    evaluate->add_option("--eta", eval_eta, "track IoU threshold");
    evaluate->add_option("--output", eval_output, "metrics JSON");
    evaluate->add_option("--csv", eval_csv, "metrics CSV");
    addCommon(evaluate, eval_opts);

    // run
    auto* run = app.add_subcommand("run", "end-to-end pipeline");
    CommonOpts run_opts;
    std::string run_input, run_scenario, run_gt, run_output, run_metrics, run_csv, run_model;
    bool run_timings = false;
    run->add_option("--input", run_input, "detections JSONL");
    run->add_option("--scenario", run_scenario, "scenario spec JSON (generated inline)");
    run->add_option("--gt", run_gt, "ground-truth JSONL");
    run->add_option("--output", run_output, "proposals JSONL")->required();
    run->add_option("--metrics", run_metrics, "metrics JSON");
    run->add_option("--csv", run_csv, "metrics CSV");
    run->add_option("--model", run_model, "mixture model JSON");
    run->add_flag("--timings", run_timings, "print stage timings to stderr");
    addCommon(run, run_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return cmdGenerate(gen_spec, gen_opts, gen_output, gen_gt_output);
        if (score->parsed())
            return cmdScore(score_input, score_opts, score_output, score_model, score_fit,
                            score_pos, score_neg, score_model_out);
        if (search->parsed()) return cmdSearch(search_input, search_opts, search_output);
        if (associate->parsed()) return cmdAssociate(assoc_input, assoc_opts, assoc_output);
        if (complete->parsed())
            return cmdComplete(complete_input, complete_opts, complete_output, complete_scenario);
        if (emit->parsed()) return cmdEmit(emit_input, emit_opts, emit_output);
        if (evaluate->parsed())
            return cmdEvaluate(eval_proposals, eval_gt, eval_opts, eval_eta, eval_output, eval_csv);
        if (run->parsed())
            return cmdRun(run_input, run_scenario, run_gt, run_opts, run_output, run_metrics,
                          run_csv, run_model, run_timings);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
