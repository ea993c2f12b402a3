// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/pipeline.hpp"

#include <chrono>
#include <map>
#include <set>
#include <stdexcept>

#include "actionprop/actionness.hpp"
#include "actionprop/association.hpp"
#include "actionprop/path_search.hpp"
#include "actionprop/rng.hpp"

namespace actionprop {

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& out) : out_(out) {}

    template <typename Fn>
    auto run(const std::string& stage, Fn&& fn) {
        const auto start = std::chrono::steady_clock::now();
        try {
            auto finish = [&] {
                const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
                add(stage, dt.count());
            };
            if constexpr (std::is_void_v<decltype(fn())>) {
                fn();
                finish();
            } else {
                auto result = fn();
                finish();
                return result;
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(stage + ": " + e.what());
        } catch (const std::exception& e) {
            throw std::runtime_error(stage + ": " + e.what());
        }
    }

private:
    void add(const std::string& stage, double seconds) {
        for (auto& t : out_) {
            if (t.stage == stage) {
                t.seconds += seconds;
                return;
            }
        }
        out_.push_back({stage, seconds});
    }

    std::vector<StageTiming>& out_;
};

/// Initial detector for one track: positives are the track's own boxes,
/// negatives are sampled distractors around them plus detections the
/// association left out (other actors, clutter).
std::optional<OnlineClassifier> trainTrackClassifier(const Track& track,
                                                     const VideoDetections& video,
                                                     const PipelineConfig& cfg,
                                                     const FeatureProvider& provider, Rng& rng) {
    std::vector<OnlineClassifier::Feature> pos, neg;
    std::set<DetectionKey> member_keys;
    for (const auto& e : track.entries) {
        if (e.color_hist.empty() || e.grad_hist.empty()) continue;
        pos.push_back(classifierFeature(e.color_hist, e.grad_hist));
        member_keys.insert(e.key);
    }
    if (pos.empty()) return std::nullopt;

    for (const auto& e : track.entries) {
        for (const auto& b :
             sampleNegativeBoxes(e.box, cfg.negatives_per_positive, cfg.negative_offset_frac,
                                 cfg.negative_max_iou, rng)) {
            auto [color, grad] = provider(e.frame, b);
            neg.push_back(classifierFeature(color, grad));
        }
    }
    int real_negatives = 0;
    for (const auto& frame : video.frames) {
        for (const auto& d : frame) {
            if (real_negatives >= cfg.initial_negative_cap) break;
            if (member_keys.count(d.key()) > 0) continue;
            if (d.color_hist.dim() + d.grad_hist.dim() != pos.front().size()) continue;
            neg.push_back(classifierFeature(d.color_hist, d.grad_hist));
            ++real_negatives;
        }
    }
    if (neg.empty()) return std::nullopt;

    OnlineClassifier clf(pos.front().size(), cfg.classifier);
    clf.fit(pos, neg);
    return clf;
}

}  // namespace

PipelineResult runPipeline(const PipelineInputs& inputs, const PipelineConfig& config) {
    config.validate();
    PipelineResult result;
    StageClock clock(result.timings);

    std::vector<VideoDetections> videos = inputs.videos;
    const bool has_provider = static_cast<bool>(inputs.provider);

    CompletionConfig completion_cfg = config.completionConfig();
    completion_cfg.window.canvas_w = inputs.canvas_w;
    completion_cfg.window.canvas_h = inputs.canvas_h;

    for (auto& video : videos) {
        VideoSummary summary;
        summary.video = video.video;
        summary.detections = video.totalDetections();

        clock.run("score", [&] {
            scoreDetections(video, inputs.positive_model, inputs.negative_model, config.lambda_p);
        });

        auto paths = clock.run("search",
                               [&] { return forwardBackwardSearch(video, config.searchConfig()); });
        summary.paths = paths.size();
        if (paths.empty()) {
            result.summaries.push_back(summary);
            continue;
        }

        auto sets = clock.run("associate",
                              [&] { return extractAllPathSets(paths, config.assocConfig()); });
        summary.sets = sets.size();

        auto tracks = clock.run("complete", [&] {
            std::vector<Track> out;
            Rng rng(config.seed);
            for (const auto& set : sets) {
                for (const Track& track :
                     tracksFromPathSet(set, video.video, config.trackBuildConfig())) {
                    if (has_provider) {
                        auto classifier =
                            trainTrackClassifier(track, video, config, inputs.provider, rng);
                        out.push_back(completeTrack(track, completion_cfg,
                                                    classifier ? &*classifier : nullptr, nullptr,
                                                    &inputs.provider));
                    } else {
                        out.push_back(completeTrack(track, completion_cfg));
                    }
                }
            }
            return out;
        });
        summary.tracks = tracks.size();

        auto proposals =
            clock.run("emit", [&] { return emitProposals(tracks, config.emitConfig()); });
        summary.proposals = proposals.size();
        result.proposals.insert(result.proposals.end(), proposals.begin(), proposals.end());
        result.summaries.push_back(summary);
    }

    if (!inputs.ground_truth.empty()) {
        result.metrics = clock.run("evaluate", [&] {
            return evaluateProposals(result.proposals, inputs.ground_truth, config.eval_eta);
        });
    }
    return result;
}

}  // namespace actionprop
