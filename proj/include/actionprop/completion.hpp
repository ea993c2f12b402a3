// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actionprop/association.hpp"
#include "actionprop/core.hpp"
#include "actionprop/rng.hpp"

namespace actionprop {

/// Supplies (color, gradient) histograms for an arbitrary box, e.g. from a
/// synthetic scene model or a real feature extractor. Completion scans
/// candidate windows it has no ingested features for; without a provider it
/// falls back to pure flow-shift completion.
using FeatureProvider =
    std::function<std::pair<FeatureHistogram, FeatureHistogram>(int frame, const BoundingBox&)>;

struct ClassifierOptions {
    double learning_rate = 0.1;
    double regularization = 1e-3;
    int epochs = 50;         // passes over the initial training set
    int update_epochs = 5;   // passes over each incremental batch
    std::uint64_t seed = 1;
};

/// Linear hinge-loss classifier over concatenated color+gradient histograms,
/// trained by stochastic margin-violation updates.
class OnlineClassifier {
public:
    using Feature = std::vector<double>;

    OnlineClassifier(std::size_t feature_dim, ClassifierOptions options = {});

    void fit(const std::vector<Feature>& positives, const std::vector<Feature>& negatives);
    void update(const std::vector<Feature>& positives, const std::vector<Feature>& negatives);

    double score(const Feature& x) const;
    double score(const FeatureHistogram& color, const FeatureHistogram& grad) const;

    std::size_t featureDim() const { return weights_.size(); }
    std::size_t positiveCount() const { return positive_count_; }
    std::size_t negativeCount() const { return negative_count_; }

private:
    void pass(const std::vector<const Feature*>& xs, const std::vector<int>& ys, int epochs,
              std::uint64_t shuffle_seed);

    std::vector<double> weights_;
    double bias_ = 0.0;
    ClassifierOptions options_;
    std::size_t positive_count_ = 0;
    std::size_t negative_count_ = 0;
};

OnlineClassifier::Feature classifierFeature(const FeatureHistogram& color,
                                            const FeatureHistogram& grad);

/// Batch-train a detector from detection records.
/// Throws std::invalid_argument when either class is empty.
OnlineClassifier trainClassifier(const std::vector<Detection>& positives,
                                 const std::vector<Detection>& negatives,
                                 const ClassifierOptions& options = {});

enum class BoxSource { kDetected, kCompleted };

struct TrackEntry {
    int frame = 0;
    BoundingBox box;
    BoxSource source = BoxSource::kDetected;
    FeatureHistogram color_hist;  // may be empty for completed boxes
    FeatureHistogram grad_hist;
    double shift_dx = 0.0;
    double shift_dy = 0.0;
    DetectionKey key;  // meaningful for detected entries only
};

/// One actor's box sequence; frames strictly increasing, contiguous after a
/// successful completion pass.
struct Track {
    std::string video;
    std::vector<TrackEntry> entries;
    double score = 0.0;       // summed actionness of the detected members
    int gaps_left_open = 0;

    bool empty() const { return entries.empty(); }
    int firstFrame() const { return entries.front().frame; }
    int lastFrame() const { return entries.back().frame; }
    int duration() const { return empty() ? 0 : lastFrame() - firstFrame() + 1; }
    bool contiguous() const;
};

struct WindowConfig {
    double region_scale = 1.5;  // search region growth around the shifted box
    std::vector<double> scales = {0.8, 0.9, 1.0, 1.1, 1.2};
    double stride_frac = 0.1;   // grid stride as a fraction of box width
    std::optional<double> canvas_w;
    std::optional<double> canvas_h;
};

/// Scan windows inside the grown search region around prev shifted by
/// (dx, dy): a center grid anchored on the shifted box at stride
/// max(1, floor(stride_frac * w)), repeated per scale. The identity window is
/// always a grid point when it fits.
std::vector<BoundingBox> generateSearchWindows(const BoundingBox& prev, double dx, double dy,
                                               const WindowConfig& cfg);

struct CompletionConfig {
    int max_gap = 30;  // gaps longer than this stay open
    WindowConfig window;
    int negatives_per_positive = 8;
    double negative_max_iou = 0.3;
    double negative_offset_frac = 0.5;
    std::uint64_t seed = 7;
    // Optional target span; a track starting after span_start (or ending
    // before span_end) is extended by the same procedure run backward
    // (forward) from its edge.
    std::optional<int> span_start;
    std::optional<int> span_end;
};

/// Per-frame flow shift overrides (frame t -> shift toward t+1).
using ShiftMap = std::map<int, std::pair<double, double>>;

/// Up to `count` jittered distractor boxes around the anchor (center offsets
/// within +-offset_frac of the extent, size factor in [0.8, 1.2]) whose IoU
/// with the anchor stays below max_iou.
std::vector<BoundingBox> sampleNegativeBoxes(const BoundingBox& anchor, int count,
                                             double offset_frac, double max_iou, Rng& rng);

/// Fill temporal gaps frame by frame. Next to each known box the best scan
/// window under the classifier becomes the completed box and is fed back as
/// a positive (with sampled negatives around it). Without classifier or
/// provider the flow-shifted box itself is used. Detected entries are never
/// modified; gaps longer than max_gap are left open and counted.
Track completeTrack(const Track& track, const CompletionConfig& cfg,
                    OnlineClassifier* classifier = nullptr, const ShiftMap* shifts = nullptr,
                    const FeatureProvider* provider = nullptr);

struct TrackBuildConfig {
    double lambda_a = 1.0;
    // Paths whose feature center strays farther than this from a cluster
    // seed start their own cluster. <= 0 disables clustering (single track).
    double appearance_gate = 0.5;
};

/// Flatten a path set into tracks, one per appearance cluster of member
/// paths: the strongest unassigned path seeds a cluster, paths within the
/// gate of its feature center join, and the leftovers seed the next cluster.
/// Within a cluster at most one box survives per frame (appearance closest
/// to the cluster seed's center). Tracks come out strongest-seed first.
std::vector<Track> tracksFromPathSet(const PathSet& set, const std::string& video,
                                     const TrackBuildConfig& cfg);

}  // namespace actionprop
