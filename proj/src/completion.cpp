// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/completion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "actionprop/rng.hpp"

namespace actionprop {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

OnlineClassifier::Feature classifierFeature(const FeatureHistogram& color,
                                            const FeatureHistogram& grad) {
    OnlineClassifier::Feature x;
    x.reserve(color.dim() + grad.dim());
    x.insert(x.end(), color.values().begin(), color.values().end());
    x.insert(x.end(), grad.values().begin(), grad.values().end());
    return x;
}

OnlineClassifier::OnlineClassifier(std::size_t feature_dim, ClassifierOptions options)
    : weights_(feature_dim, 0.0), options_(options) {
    if (feature_dim == 0) throw std::invalid_argument("classifier feature dimension is zero");
    if (options_.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (options_.epochs < 1 || options_.update_epochs < 1)
        throw std::invalid_argument("epoch counts must be positive");
}

void OnlineClassifier::pass(const std::vector<const Feature*>& xs, const std::vector<int>& ys,
                            int epochs, std::uint64_t shuffle_seed) {
    const std::size_t n = xs.size();
    if (n == 0) return;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    Rng rng(shuffle_seed);
    const double lr = options_.learning_rate;
    const double decay = std::max(0.0, 1.0 - lr * options_.regularization);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniformInt(0, static_cast<int>(i)));
            std::swap(order[i], order[j]);
        }
        for (std::size_t idx : order) {
            const Feature& x = *xs[idx];
            if (x.size() != weights_.size())
                throw std::invalid_argument("classifier feature dimension mismatch");
            const double y = ys[idx];
            const double margin = y * (dot(weights_, x) + bias_);
            for (auto& w : weights_) w *= decay;
            if (margin < 1.0) {
                for (std::size_t d = 0; d < weights_.size(); ++d) weights_[d] += lr * y * x[d];
                bias_ += lr * y;
            }
        }
    }
}

void OnlineClassifier::fit(const std::vector<Feature>& positives,
                           const std::vector<Feature>& negatives) {
    std::vector<const Feature*> xs;
    std::vector<int> ys;
    xs.reserve(positives.size() + negatives.size());
    for (const auto& x : positives) { xs.push_back(&x); ys.push_back(1); }
    for (const auto& x : negatives) { xs.push_back(&x); ys.push_back(-1); }
    pass(xs, ys, options_.epochs, options_.seed);
    positive_count_ += positives.size();
    negative_count_ += negatives.size();
}

void OnlineClassifier::update(const std::vector<Feature>& positives,
                              const std::vector<Feature>& negatives) {
    std::vector<const Feature*> xs;
    std::vector<int> ys;
    xs.reserve(positives.size() + negatives.size());
    for (const auto& x : positives) { xs.push_back(&x); ys.push_back(1); }
    for (const auto& x : negatives) { xs.push_back(&x); ys.push_back(-1); }
    // Distinct deterministic shuffle per incremental batch.
    pass(xs, ys, options_.update_epochs,
         options_.seed + 0x9e3779b97f4a7c15ull * (positive_count_ + negative_count_ + 1));
    positive_count_ += positives.size();
    negative_count_ += negatives.size();
}

double OnlineClassifier::score(const Feature& x) const {
    if (x.size() != weights_.size())
        throw std::invalid_argument("classifier feature dimension mismatch");
    return dot(weights_, x) + bias_;
}

double OnlineClassifier::score(const FeatureHistogram& color, const FeatureHistogram& grad) const {
    return score(classifierFeature(color, grad));
}

OnlineClassifier trainClassifier(const std::vector<Detection>& positives,
                                 const std::vector<Detection>& negatives,
                                 const ClassifierOptions& options) {
    if (positives.empty() || negatives.empty())
        throw std::invalid_argument("classifier training requires both classes");
    std::vector<OnlineClassifier::Feature> pos, neg;
    pos.reserve(positives.size());
    neg.reserve(negatives.size());
    for (const auto& d : positives) pos.push_back(classifierFeature(d.color_hist, d.grad_hist));
    for (const auto& d : negatives) neg.push_back(classifierFeature(d.color_hist, d.grad_hist));
    const std::size_t fdim = pos.front().size();
    for (const auto& x : pos)
        if (x.size() != fdim) throw std::invalid_argument("classifier feature dimension mismatch");
    for (const auto& x : neg)
        if (x.size() != fdim) throw std::invalid_argument("classifier feature dimension mismatch");
    OnlineClassifier clf(fdim, options);
    clf.fit(pos, neg);
    return clf;
}

bool Track::contiguous() const {
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].frame != entries[i - 1].frame + 1) return false;
    return !entries.empty();
}

std::vector<BoundingBox> generateSearchWindows(const BoundingBox& prev, double dx, double dy,
                                               const WindowConfig& cfg) {
    if (!prev.valid()) throw std::invalid_argument("invalid box for window generation");
    if (cfg.region_scale < 1.0) throw std::invalid_argument("region_scale must be >= 1");

    const double cx = prev.cx + dx;
    const double cy = prev.cy + dy;
    double rl = cx - 0.5 * cfg.region_scale * prev.w;
    double rr = cx + 0.5 * cfg.region_scale * prev.w;
    double rt = cy - 0.5 * cfg.region_scale * prev.h;
    double rb = cy + 0.5 * cfg.region_scale * prev.h;
    if (cfg.canvas_w) { rl = std::max(rl, 0.0); rr = std::min(rr, *cfg.canvas_w); }
    if (cfg.canvas_h) { rt = std::max(rt, 0.0); rb = std::min(rb, *cfg.canvas_h); }
    if (rl >= rr || rt >= rb) return {};

    const double stride = std::max(1.0, std::floor(cfg.stride_frac * prev.w));
    const double eps = 1e-9;
    std::vector<BoundingBox> out;
    for (double s : cfg.scales) {
        const double ww = s * prev.w;
        const double hh = s * prev.h;
        const double xmin = rl + 0.5 * ww, xmax = rr - 0.5 * ww;
        const double ymin = rt + 0.5 * hh, ymax = rb - 0.5 * hh;
        if (xmin > xmax + eps || ymin > ymax + eps) continue;
        const auto kxmin = static_cast<long>(std::ceil((xmin - cx) / stride - eps));
        const auto kxmax = static_cast<long>(std::floor((xmax - cx) / stride + eps));
        const auto kymin = static_cast<long>(std::ceil((ymin - cy) / stride - eps));
        const auto kymax = static_cast<long>(std::floor((ymax - cy) / stride + eps));
        if (kxmin > kxmax || kymin > kymax) continue;
        for (long ky = kymin; ky <= kymax; ++ky) {
            for (long kx = kxmin; kx <= kxmax; ++kx) {
                BoundingBox b;
                b.frame = prev.frame;
                b.cx = cx + static_cast<double>(kx) * stride;
                b.cy = cy + static_cast<double>(ky) * stride;
                b.w = ww;
                b.h = hh;
                out.push_back(b);
            }
        }
    }
    return out;
}

std::vector<BoundingBox> sampleNegativeBoxes(const BoundingBox& anchor, int count,
                                             double offset_frac, double max_iou, Rng& rng) {
    std::vector<BoundingBox> out;
    for (int i = 0; i < count; ++i) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            BoundingBox cand = anchor;
            cand.cx = anchor.cx + rng.uniform(-offset_frac, offset_frac) * anchor.w;
            cand.cy = anchor.cy + rng.uniform(-offset_frac, offset_frac) * anchor.h;
            const double s = rng.uniform(0.8, 1.2);
            cand.w = anchor.w * s;
            cand.h = anchor.h * s;
            if (iou(cand, anchor) < max_iou) {
                out.push_back(cand);
                break;
            }
        }
    }
    return out;
}

namespace {

struct StepContext {
    const CompletionConfig* cfg;
    OnlineClassifier* classifier;
    const ShiftMap* shifts;
    const FeatureProvider* provider;
    Rng* rng;
};

std::pair<double, double> shiftFor(const TrackEntry& e, const ShiftMap* shifts) {
    if (shifts) {
        auto it = shifts->find(e.frame);
        if (it != shifts->end()) return it->second;
    }
    return {e.shift_dx, e.shift_dy};
}

std::vector<OnlineClassifier::Feature> sampleNegatives(const BoundingBox& anchor, int frame,
                                                       const StepContext& ctx) {
    std::vector<OnlineClassifier::Feature> out;
    for (const auto& cand :
         sampleNegativeBoxes(anchor, ctx.cfg->negatives_per_positive,
                             ctx.cfg->negative_offset_frac, ctx.cfg->negative_max_iou, *ctx.rng)) {
        auto [color, grad] = (*ctx.provider)(frame, cand);
        out.push_back(classifierFeature(color, grad));
    }
    return out;
}

/// Advance one frame from `cur` to `target_frame`. `direction` is +1 for
/// forward fill and -1 when walking back from a later anchor.
TrackEntry stepOnce(const TrackEntry& cur, int target_frame, int direction,
                    const StepContext& ctx) {
    auto [sdx, sdy] = shiftFor(cur, ctx.shifts);
    const double dx = direction * sdx;
    const double dy = direction * sdy;

    BoundingBox shifted = cur.box;
    shifted.cx += dx;
    shifted.cy += dy;
    shifted.frame = target_frame;

    BoundingBox chosen = shifted;
    if (ctx.classifier != nullptr && ctx.provider != nullptr) {
        const auto windows = generateSearchWindows(cur.box, dx, dy, ctx.cfg->window);
        double best_score = -std::numeric_limits<double>::infinity();
        double best_dist = std::numeric_limits<double>::infinity();
        double best_scale = std::numeric_limits<double>::infinity();
        bool found = false;
        for (const auto& win : windows) {
            auto [color, grad] = (*ctx.provider)(target_frame, win);
            const double sc = ctx.classifier->score(color, grad);
            const double dist = std::hypot(win.cx - shifted.cx, win.cy - shifted.cy);
            const double scale_dist = std::abs(win.w / cur.box.w - 1.0);
            // Ties fall back to the flow-shifted identity window.
            const bool better =
                sc > best_score ||
                (sc == best_score &&
                 (dist < best_dist || (dist == best_dist && scale_dist < best_scale)));
            if (better) {
                best_score = sc;
                best_dist = dist;
                best_scale = scale_dist;
                chosen = win;
                chosen.frame = target_frame;
                found = true;
            }
        }
        if (found) {
            auto [color, grad] = (*ctx.provider)(target_frame, chosen);
            std::vector<OnlineClassifier::Feature> pos{classifierFeature(color, grad)};
            ctx.classifier->update(pos, sampleNegatives(chosen, target_frame, ctx));
        }
    }

    TrackEntry e;
    e.frame = target_frame;
    e.box = chosen;
    e.box.frame = target_frame;
    e.source = BoxSource::kCompleted;
    if (ctx.provider != nullptr) {
        auto [color, grad] = (*ctx.provider)(target_frame, e.box);
        e.color_hist = color;
        e.grad_hist = grad;
    }
    e.shift_dx = sdx;
    e.shift_dy = sdy;
    e.key = DetectionKey{target_frame, -1};
    return e;
}

}  // namespace

Track completeTrack(const Track& track, const CompletionConfig& cfg, OnlineClassifier* classifier,
                    const ShiftMap* shifts, const FeatureProvider* provider) {
    Track result;
    result.video = track.video;
    result.score = track.score;
    if (track.entries.empty()) return result;
    for (std::size_t i = 1; i < track.entries.size(); ++i)
        if (track.entries[i].frame <= track.entries[i - 1].frame)
            throw std::invalid_argument("track frames must be strictly increasing");
    if (cfg.max_gap < 0) throw std::invalid_argument("max_gap must be non-negative");

    Rng rng(cfg.seed);
    StepContext ctx{&cfg, classifier, shifts, provider, &rng};

    // Leading extension toward an earlier requested span start.
    std::vector<TrackEntry> lead;
    if (cfg.span_start && *cfg.span_start < track.entries.front().frame) {
        const int gap = track.entries.front().frame - *cfg.span_start;
        if (gap > cfg.max_gap) {
            ++result.gaps_left_open;
        } else {
            TrackEntry cur = track.entries.front();
            for (int f = cur.frame - 1; f >= *cfg.span_start; --f) {
                cur = stepOnce(cur, f, -1, ctx);
                lead.push_back(cur);
            }
        }
    }
    result.entries.assign(lead.rbegin(), lead.rend());

    result.entries.push_back(track.entries.front());
    for (std::size_t i = 1; i < track.entries.size(); ++i) {
        const int gap = track.entries[i].frame - track.entries[i - 1].frame - 1;
        if (gap > 0) {
            if (gap > cfg.max_gap) {
                ++result.gaps_left_open;
            } else {
                TrackEntry cur = track.entries[i - 1];
                for (int f = cur.frame + 1; f < track.entries[i].frame; ++f) {
                    cur = stepOnce(cur, f, 1, ctx);
                    result.entries.push_back(cur);
                }
            }
        }
        result.entries.push_back(track.entries[i]);
    }

    if (cfg.span_end && *cfg.span_end > track.entries.back().frame) {
        const int gap = *cfg.span_end - track.entries.back().frame;
        if (gap > cfg.max_gap) {
            ++result.gaps_left_open;
        } else {
            TrackEntry cur = track.entries.back();
            for (int f = cur.frame + 1; f <= *cfg.span_end; ++f) {
                cur = stepOnce(cur, f, 1, ctx);
                result.entries.push_back(cur);
            }
        }
    }
    return result;
}

namespace {

struct SeedCenter {
    std::vector<double> color;
    std::vector<double> grad;
};

SeedCenter pathFeatureCenter(const ActionPath& p) {
    if (p.boxes.empty()) throw std::invalid_argument("empty path in set");
    SeedCenter c;
    c.color.assign(p.boxes.front().color_hist.dim(), 0.0);
    c.grad.assign(p.boxes.front().grad_hist.dim(), 0.0);
    for (const auto& d : p.boxes) {
        if (d.color_hist.dim() != c.color.size() || d.grad_hist.dim() != c.grad.size())
            throw std::invalid_argument("feature dimension mismatch within path");
        for (std::size_t i = 0; i < c.color.size(); ++i) c.color[i] += d.color_hist[i];
        for (std::size_t i = 0; i < c.grad.size(); ++i) c.grad[i] += d.grad_hist[i];
    }
    const auto n = static_cast<double>(p.boxes.size());
    for (auto& v : c.color) v /= n;
    for (auto& v : c.grad) v /= n;
    return c;
}

double centerDistance(const Detection& d, const SeedCenter& c, double lambda_a) {
    double dc = 0.0, dg = 0.0;
    for (std::size_t i = 0; i < c.color.size(); ++i) {
        const double diff = d.color_hist[i] - c.color[i];
        dc += diff * diff;
    }
    for (std::size_t i = 0; i < c.grad.size(); ++i) {
        const double diff = d.grad_hist[i] - c.grad[i];
        dg += diff * diff;
    }
    return std::sqrt(dc) + lambda_a * std::sqrt(dg);
}

TrackEntry entryFrom(const Detection& d) {
    TrackEntry e;
    e.frame = d.box.frame;
    e.box = d.box;
    e.source = BoxSource::kDetected;
    e.color_hist = d.color_hist;
    e.grad_hist = d.grad_hist;
    e.shift_dx = d.shift_dx;
    e.shift_dy = d.shift_dy;
    e.key = d.key();
    return e;
}

}  // namespace

std::vector<Track> tracksFromPathSet(const PathSet& set, const std::string& video,
                                     const TrackBuildConfig& cfg) {
    if (set.paths.empty()) throw std::invalid_argument("empty path set");

    // Strongest path first; it seeds the first cluster.
    std::vector<std::size_t> order(set.paths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set.paths[a].score > set.paths[b].score;
    });

    std::vector<SeedCenter> centers(set.paths.size());
    for (std::size_t i = 0; i < set.paths.size(); ++i)
        centers[i] = pathFeatureCenter(set.paths[i]);
    auto centerGap = [&](const SeedCenter& a, const SeedCenter& b) {
        double dc = 0.0, dg = 0.0;
        for (std::size_t i = 0; i < a.color.size() && i < b.color.size(); ++i) {
            const double diff = a.color[i] - b.color[i];
            dc += diff * diff;
        }
        for (std::size_t i = 0; i < a.grad.size() && i < b.grad.size(); ++i) {
            const double diff = a.grad[i] - b.grad[i];
            dg += diff * diff;
        }
        return std::sqrt(dc) + cfg.lambda_a * std::sqrt(dg);
    };

    std::vector<std::vector<std::size_t>> clusters;
    std::vector<bool> assigned(set.paths.size(), false);
    for (std::size_t si = 0; si < order.size(); ++si) {
        const std::size_t seed = order[si];
        if (assigned[seed]) continue;
        std::vector<std::size_t> cluster{seed};
        assigned[seed] = true;
        if (cfg.appearance_gate > 0.0) {
            for (std::size_t oj = si + 1; oj < order.size(); ++oj) {
                const std::size_t cand = order[oj];
                if (assigned[cand]) continue;
                if (centerGap(centers[seed], centers[cand]) <= cfg.appearance_gate) {
                    cluster.push_back(cand);
                    assigned[cand] = true;
                }
            }
        } else {
            for (std::size_t oj = si + 1; oj < order.size(); ++oj) {
                cluster.push_back(order[oj]);
                assigned[order[oj]] = true;
            }
        }
        clusters.push_back(std::move(cluster));
    }

    struct Pick {
        const Detection* det = nullptr;
        double dist = 0.0;
        std::size_t rank = 0;
    };
    std::vector<Track> out;
    for (const auto& cluster : clusters) {
        const SeedCenter& center = centers[cluster.front()];
        std::map<int, Pick> per_frame;
        for (std::size_t rank = 0; rank < cluster.size(); ++rank) {
            for (const auto& d : set.paths[cluster[rank]].boxes) {
                const double dist = centerDistance(d, center, cfg.lambda_a);
                auto [it, inserted] = per_frame.try_emplace(d.box.frame, Pick{&d, dist, rank});
                if (inserted) continue;
                Pick& cur = it->second;
                const bool better =
                    dist < cur.dist ||
                    (dist == cur.dist &&
                     (rank < cur.rank || (rank == cur.rank && d.key() < cur.det->key())));
                if (better) cur = Pick{&d, dist, rank};
            }
        }
        Track t;
        t.video = video;
        for (const auto& [frame, pick] : per_frame) {
            t.entries.push_back(entryFrom(*pick.det));
            t.score += pick.det->actionness.value_or(pick.det->human_score);
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace actionprop
