// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "actionprop/rng.hpp"

namespace actionprop {

namespace {

constexpr std::size_t kDefaultHistDim = 8;

void validate(const ScenarioSpec& spec) {
    if (spec.frames < 1) throw std::invalid_argument("scenario needs at least one frame");
    if (spec.canvas_w <= 0.0 || spec.canvas_h <= 0.0)
        throw std::invalid_argument("canvas dimensions must be positive");
    const auto& n = spec.noise;
    if (n.dropout < 0.0 || n.dropout > 1.0)
        throw std::invalid_argument("dropout must be a probability");
    if (n.center_jitter < 0.0 || n.scale_jitter < 0.0 || n.score_noise < 0.0 ||
        n.appearance_noise < 0.0 || n.clutter_per_frame < 0)
        throw std::invalid_argument("noise magnitudes must be non-negative");
    for (const auto& a : spec.actors) {
        if (!(a.start.w > 0.0 && a.start.h > 0.0))
            throw std::invalid_argument("actor start box must have positive size");
        if (a.motion != "linear" && a.motion != "sinusoidal")
            throw std::invalid_argument("unknown motion model: " + a.motion);
        if (a.motion == "sinusoidal" && a.period <= 0.0)
            throw std::invalid_argument("sinusoidal period must be positive");
        const int end = a.end_frame < 0 ? spec.frames - 1 : a.end_frame;
        if (a.start_frame < 0 || a.start_frame > end || end >= spec.frames)
            throw std::invalid_argument("actor span outside scenario frames");
        if (a.human_score < 0.0 || a.human_score > 1.0)
            throw std::invalid_argument("human_score must lie in [0,1]");
        for (const auto* proto : {&a.motion_proto, &a.color_proto, &a.grad_proto})
            for (double v : *proto)
                if (v < 0.0) throw std::invalid_argument("prototype bins must be non-negative");
    }
}

int actorEnd(const ActorSpec& a, int frames) { return a.end_frame < 0 ? frames - 1 : a.end_frame; }

bool inForcedGap(const ActorSpec& a, int frame) {
    return std::any_of(a.forced_gaps.begin(), a.forced_gaps.end(),
                       [frame](const auto& g) { return frame >= g.first && frame <= g.second; });
}

std::vector<double> protoOr(const std::vector<double>& proto, std::size_t fallback_dim) {
    if (!proto.empty()) return proto;
    return std::vector<double>(fallback_dim, 1.0);
}

FeatureHistogram noisyHistogram(const std::vector<double>& proto, double sigma, Rng& rng) {
    std::vector<double> v = proto;
    if (sigma > 0.0) {
        for (auto& x : v) x = std::max(0.0, x + rng.normal(0.0, sigma));
        double mass = 0.0;
        for (double x : v) mass += x;
        if (mass <= 0.0) v = proto;  // noise wiped the histogram; keep the prototype
    }
    return FeatureHistogram(v);
}

}  // namespace

BoundingBox ActorSpec::boxAt(int frame) const {
    const double t = static_cast<double>(frame - start_frame);
    BoundingBox b = start;
    b.frame = frame;
    b.cx = start.cx + vx * t;
    b.cy = start.cy + vy * t;
    if (motion == "sinusoidal") {
        const double phase = 2.0 * std::numbers::pi * t / period;
        b.cx += amp_x * std::sin(phase);
        b.cy += amp_y * std::sin(phase);
    }
    const double growth = std::pow(1.0 + size_drift, t);
    b.w = start.w * growth;
    b.h = start.h * growth;
    return b;
}

Scenario generateScenario(const ScenarioSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);

    std::size_t hist_dim = kDefaultHistDim;
    for (const auto& a : spec.actors) {
        if (!a.motion_proto.empty()) { hist_dim = a.motion_proto.size(); break; }
        if (!a.color_proto.empty()) { hist_dim = a.color_proto.size(); break; }
    }

    Scenario out;
    out.canvas_w = spec.canvas_w;
    out.canvas_h = spec.canvas_h;
    out.detections.video = spec.video;
    out.detections.frames.resize(static_cast<std::size_t>(spec.frames));

    for (const auto& a : spec.actors) {
        GroundTruthTrack g;
        g.video = spec.video;
        g.label = a.label;
        g.start_frame = a.start_frame;
        for (int f = a.start_frame; f <= actorEnd(a, spec.frames); ++f) g.boxes.push_back(a.boxAt(f));
        out.ground_truth.push_back(std::move(g));
    }

    for (int f = 0; f < spec.frames; ++f) {
        auto& frame_dets = out.detections.frames[static_cast<std::size_t>(f)];
        for (const auto& a : spec.actors) {
            if (f < a.start_frame || f > actorEnd(a, spec.frames)) continue;
            if (inForcedGap(a, f)) continue;
            if (spec.noise.dropout > 0.0 && rng.uniform() < spec.noise.dropout) continue;

            const BoundingBox gt = a.boxAt(f);
            Detection d;
            d.box = gt;
            if (spec.noise.center_jitter > 0.0) {
                d.box.cx += rng.normal(0.0, spec.noise.center_jitter);
                d.box.cy += rng.normal(0.0, spec.noise.center_jitter);
            }
            if (spec.noise.scale_jitter > 0.0) {
                const double s = std::max(0.1, 1.0 + rng.normal(0.0, spec.noise.scale_jitter));
                d.box.w *= s;
                d.box.h *= s;
            }
            d.index = static_cast<int>(frame_dets.size());
            d.human_score = a.human_score;
            if (spec.noise.score_noise > 0.0)
                d.human_score =
                    std::clamp(a.human_score + rng.normal(0.0, spec.noise.score_noise), 0.0, 1.0);
            d.motion_hist =
                noisyHistogram(protoOr(a.motion_proto, hist_dim), spec.noise.appearance_noise, rng);
            d.color_hist =
                noisyHistogram(protoOr(a.color_proto, hist_dim), spec.noise.appearance_noise, rng);
            d.grad_hist =
                noisyHistogram(protoOr(a.grad_proto, hist_dim), spec.noise.appearance_noise, rng);
            if (f < actorEnd(a, spec.frames)) {
                const BoundingBox next = a.boxAt(f + 1);
                d.shift_dx = next.cx - gt.cx;
                d.shift_dy = next.cy - gt.cy;
            }
            frame_dets.push_back(std::move(d));
        }
        for (int c = 0; c < spec.noise.clutter_per_frame; ++c) {
            Detection d;
            d.box.frame = f;
            d.box.cx = rng.uniform(0.0, spec.canvas_w);
            d.box.cy = rng.uniform(0.0, spec.canvas_h);
            d.box.w = rng.uniform(10.0, 60.0);
            d.box.h = rng.uniform(10.0, 60.0);
            d.index = static_cast<int>(frame_dets.size());
            d.human_score = rng.uniform(0.0, 0.3);
            std::vector<double> mh(hist_dim), ch(hist_dim), gh(hist_dim);
            for (auto& v : mh) v = rng.uniform(0.05, 1.0);
            for (auto& v : ch) v = rng.uniform(0.05, 1.0);
            for (auto& v : gh) v = rng.uniform(0.05, 1.0);
            d.motion_hist = FeatureHistogram(mh);
            d.color_hist = FeatureHistogram(ch);
            d.grad_hist = FeatureHistogram(gh);
            frame_dets.push_back(std::move(d));
        }
    }
    return out;
}

FeatureProvider makeScenarioProvider(const ScenarioSpec& spec) {
    validate(spec);
    std::size_t hist_dim = kDefaultHistDim;
    for (const auto& a : spec.actors) {
        if (!a.color_proto.empty()) { hist_dim = a.color_proto.size(); break; }
        if (!a.motion_proto.empty()) { hist_dim = a.motion_proto.size(); break; }
    }
    struct ActorProto {
        ActorSpec actor;
        std::vector<double> color, grad;
        int end;
    };
    auto protos = std::make_shared<std::vector<ActorProto>>();
    for (const auto& a : spec.actors) {
        ActorProto p{a, protoOr(a.color_proto, hist_dim), protoOr(a.grad_proto, hist_dim),
                     actorEnd(a, spec.frames)};
        protos->push_back(std::move(p));
    }

    return [protos, hist_dim](int frame, const BoundingBox& query)
               -> std::pair<FeatureHistogram, FeatureHistogram> {
        double best = 0.0;
        const ActorProto* who = nullptr;
        for (const auto& p : *protos) {
            if (frame < p.actor.start_frame || frame > p.end) continue;
            const double v = iou(p.actor.boxAt(frame), query);
            if (v > best) {
                best = v;
                who = &p;
            }
        }
        std::vector<double> color(hist_dim, 1.0 / static_cast<double>(hist_dim));
        std::vector<double> grad = color;
        if (who != nullptr && best > 0.0) {
            double cmass = 0.0, gmass = 0.0;
            for (double v : who->color) cmass += v;
            for (double v : who->grad) gmass += v;
            for (std::size_t i = 0; i < hist_dim; ++i) {
                color[i] = best * who->color[i] / cmass + (1.0 - best) * color[i];
                grad[i] = best * who->grad[i] / gmass + (1.0 - best) * grad[i];
            }
        }
        return {FeatureHistogram(color), FeatureHistogram(grad)};
    };
}

namespace {

using nlohmann::json;

json actorToJson(const ActorSpec& a) {
    json j;
    j["label"] = a.label;
    j["start_frame"] = a.start_frame;
    j["end_frame"] = a.end_frame;
    j["start"] = {{"cx", a.start.cx}, {"cy", a.start.cy}, {"w", a.start.w}, {"h", a.start.h}};
    j["motion"] = a.motion;
    j["vx"] = a.vx;
    j["vy"] = a.vy;
    j["amp_x"] = a.amp_x;
    j["amp_y"] = a.amp_y;
    j["period"] = a.period;
    j["size_drift"] = a.size_drift;
    j["human_score"] = a.human_score;
    j["motion_proto"] = a.motion_proto;
    j["color_proto"] = a.color_proto;
    j["grad_proto"] = a.grad_proto;
    j["forced_gaps"] = json::array();
    for (const auto& g : a.forced_gaps) j["forced_gaps"].push_back({g.first, g.second});
    return j;
}

ActorSpec actorFromJson(const json& j) {
    ActorSpec a;
    a.label = j.value("label", a.label);
    a.start_frame = j.value("start_frame", a.start_frame);
    a.end_frame = j.value("end_frame", a.end_frame);
    if (j.contains("start")) {
        const auto& s = j.at("start");
        a.start.cx = s.at("cx").get<double>();
        a.start.cy = s.at("cy").get<double>();
        a.start.w = s.at("w").get<double>();
        a.start.h = s.at("h").get<double>();
    }
    a.motion = j.value("motion", a.motion);
    a.vx = j.value("vx", a.vx);
    a.vy = j.value("vy", a.vy);
    a.amp_x = j.value("amp_x", a.amp_x);
    a.amp_y = j.value("amp_y", a.amp_y);
    a.period = j.value("period", a.period);
    a.size_drift = j.value("size_drift", a.size_drift);
    a.human_score = j.value("human_score", a.human_score);
    a.motion_proto = j.value("motion_proto", a.motion_proto);
    a.color_proto = j.value("color_proto", a.color_proto);
    a.grad_proto = j.value("grad_proto", a.grad_proto);
    if (j.contains("forced_gaps"))
        for (const auto& g : j.at("forced_gaps"))
            a.forced_gaps.emplace_back(g.at(0).get<int>(), g.at(1).get<int>());
    return a;
}

}  // namespace

std::string ScenarioSpec::toJson() const {
    json j;
    j["seed"] = seed;
    j["video"] = video;
    j["frames"] = frames;
    j["canvas"] = {{"w", canvas_w}, {"h", canvas_h}};
    j["actors"] = json::array();
    for (const auto& a : actors) j["actors"].push_back(actorToJson(a));
    j["noise"] = {{"center_jitter", noise.center_jitter},
                  {"scale_jitter", noise.scale_jitter},
                  {"dropout", noise.dropout},
                  {"clutter_per_frame", noise.clutter_per_frame},
                  {"score_noise", noise.score_noise},
                  {"appearance_noise", noise.appearance_noise}};
    return j.dump(2);
}

ScenarioSpec ScenarioSpec::fromJson(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario spec parse error: ") + e.what());
    }
    ScenarioSpec spec;
    try {
        spec.seed = j.value("seed", spec.seed);
        spec.video = j.value("video", spec.video);
        spec.frames = j.value("frames", spec.frames);
        if (j.contains("canvas")) {
            spec.canvas_w = j.at("canvas").at("w").get<double>();
            spec.canvas_h = j.at("canvas").at("h").get<double>();
        }
        if (j.contains("actors"))
            for (const auto& a : j.at("actors")) spec.actors.push_back(actorFromJson(a));
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            spec.noise.center_jitter = n.value("center_jitter", 0.0);
            spec.noise.scale_jitter = n.value("scale_jitter", 0.0);
            spec.noise.dropout = n.value("dropout", 0.0);
            spec.noise.clutter_per_frame = n.value("clutter_per_frame", 0);
            spec.noise.score_noise = n.value("score_noise", 0.0);
            spec.noise.appearance_noise = n.value("appearance_noise", 0.0);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scenario spec field error: ") + e.what());
    }
    validate(spec);
    return spec;
}

}  // namespace actionprop
