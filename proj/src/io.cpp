// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace actionprop {

using nlohmann::json;

namespace {

[[noreturn]] void lineError(const std::string& path, std::size_t line, const std::string& what) {
    throw std::invalid_argument(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream openIn(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return in;
}

std::ofstream openOut(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    return out;
}

void finishOut(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

/// Apply `fn` to each non-empty line's parsed JSON object.
template <typename Fn>
void forEachLine(const std::string& path, Fn&& fn) {
    auto in = openIn(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            lineError(path, line_no, std::string("parse error: ") + e.what());
        }
        if (!j.is_object()) lineError(path, line_no, "expected a JSON object");
        try {
            fn(j, line_no);
        } catch (const json::exception& e) {
            lineError(path, line_no, std::string("field error: ") + e.what());
        } catch (const std::invalid_argument& e) {
            lineError(path, line_no, e.what());
        }
    }
}

FeatureHistogram histFrom(const json& j, const char* field) {
    const auto values = j.at(field).get<std::vector<double>>();
    try {
        return FeatureHistogram(values);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(field) + ": " + e.what());
    }
}

json histJson(const FeatureHistogram& h) { return json(h.values()); }

json detectionJson(const std::string& video, const Detection& d, bool with_video) {
    json j;
    if (with_video) j["video"] = video;
    j["frame"] = d.box.frame;
    j["index"] = d.index;
    j["cx"] = d.box.cx;
    j["cy"] = d.box.cy;
    j["w"] = d.box.w;
    j["h"] = d.box.h;
    j["human_score"] = d.human_score;
    j["motion_hist"] = histJson(d.motion_hist);
    j["color_hist"] = histJson(d.color_hist);
    j["grad_hist"] = histJson(d.grad_hist);
    j["shift_dx"] = d.shift_dx;
    j["shift_dy"] = d.shift_dy;
    if (d.actionness) j["actionness"] = *d.actionness;
    return j;
}

Detection detectionFrom(const json& j) {
    Detection d;
    d.box.frame = j.at("frame").get<int>();
    if (d.box.frame < 0) throw std::invalid_argument("frame must be non-negative");
    d.box.cx = j.at("cx").get<double>();
    d.box.cy = j.at("cy").get<double>();
    d.box.w = j.at("w").get<double>();
    d.box.h = j.at("h").get<double>();
    if (d.box.w <= 0.0 || d.box.h <= 0.0)
        throw std::invalid_argument("box extents w and h must be positive");
    d.human_score = j.at("human_score").get<double>();
    if (d.human_score < 0.0 || d.human_score > 1.0)
        throw std::invalid_argument("human_score must lie in [0,1]");
    d.motion_hist = histFrom(j, "motion_hist");
    d.color_hist = histFrom(j, "color_hist");
    d.grad_hist = histFrom(j, "grad_hist");
    d.shift_dx = j.value("shift_dx", 0.0);
    d.shift_dy = j.value("shift_dy", 0.0);
    if (j.contains("index")) d.index = j.at("index").get<int>();
    if (j.contains("actionness")) d.actionness = j.at("actionness").get<double>();
    return d;
}

json pathJson(const ActionPath& p) {
    json j;
    j["start_frame"] = p.start_frame;
    j["end_frame"] = p.end_frame;
    j["score"] = p.score;
    j["boxes"] = json::array();
    for (const auto& d : p.boxes) j["boxes"].push_back(detectionJson({}, d, false));
    return j;
}

ActionPath pathFrom(const json& j) {
    ActionPath p;
    p.start_frame = j.at("start_frame").get<int>();
    p.end_frame = j.at("end_frame").get<int>();
    p.score = j.at("score").get<double>();
    for (const auto& b : j.at("boxes")) p.boxes.push_back(detectionFrom(b));
    if (p.boxes.empty()) throw std::invalid_argument("path has no boxes");
    if (static_cast<int>(p.boxes.size()) != p.duration())
        throw std::invalid_argument("path box count does not match its span");
    for (std::size_t i = 0; i < p.boxes.size(); ++i)
        if (p.boxes[i].box.frame != p.start_frame + static_cast<int>(i))
            throw std::invalid_argument("path boxes are not contiguous");
    return p;
}

const char* sourceTag(BoxSource s) { return s == BoxSource::kDetected ? "detected" : "completed"; }

BoxSource sourceFrom(const std::string& s) {
    if (s == "detected") return BoxSource::kDetected;
    if (s == "completed") return BoxSource::kCompleted;
    throw std::invalid_argument("unknown source tag: " + s);
}

}  // namespace

std::vector<VideoDetections> readDetections(const std::string& path) {
    std::vector<VideoDetections> out;
    std::map<std::string, std::size_t> index;
    forEachLine(path, [&](const json& j, std::size_t) {
        const auto video = j.at("video").get<std::string>();
        Detection d = detectionFrom(j);
        auto [it, inserted] = index.try_emplace(video, out.size());
        if (inserted) {
            out.emplace_back();
            out.back().video = video;
        }
        auto& frames = out[it->second].frames;
        const auto f = static_cast<std::size_t>(d.box.frame);
        if (frames.size() <= f) frames.resize(f + 1);
        d.index = static_cast<int>(frames[f].size());
        frames[f].push_back(std::move(d));
    });
    return out;
}

void writeDetections(const std::vector<VideoDetections>& videos, const std::string& path) {
    auto out = openOut(path);
    for (const auto& v : videos)
        for (const auto& frame : v.frames)
            for (const auto& d : frame) out << detectionJson(v.video, d, true).dump() << '\n';
    finishOut(out, path);
}

std::vector<GroundTruthTrack> readGroundTruth(const std::string& path) {
    std::vector<GroundTruthTrack> out;
    forEachLine(path, [&](const json& j, std::size_t) {
        GroundTruthTrack g;
        g.video = j.at("video").get<std::string>();
        g.label = j.value("label", std::string("action"));
        g.start_frame = j.at("start_frame").get<int>();
        for (const auto& b : j.at("boxes")) {
            if (b.is_null()) {
                g.boxes.emplace_back(std::nullopt);
                continue;
            }
            BoundingBox box;
            box.frame = g.start_frame + static_cast<int>(g.boxes.size());
            box.cx = b.at("cx").get<double>();
            box.cy = b.at("cy").get<double>();
            box.w = b.at("w").get<double>();
            box.h = b.at("h").get<double>();
            if (box.w <= 0.0 || box.h <= 0.0)
                throw std::invalid_argument("box extents w and h must be positive");
            g.boxes.emplace_back(box);
        }
        if (g.annotatedFrames() == 0) throw std::invalid_argument("ground truth has no boxes");
        out.push_back(std::move(g));
    });
    return out;
}

void writeGroundTruth(const std::vector<GroundTruthTrack>& gts, const std::string& path) {
    auto out = openOut(path);
    for (const auto& g : gts) {
        json j;
        j["video"] = g.video;
        j["label"] = g.label;
        j["start_frame"] = g.start_frame;
        j["boxes"] = json::array();
        for (const auto& b : g.boxes) {
            if (!b) {
                j["boxes"].push_back(nullptr);
            } else {
                j["boxes"].push_back(
                    json{{"cx", b->cx}, {"cy", b->cy}, {"w", b->w}, {"h", b->h}});
            }
        }
        out << j.dump() << '\n';
    }
    finishOut(out, path);
}

std::vector<VideoPaths> readPaths(const std::string& path) {
    std::vector<VideoPaths> out;
    std::map<std::string, std::size_t> index;
    forEachLine(path, [&](const json& j, std::size_t) {
        const auto video = j.at("video").get<std::string>();
        auto [it, inserted] = index.try_emplace(video, out.size());
        if (inserted) {
            out.emplace_back();
            out.back().video = video;
        }
        out[it->second].paths.push_back(pathFrom(j));
    });
    return out;
}

void writePaths(const std::vector<VideoPaths>& videos, const std::string& path) {
    auto out = openOut(path);
    for (const auto& v : videos) {
        for (const auto& p : v.paths) {
            json j = pathJson(p);
            j["video"] = v.video;
            out << j.dump() << '\n';
        }
    }
    finishOut(out, path);
}

std::vector<VideoPathSets> readPathSets(const std::string& path) {
    std::vector<VideoPathSets> out;
    std::map<std::string, std::size_t> index;
    forEachLine(path, [&](const json& j, std::size_t) {
        const auto video = j.at("video").get<std::string>();
        auto [it, inserted] = index.try_emplace(video, out.size());
        if (inserted) {
            out.emplace_back();
            out.back().video = video;
        }
        PathSet s;
        s.objective = j.at("objective").get<double>();
        s.candidate_indices = j.value("candidate_indices", std::vector<int>{});
        for (const auto& p : j.at("paths")) s.paths.push_back(pathFrom(p));
        if (s.paths.empty()) throw std::invalid_argument("path set has no paths");
        out[it->second].sets.push_back(std::move(s));
    });
    return out;
}

void writePathSets(const std::vector<VideoPathSets>& videos, const std::string& path) {
    auto out = openOut(path);
    for (const auto& v : videos) {
        for (const auto& s : v.sets) {
            json j;
            j["video"] = v.video;
            j["objective"] = s.objective;
            j["candidate_indices"] = s.candidate_indices;
            j["paths"] = json::array();
            for (const auto& p : s.paths) j["paths"].push_back(pathJson(p));
            out << j.dump() << '\n';
        }
    }
    finishOut(out, path);
}

std::vector<Track> readTracks(const std::string& path) {
    std::vector<Track> out;
    forEachLine(path, [&](const json& j, std::size_t) {
        Track t;
        t.video = j.at("video").get<std::string>();
        t.score = j.at("score").get<double>();
        t.gaps_left_open = j.value("gaps_left_open", 0);
        for (const auto& e : j.at("entries")) {
            TrackEntry entry;
            entry.frame = e.at("frame").get<int>();
            entry.box.frame = entry.frame;
            entry.box.cx = e.at("cx").get<double>();
            entry.box.cy = e.at("cy").get<double>();
            entry.box.w = e.at("w").get<double>();
            entry.box.h = e.at("h").get<double>();
            if (entry.box.w <= 0.0 || entry.box.h <= 0.0)
                throw std::invalid_argument("box extents w and h must be positive");
            entry.source = sourceFrom(e.at("source").get<std::string>());
            if (e.contains("color_hist")) entry.color_hist = histFrom(e, "color_hist");
            if (e.contains("grad_hist")) entry.grad_hist = histFrom(e, "grad_hist");
            entry.shift_dx = e.value("shift_dx", 0.0);
            entry.shift_dy = e.value("shift_dy", 0.0);
            entry.key = DetectionKey{entry.frame, e.value("key_index", -1)};
            t.entries.push_back(std::move(entry));
        }
        if (t.entries.empty()) throw std::invalid_argument("track has no entries");
        out.push_back(std::move(t));
    });
    return out;
}

void writeTracks(const std::vector<Track>& tracks, const std::string& path) {
    auto out = openOut(path);
    for (const auto& t : tracks) {
        json j;
        j["video"] = t.video;
        j["score"] = t.score;
        j["gaps_left_open"] = t.gaps_left_open;
        j["entries"] = json::array();
        for (const auto& e : t.entries) {
            json ej;
            ej["frame"] = e.frame;
            ej["cx"] = e.box.cx;
            ej["cy"] = e.box.cy;
            ej["w"] = e.box.w;
            ej["h"] = e.box.h;
            ej["source"] = sourceTag(e.source);
            if (!e.color_hist.empty()) ej["color_hist"] = histJson(e.color_hist);
            if (!e.grad_hist.empty()) ej["grad_hist"] = histJson(e.grad_hist);
            ej["shift_dx"] = e.shift_dx;
            ej["shift_dy"] = e.shift_dy;
            ej["key_index"] = e.key.index;
            j["entries"].push_back(std::move(ej));
        }
        out << j.dump() << '\n';
    }
    finishOut(out, path);
}

std::vector<ActionProposal> readProposals(const std::string& path) {
    std::vector<ActionProposal> out;
    forEachLine(path, [&](const json& j, std::size_t) {
        ActionProposal p;
        p.track.video = j.at("video").get<std::string>();
        p.track.score = j.at("score").get<double>();
        const int start = j.at("start_frame").get<int>();
        const int end = j.at("end_frame").get<int>();
        for (const auto& b : j.at("boxes")) {
            TrackEntry e;
            e.frame = b.at("frame").get<int>();
            e.box.frame = e.frame;
            e.box.cx = b.at("cx").get<double>();
            e.box.cy = b.at("cy").get<double>();
            e.box.w = b.at("w").get<double>();
            e.box.h = b.at("h").get<double>();
            if (e.box.w <= 0.0 || e.box.h <= 0.0)
                throw std::invalid_argument("box extents w and h must be positive");
            e.source = sourceFrom(b.at("source").get<std::string>());
            p.track.entries.push_back(std::move(e));
        }
        if (p.track.entries.empty()) throw std::invalid_argument("proposal has no boxes");
        if (p.track.firstFrame() != start || p.track.lastFrame() != end)
            throw std::invalid_argument("proposal span does not match its boxes");
        out.push_back(std::move(p));
    });
    return out;
}

void writeProposals(const std::vector<ActionProposal>& proposals, const std::string& path) {
    auto out = openOut(path);
    for (const auto& p : proposals) {
        json j;
        j["video"] = p.track.video;
        j["start_frame"] = p.track.firstFrame();
        j["end_frame"] = p.track.lastFrame();
        j["score"] = p.track.score;
        j["boxes"] = json::array();
        for (const auto& e : p.track.entries) {
            j["boxes"].push_back(json{{"frame", e.frame},
                                      {"cx", e.box.cx},
                                      {"cy", e.box.cy},
                                      {"w", e.box.w},
                                      {"h", e.box.h},
                                      {"source", sourceTag(e.source)}});
        }
        out << j.dump() << '\n';
    }
    finishOut(out, path);
}

std::string metricsToJson(const MetricsReport& report) {
    json j;
    j["eta"] = report.eta;
    j["recall"] = report.recall;
    j["abo"] = report.abo;
    j["mabo"] = report.mabo;
    j["per_class_abo"] = report.per_class_abo;
    j["proposals_per_video"] = report.proposals_per_video;
    j["total_proposals"] = report.total_proposals;
    j["total_ground_truths"] = report.total_ground_truths;
    return j.dump(2);
}

void writeMetricsJson(const MetricsReport& report, const std::string& path) {
    auto out = openOut(path);
    out << metricsToJson(report) << '\n';
    finishOut(out, path);
}

void writeMetricsCsv(const MetricsReport& report, const std::string& path) {
    auto out = openOut(path);
    out << "metric,value\n";
    out << "eta," << json(report.eta).dump() << '\n';
    out << "recall," << json(report.recall).dump() << '\n';
    out << "abo," << json(report.abo).dump() << '\n';
    out << "mabo," << json(report.mabo).dump() << '\n';
    out << "total_proposals," << report.total_proposals << '\n';
    out << "total_ground_truths," << report.total_ground_truths << '\n';
    for (const auto& [label, v] : report.per_class_abo)
        out << "per_class_abo." << label << ',' << json(v).dump() << '\n';
    for (const auto& [video, n] : report.proposals_per_video)
        out << "proposals_per_video." << video << ',' << n << '\n';
    finishOut(out, path);
}

}  // namespace actionprop
