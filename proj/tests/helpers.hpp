// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "actionprop/core.hpp"
#include "actionprop/path_search.hpp"

namespace testutil {

inline actionprop::FeatureHistogram hist(std::vector<double> v) {
    return actionprop::FeatureHistogram(std::move(v));
}

inline actionprop::FeatureHistogram uniformHist(std::size_t dim = 4) {
    return hist(std::vector<double>(dim, 1.0));
}

struct DetSpec {
    double cx = 0.0, cy = 0.0, w = 10.0, h = 10.0;
    double actionness = 1.0;
    std::vector<double> color = {1, 1, 1, 1};
    std::vector<double> grad = {1, 1, 1, 1};
};

inline actionprop::Detection det(int frame, int index, const DetSpec& s = {}) {
    actionprop::Detection d;
    d.box = {frame, s.cx, s.cy, s.w, s.h};
    d.index = index;
    d.human_score = std::min(1.0, s.actionness);
    d.actionness = s.actionness;
    d.motion_hist = hist(s.color);
    d.color_hist = hist(s.color);
    d.grad_hist = hist(s.grad);
    return d;
}

/// Contiguous path from per-frame specs starting at `start_frame`.
inline actionprop::ActionPath path(int start_frame, const std::vector<DetSpec>& specs,
                                   int index = 0) {
    actionprop::ActionPath p;
    p.start_frame = start_frame;
    p.end_frame = start_frame + static_cast<int>(specs.size()) - 1;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        p.boxes.push_back(det(start_frame + static_cast<int>(i), index, specs[i]));
        p.score += specs[i].actionness;
    }
    return p;
}

/// Self-deleting unique directory for file round-trip tests.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path() / "actionprop_test_XXXXXX";
        std::string tmpl = base.string();
        if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace testutil
