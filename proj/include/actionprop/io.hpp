// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "actionprop/association.hpp"
#include "actionprop/completion.hpp"
#include "actionprop/core.hpp"
#include "actionprop/evaluation.hpp"
#include "actionprop/path_search.hpp"
#include "actionprop/proposal.hpp"

namespace actionprop {

/// All readers parse JSON-lines and throw std::invalid_argument with
/// "<path>:<line>: <reason>" on malformed input. All writers emit one
/// JSON object per line with alphabetically ordered keys, so output bytes
/// are deterministic.

std::vector<VideoDetections> readDetections(const std::string& path);
void writeDetections(const std::vector<VideoDetections>& videos, const std::string& path);

std::vector<GroundTruthTrack> readGroundTruth(const std::string& path);
void writeGroundTruth(const std::vector<GroundTruthTrack>& gts, const std::string& path);

struct VideoPaths {
    std::string video;
    std::vector<ActionPath> paths;
};

std::vector<VideoPaths> readPaths(const std::string& path);
void writePaths(const std::vector<VideoPaths>& videos, const std::string& path);

struct VideoPathSets {
    std::string video;
    std::vector<PathSet> sets;
};

std::vector<VideoPathSets> readPathSets(const std::string& path);
void writePathSets(const std::vector<VideoPathSets>& videos, const std::string& path);

std::vector<Track> readTracks(const std::string& path);
void writeTracks(const std::vector<Track>& tracks, const std::string& path);

std::vector<ActionProposal> readProposals(const std::string& path);
void writeProposals(const std::vector<ActionProposal>& proposals, const std::string& path);

std::string metricsToJson(const MetricsReport& report);
void writeMetricsJson(const MetricsReport& report, const std::string& path);
void writeMetricsCsv(const MetricsReport& report, const std::string& path);

}  // namespace actionprop
