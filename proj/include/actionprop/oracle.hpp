// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>

#include "actionprop/association.hpp"
#include "actionprop/core.hpp"
#include "actionprop/path_search.hpp"

namespace actionprop {

struct OracleLimits {
    std::size_t max_enumeration = 1'000'000;
};

/// Exhaustively enumerate every link-valid contiguous chain and return the
/// one with the highest accumulated score (same left-to-right summation and
/// the lowest-(frame, index) tie-break as the pooled search).
/// Throws std::invalid_argument on an empty instance or when the chain count
/// exceeds limits.max_enumeration.
ActionPath bruteForceBestPath(const VideoDetections& video, const LinkConfig& cfg,
                              const OracleLimits& limits = {});

/// Exhaustively enumerate feasible subsets of size 1..max_paths and return
/// the arg-max under setObjective. Throws std::invalid_argument on an empty
/// pool or when the subset count exceeds limits.max_enumeration.
PathSet bruteForceBestPathSet(const std::vector<ActionPath>& pool, const AssocConfig& cfg,
                              const OracleLimits& limits = {});

}  // namespace actionprop
