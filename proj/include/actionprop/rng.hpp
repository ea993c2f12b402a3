// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace actionprop {

/// Seeded generator with pinned transforms so the same seed yields the same
/// stream on every platform. std::distributions are implementation-defined,
/// so uniform/normal are derived here from the raw mt19937_64 output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Inclusive integer range.
    int uniformInt(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    /// Standard normal via Box-Muller; one fresh pair per call.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace actionprop
