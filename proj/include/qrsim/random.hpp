// Copyright 2026 The qrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qrsim/core.hpp"

namespace qrsim {

/// SplitMix64 finalizer; used to spread nearby seeds apart.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of trial `index` in a batch driven by `master`: master XOR index.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept { return master ^ index; }

/// Deterministic 64-bit random stream. Doubles are built from the top 53
/// bits of each draw, so sequences are identical across standard libraries.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one output per call).
    double normal() {
        constexpr double kTwoPi = 6.283185307179586476925286766559;
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
inline PureState random_state(Dim d, std::size_t num_qudits, RandomSource &rng) {
    std::vector<Amplitude> amps(detail::register_size(d, num_qudits));
    double norm2 = 0.0;
    for (auto &a : amps) {
        const double re = rng.normal();
        const double im = rng.normal();
        a = {re, im};
        norm2 += re * re + im * im;
    }
    const double norm = std::sqrt(norm2);
    for (auto &a : amps) a /= norm;
    return make_state(d, std::move(amps));
}

}  // namespace qrsim
