// Copyright 2026 The bell-lab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Counter-based random substreams. A draw is identified by
 * (seed, stream, counter); each identity hashes to an independent SplitMix64
 * state, so trials can be generated in any order or on any number of workers
 * and still reproduce the same values.
 */

#pragma once

#include <cstdint>
#include <limits>

namespace bell_lab {

/// SplitMix64 output finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small generator owned by a single trial. Satisfies UniformRandomBitGenerator.
class Substream {
  public:
    using result_type = std::uint64_t;

    constexpr Substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
        : state_(derive(seed, stream, counter)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    constexpr double uniform() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    constexpr bool bernoulli(double p) { return uniform() < p; }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t counter) {
        std::uint64_t k = mix64(seed + kGamma);
        k = mix64(k ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
        k = mix64(k ^ (counter * 0xaef17502108ef2d9ULL + 0x2545f4914f6cdd1dULL));
        return k;
    }

    std::uint64_t state_;
};

/// Stream identifiers used by the library, kept disjoint per purpose.
namespace streams {
constexpr std::uint64_t coincidence(std::uint64_t setting_index) { return setting_index; }
constexpr std::uint64_t channel_day(std::uint64_t day) { return (1ULL << 32) + day; }
constexpr std::uint64_t message_bits() { return (1ULL << 33); }
constexpr std::uint64_t fit_restart(std::uint64_t restart) { return (1ULL << 34) + restart; }
} // namespace streams

} // namespace bell_lab
