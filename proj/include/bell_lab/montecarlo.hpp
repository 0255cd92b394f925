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
 * Seeded Monte Carlo runs of generative models: outcome tallies, Wilson
 * score intervals and empirical scenarios.
 *
 * Trial t of setting s under seed k always uses Substream(k, s, t), so the
 * tallies do not depend on how trials are split across workers.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "models.hpp"

namespace bell_lab {

struct TrialCounts {
    std::array<std::uint64_t, 4> n{}; ///< n11, n12, n21, n22

    std::uint64_t n11() const { return n[0]; }
    std::uint64_t n12() const { return n[1]; }
    std::uint64_t n21() const { return n[2]; }
    std::uint64_t n22() const { return n[3]; }
    std::uint64_t total() const { return n[0] + n[1] + n[2] + n[3]; }

    TrialCounts &operator+=(const TrialCounts &o) {
        for (std::size_t i = 0; i < 4; ++i) {
            n[i] += o.n[i];
        }
        return *this;
    }
    friend bool operator==(const TrialCounts &, const TrialCounts &) = default;
};

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
    double lower = 0.0;
    double upper = 0.0;
    double halfwidth() const { return 0.5 * (upper - lower); }
    bool contains(double p) const { return p >= lower && p <= upper; }
};

/// Wilson score interval for `successes` out of `trials`.
inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                      double z = kZ95) {
    if (trials == 0) {
        throw EmptyCounts("wilson interval of zero trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    // Pin the closed ends so deterministic cells sit inside their own interval.
    const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {lower, upper};
}

struct EstimatedDistribution {
    JointDistribution point = JointDistribution::uniform();
    std::array<WilsonInterval, 4> intervals{};
    std::uint64_t n = 0;

    double ci_halfwidth(std::size_t cell) const { return intervals[cell].halfwidth(); }
};

inline EstimatedDistribution estimate(const TrialCounts &c) {
    const auto total = c.total();
    if (total == 0) {
        throw EmptyCounts("cannot estimate a distribution from zero trials");
    }
    EstimatedDistribution e;
    e.n = total;
    std::array<double, 4> weights{};
    for (std::size_t i = 0; i < 4; ++i) {
        weights[i] = static_cast<double>(c.n[i]);
        e.intervals[i] = wilson_interval(c.n[i], total);
    }
    e.point = JointDistribution::from_weights(weights);
    return e;
}

/// Tallies trials [first, first + count) of one setting.
inline TrialCounts tally_range(const GenerativeModel &m, Setting setting, std::uint64_t first,
                               std::uint64_t count, std::uint64_t seed) {
    TrialCounts c;
    for (std::uint64_t t = first; t < first + count; ++t) {
        ++c.n[m.sample(setting, seed, t).cell_index()];
    }
    return c;
}

/// `n` seeded trials of one setting, split across `workers` threads.
inline TrialCounts run_trials(const GenerativeModel &m, Setting setting, std::uint64_t n,
                              std::uint64_t seed, unsigned workers = 1) {
    if (n == 0) {
        throw EmptyCounts("run_trials requires n >= 1");
    }
    // Surface IncompleteData on the calling thread.
    (void)m.exact_distribution(setting);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(n, 256))));
    if (workers == 1) {
        return tally_range(m, setting, 0, n, seed);
    }
    std::vector<TrialCounts> parts(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = n / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t first = w * chunk;
        const std::uint64_t count = (w + 1 == workers) ? n - first : chunk;
        pool.emplace_back([&, w, first, count] {
            parts[w] = tally_range(m, setting, first, count, seed);
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    TrialCounts total;
    for (const auto &p : parts) {
        total += p;
    }
    return total;
}

struct EmpiricalScenario {
    Scenario scenario;
    std::array<TrialCounts, 4> counts;                  ///< indexed by Setting
    std::array<EstimatedDistribution, 4> estimates;     ///< indexed by Setting
    std::uint64_t seed = 0;
};

/// Runs every setting on its own substream and assembles the estimated tables.
inline EmpiricalScenario empirical_scenario(const GenerativeModel &m, std::uint64_t n_per_setting,
                                            std::uint64_t seed, unsigned workers = 1) {
    if (n_per_setting == 0) {
        throw EmptyCounts("empirical_scenario requires n_per_setting >= 1");
    }
    std::array<TrialCounts, 4> counts;
    std::array<EstimatedDistribution, 4> estimates;
    for (auto s : kAllSettings) {
        counts[index(s)] = run_trials(m, s, n_per_setting, seed, workers);
        estimates[index(s)] = estimate(counts[index(s)]);
    }
    Scenario::Solos solos;
    for (auto side : kAllSides) {
        solos[index(side)] = m.solo(side);
    }
    Scenario sc({estimates[0].point, estimates[1].point, estimates[2].point, estimates[3].point},
                solos);
    return {std::move(sc), counts, estimates, seed};
}

/// Largest absolute cell difference between two tables.
inline double max_cell_error(const JointDistribution &a, const JointDistribution &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(a.cells()[i] - b.cells()[i]));
    }
    return worst;
}

inline constexpr const char *kCountsCsvHeader = "setting,n11,n12,n21,n22,seed,n_total";

/// One CSV row per setting, columns as in kCountsCsvHeader.
inline void write_counts_csv(std::ostream &out, const EmpiricalScenario &e) {
    out << kCountsCsvHeader << '\n';
    for (auto s : kAllSettings) {
        const auto &c = e.counts[index(s)];
        out << key(s) << ',' << c.n11() << ',' << c.n12() << ',' << c.n21() << ',' << c.n22()
            << ',' << e.seed << ',' << c.total() << '\n';
    }
}

} // namespace bell_lab
