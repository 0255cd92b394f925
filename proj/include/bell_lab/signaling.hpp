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
 * Regime-encoding channel. Bob holds one measurement choice for a whole
 * "day" of coincidence trials to encode a bit; Alice keeps measuring the
 * same observable and decodes the bit from her daily outcome-1 frequency.
 * The channel carries information only when Alice's marginal depends on
 * Bob's choice, i.e. when the marginal distribution law fails.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "core.hpp"
#include "models.hpp"
#include "rng.hpp"

namespace bell_lab {

using Bits = std::vector<bool>;

inline Bits parse_bits(std::string_view text) {
    if (text.empty()) {
        throw ParseError("bit string must not be empty");
    }
    Bits bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw ParseError("bit string may contain only '0' and '1'");
        }
        bits.push_back(c == '1');
    }
    return bits;
}

inline std::string format_bits(const Bits &bits) {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

/// Deterministic pseudo-random message of `length` bits.
inline Bits random_bits(std::size_t length, std::uint64_t seed) {
    Bits bits(length);
    for (std::size_t i = 0; i < length; ++i) {
        Substream rng(seed, streams::message_bits(), i);
        bits[i] = rng.bernoulli(0.5);
    }
    return bits;
}

struct ChannelConfig {
    std::shared_ptr<const GenerativeModel> model;
    std::uint64_t trials_per_day = 500;
    Side alice_setting = Side::A;
    Side bob_regime_for_0 = Side::B;
    Side bob_regime_for_1 = Side::Bp;
    std::optional<double> decoder_threshold; ///< midpoint of the two marginals when unset
    unsigned workers = 1;
};

struct ChannelMarginals {
    double regime0 = 0.0; ///< Alice's P(outcome 1) while Bob encodes 0
    double regime1 = 0.0;
    bool separated() const { return regime0 != regime1; }
    double midpoint() const { return 0.5 * (regime0 + regime1); }
};

struct ChannelResult {
    Bits sent_bits;
    Bits decoded_bits;
    double ber = 0.0;
    std::vector<double> daily_marginals;
    ChannelMarginals theoretical;
    double threshold = 0.5;
    bool degenerate = false;
    std::vector<std::string> warnings;
};

namespace detail {

inline void validate(const ChannelConfig &cfg) {
    if (!cfg.model) {
        throw InvalidArgument("channel: no model");
    }
    if (cfg.trials_per_day == 0) {
        throw InvalidArgument("channel: trials_per_day must be >= 1");
    }
    if (!is_first_party(cfg.alice_setting)) {
        throw InvalidArgument("channel: Alice measures A or A'");
    }
    if (is_first_party(cfg.bob_regime_for_0) || is_first_party(cfg.bob_regime_for_1)) {
        throw InvalidArgument("channel: Bob's regimes are B or B'");
    }
    if (cfg.bob_regime_for_0 == cfg.bob_regime_for_1) {
        throw InvalidArgument("channel: Bob's two regimes must differ");
    }
    if (cfg.decoder_threshold &&
        !(*cfg.decoder_threshold > 0.0 && *cfg.decoder_threshold < 1.0)) {
        throw InvalidArgument("channel: decoder threshold must lie in (0, 1)");
    }
}

} // namespace detail

/// Alice's outcome-1 probability under each of Bob's regimes, from exact tables.
inline ChannelMarginals theoretical_marginals(const ChannelConfig &cfg) {
    detail::validate(cfg);
    const auto &m = *cfg.model;
    const auto s0 = setting_of(cfg.alice_setting, cfg.bob_regime_for_0);
    const auto s1 = setting_of(cfg.alice_setting, cfg.bob_regime_for_1);
    return {m.exact_distribution(s0).first_marginal(Outcome::One),
            m.exact_distribution(s1).first_marginal(Outcome::One)};
}

/// Alice's outcome-1 frequency on day `day` with Bob holding `bob`.
inline double day_frequency(const ChannelConfig &cfg, Side bob, std::uint64_t day,
                            std::uint64_t seed) {
    const auto setting = setting_of(cfg.alice_setting, bob);
    std::uint64_t ones = 0;
    for (std::uint64_t t = 0; t < cfg.trials_per_day; ++t) {
        Substream rng(seed, streams::channel_day(day), t);
        ones += cfg.model->sample(setting, rng).a == Outcome::One ? 1 : 0;
    }
    return static_cast<double>(ones) / static_cast<double>(cfg.trials_per_day);
}

inline ChannelResult run_channel(const ChannelConfig &cfg, const Bits &bits, std::uint64_t seed) {
    if (bits.empty()) {
        throw InvalidArgument("channel: no bits to send");
    }
    ChannelResult r;
    r.theoretical = theoretical_marginals(cfg);
    r.threshold = cfg.decoder_threshold.value_or(r.theoretical.midpoint());
    r.degenerate = !r.theoretical.separated();
    if (r.degenerate) {
        r.warnings.push_back("DegenerateChannel: Alice's marginal is the same under both of "
                             "Bob's regimes; decoding is at chance level");
    } else {
        const double lo = std::min(r.theoretical.regime0, r.theoretical.regime1);
        const double hi = std::max(r.theoretical.regime0, r.theoretical.regime1);
        if (!(r.threshold > lo && r.threshold < hi)) {
            throw InvalidArgument("channel: decoder threshold must lie strictly between the "
                                  "two theoretical marginals");
        }
    }

    r.sent_bits = bits;
    r.daily_marginals.assign(bits.size(), 0.0);
    auto run_days = [&](std::size_t first, std::size_t last) {
        for (std::size_t d = first; d < last; ++d) {
            const Side bob = bits[d] ? cfg.bob_regime_for_1 : cfg.bob_regime_for_0;
            r.daily_marginals[d] = day_frequency(cfg, bob, d, seed);
        }
    };
    const unsigned workers =
        std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(bits.size())));
    if (workers == 1) {
        run_days(0, bits.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = bits.size() / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t first = w * chunk;
            const std::size_t last = (w + 1 == workers) ? bits.size() : first + chunk;
            pool.emplace_back(run_days, first, last);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    // Regime 1 raises (or, if it is the smaller marginal, lowers) Alice's frequency.
    const bool one_is_high = r.theoretical.regime1 >= r.theoretical.regime0;
    std::size_t errors = 0;
    r.decoded_bits.resize(bits.size());
    for (std::size_t d = 0; d < bits.size(); ++d) {
        const double f = r.daily_marginals[d];
        r.decoded_bits[d] = one_is_high ? f > r.threshold : f < r.threshold;
        errors += r.decoded_bits[d] != bits[d] ? 1 : 0;
    }
    r.ber = static_cast<double>(errors) / static_cast<double>(bits.size());
    return r;
}

struct BerPoint {
    std::uint64_t trials_per_day = 0;
    double mean_ber = 0.0;
};

/// Mean bit error rate per trials-per-day value, averaged over `seeds`; each
/// seed sends its own random message of `bits_len` bits.
inline std::vector<BerPoint> ber_curve(const ChannelConfig &cfg, std::size_t bits_len,
                                       const std::vector<std::uint64_t> &trials_grid,
                                       const std::vector<std::uint64_t> &seeds) {
    if (trials_grid.empty()) {
        throw InvalidArgument("ber_curve: empty trials grid");
    }
    if (seeds.empty()) {
        throw InvalidArgument("ber_curve: no seeds");
    }
    std::vector<BerPoint> out;
    for (auto n : trials_grid) {
        ChannelConfig c = cfg;
        c.trials_per_day = n;
        double sum = 0.0;
        for (auto seed : seeds) {
            sum += run_channel(c, random_bits(bits_len, seed), seed).ber;
        }
        out.push_back({n, sum / static_cast<double>(seeds.size())});
    }
    return out;
}

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Pearson chi-square test of independence on the 2x2 table of (sent, decoded).
/// A table with an empty row or column carries no evidence of dependence and
/// yields statistic 0.
inline ChiSquareResult independence_test(const Bits &sent, const Bits &decoded) {
    if (sent.size() != decoded.size() || sent.empty()) {
        throw InvalidArgument("independence_test: bit strings must be non-empty and equal length");
    }
    double table[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < sent.size(); ++i) {
        table[sent[i] ? 1 : 0][decoded[i] ? 1 : 0] += 1.0;
    }
    const double n = static_cast<double>(sent.size());
    const double rows[2] = {table[0][0] + table[0][1], table[1][0] + table[1][1]};
    const double cols[2] = {table[0][0] + table[1][0], table[0][1] + table[1][1]};
    ChiSquareResult r;
    if (rows[0] == 0 || rows[1] == 0 || cols[0] == 0 || cols[1] == 0) {
        return r;
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double expected = rows[i] * cols[j] / n;
            r.statistic += (table[i][j] - expected) * (table[i][j] - expected) / expected;
        }
    }
    // Survival function of chi-square with one degree of freedom.
    r.p_value = std::erfc(std::sqrt(r.statistic / 2.0));
    return r;
}

} // namespace bell_lab
