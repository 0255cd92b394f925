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
 * Probability tables for two-party coincidence experiments and the
 * statistics computed from them: expectation values, the CHSH combination
 * and the marginal distribution law.
 *
 * Settings are labelled by the pair of measurements performed. Side A
 * chooses between A and A' (written Ap in identifiers), side B between B and
 * B'. Every measurement has outcomes 1 and 2, so a coincidence experiment
 * has the four outcomes 11, 12, 21, 22, stored in that order.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bell_lab {

inline constexpr double kSumTolerance = 1e-9;

enum class Setting : std::size_t { AB = 0, ABp = 1, ApB = 2, ApBp = 3 };
enum class Side : std::size_t { A = 0, Ap = 1, B = 2, Bp = 3 };
enum class Outcome : std::size_t { One = 1, Two = 2 };

inline constexpr std::array<Setting, 4> kAllSettings{Setting::AB, Setting::ABp, Setting::ApB,
                                                     Setting::ApBp};
inline constexpr std::array<Side, 4> kAllSides{Side::A, Side::Ap, Side::B, Side::Bp};

constexpr std::size_t index(Setting s) { return static_cast<std::size_t>(s); }
constexpr std::size_t index(Side s) { return static_cast<std::size_t>(s); }

/// Serialization key of a setting: "AB", "ABp", "ApB", "ApBp".
constexpr std::string_view key(Setting s) {
    constexpr std::array<std::string_view, 4> names{"AB", "ABp", "ApB", "ApBp"};
    return names[index(s)];
}

constexpr std::string_view key(Side s) {
    constexpr std::array<std::string_view, 4> names{"A", "Ap", "B", "Bp"};
    return names[index(s)];
}

inline std::optional<Setting> setting_from_key(std::string_view k) {
    for (auto s : kAllSettings) {
        if (key(s) == k) {
            return s;
        }
    }
    return std::nullopt;
}

inline std::optional<Side> side_from_key(std::string_view k) {
    for (auto s : kAllSides) {
        if (key(s) == k) {
            return s;
        }
    }
    return std::nullopt;
}

/// The measurement each party performs in a coincidence setting.
constexpr Side side_a_of(Setting s) {
    return (s == Setting::AB || s == Setting::ABp) ? Side::A : Side::Ap;
}
constexpr Side side_b_of(Setting s) {
    return (s == Setting::AB || s == Setting::ApB) ? Side::B : Side::Bp;
}
constexpr Setting setting_of(Side a, Side b) {
    const bool primed_a = a == Side::Ap;
    const bool primed_b = b == Side::Bp;
    return primed_a ? (primed_b ? Setting::ApBp : Setting::ApB)
                    : (primed_b ? Setting::ABp : Setting::AB);
}
constexpr bool is_first_party(Side s) { return s == Side::A || s == Side::Ap; }

/// The two coincidence settings in which a measurement takes part.
constexpr std::array<Setting, 2> contexts_of(Side s) {
    switch (s) {
    case Side::A:
        return {Setting::AB, Setting::ABp};
    case Side::Ap:
        return {Setting::ApB, Setting::ApBp};
    case Side::B:
        return {Setting::AB, Setting::ApB};
    case Side::Bp:
        return {Setting::ABp, Setting::ApBp};
    }
    return {Setting::AB, Setting::AB};
}

/// Outcome distribution of a single two-outcome measurement.
class SingleDistribution {
  public:
    static SingleDistribution from_probabilities(double p1, double p2) {
        if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) {
            throw InvalidArgument("single distribution entries must lie in [0, 1]");
        }
        if (std::abs(p1 + p2 - 1.0) > kSumTolerance) {
            throw InvalidArgument("single distribution must sum to 1");
        }
        return SingleDistribution(p1, p2);
    }

    double p1() const { return p1_; }
    double p2() const { return p2_; }
    double operator[](Outcome o) const { return o == Outcome::One ? p1_ : p2_; }

    friend bool operator==(const SingleDistribution &, const SingleDistribution &) = default;

  private:
    SingleDistribution(double p1, double p2) : p1_(p1), p2_(p2) {}
    double p1_;
    double p2_;
};

/// Outcome table of one coincidence experiment, cells ordered 11, 12, 21, 22.
class JointDistribution {
  public:
    using Cells = std::array<double, 4>;

    static JointDistribution from_probabilities(double p11, double p12, double p21, double p22) {
        return from_probabilities(Cells{p11, p12, p21, p22});
    }

    static JointDistribution from_probabilities(const Cells &cells) {
        double total = 0.0;
        for (double c : cells) {
            if (!(c >= 0.0 && c <= 1.0)) {
                throw InvalidArgument("joint distribution entries must lie in [0, 1]");
            }
            total += c;
        }
        if (std::abs(total - 1.0) > kSumTolerance) {
            throw InvalidArgument("joint distribution must sum to 1 (got " +
                                  std::to_string(total) + ")");
        }
        return JointDistribution(cells);
    }

    /// Normalizes nonnegative weights (frequencies, counts) into a table.
    static JointDistribution from_weights(const Cells &weights) {
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw InvalidArgument("weights must be finite and nonnegative");
            }
            total += w;
        }
        if (!(total > 0.0)) {
            throw InvalidArgument("weights must not all be zero");
        }
        Cells cells{};
        for (std::size_t i = 0; i < 4; ++i) {
            cells[i] = weights[i] / total;
        }
        return JointDistribution(cells);
    }

    static JointDistribution uniform() { return JointDistribution({0.25, 0.25, 0.25, 0.25}); }

    double p11() const { return cells_[0]; }
    double p12() const { return cells_[1]; }
    double p21() const { return cells_[2]; }
    double p22() const { return cells_[3]; }
    const Cells &cells() const { return cells_; }
    double cell(Outcome a, Outcome b) const {
        return cells_[2 * (static_cast<std::size_t>(a) - 1) + (static_cast<std::size_t>(b) - 1)];
    }

    /// Probability of outcome `o` for the first party, summed over the second.
    double first_marginal(Outcome o) const {
        return o == Outcome::One ? cells_[0] + cells_[1] : cells_[2] + cells_[3];
    }
    /// Probability of outcome `o` for the second party, summed over the first.
    double second_marginal(Outcome o) const {
        return o == Outcome::One ? cells_[0] + cells_[2] : cells_[1] + cells_[3];
    }

    friend bool operator==(const JointDistribution &, const JointDistribution &) = default;

  private:
    explicit JointDistribution(const Cells &cells) : cells_(cells) {}
    Cells cells_;
};

/// The four coincidence tables of a CHSH experiment plus optional solo measurements.
class Scenario {
  public:
    using Tables = std::array<JointDistribution, 4>;
    using Solos = std::array<std::optional<SingleDistribution>, 4>;

    explicit Scenario(const Tables &tables, const Solos &solos = {})
        : tables_(tables), solos_(solos) {}

    Scenario(const JointDistribution &ab, const JointDistribution &abp,
             const JointDistribution &apb, const JointDistribution &apbp)
        : tables_{ab, abp, apb, apbp} {}

    const JointDistribution &table(Setting s) const { return tables_[index(s)]; }
    const Tables &tables() const { return tables_; }
    const std::optional<SingleDistribution> &solo(Side s) const { return solos_[index(s)]; }
    const Solos &solos() const { return solos_; }

    Scenario with_solo(Side s, const SingleDistribution &d) const {
        Scenario copy = *this;
        copy.solos_[index(s)] = d;
        return copy;
    }

    /// Marginal probability of `outcome` for measurement `side` within `setting`.
    double marginal(Side side, Setting setting, Outcome outcome) const {
        const auto &t = table(setting);
        return is_first_party(side) ? t.first_marginal(outcome) : t.second_marginal(outcome);
    }

    friend bool operator==(const Scenario &, const Scenario &) = default;

  private:
    Tables tables_;
    Solos solos_;
};

/// E = p11 - p12 - p21 + p22.
inline double expectation(const JointDistribution &d) {
    return d.p11() - d.p12() - d.p21() + d.p22();
}

struct ChshReport {
    static constexpr double classical_bound = 2.0;
    static constexpr double tsirelson_bound = 2.0 * std::numbers::sqrt2;
    static constexpr double algebraic_bound = 4.0;
    /// Slack absorbing floating-point rounding in the strict bound comparisons.
    static constexpr double bound_slack = 1e-12;

    std::array<double, 4> expectations{}; ///< indexed by Setting
    double s_value = 0.0;
    bool violates_classical = false;
    bool exceeds_tsirelson = false;

    double e(Setting s) const { return expectations[index(s)]; }
};

/// S = E(A',B') + E(A',B) + E(A,B') - E(A,B), flagged against 2 and 2*sqrt(2).
inline ChshReport chsh(const Scenario &s) {
    ChshReport r;
    for (auto setting : kAllSettings) {
        r.expectations[index(setting)] = expectation(s.table(setting));
    }
    r.s_value = r.e(Setting::ApBp) + r.e(Setting::ApB) + r.e(Setting::ABp) - r.e(Setting::AB);
    const double magnitude = std::abs(r.s_value);
    r.violates_classical = magnitude > ChshReport::classical_bound + ChshReport::bound_slack;
    r.exceeds_tsirelson = magnitude > ChshReport::tsirelson_bound + ChshReport::bound_slack;
    return r;
}

inline constexpr std::string_view kSoloContext = "solo";

struct MarginalReport {
    Side side = Side::A;
    Outcome outcome = Outcome::One;
    std::vector<std::pair<std::string, double>> values; ///< (context label, marginal)
    double max_discrepancy = 0.0;
    double epsilon = 0.0;
    bool holds = true;
    bool include_solo = false;
};

/// Builds a report from already-computed marginals; discrepancy is the largest
/// pairwise difference.
inline MarginalReport make_marginal_report(Side side, Outcome outcome,
                                           std::vector<std::pair<std::string, double>> values,
                                           double epsilon, bool include_solo) {
    if (!(epsilon >= 0.0)) {
        throw InvalidArgument("epsilon must be nonnegative");
    }
    MarginalReport r;
    r.side = side;
    r.outcome = outcome;
    r.values = std::move(values);
    r.epsilon = epsilon;
    r.include_solo = include_solo;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        for (std::size_t j = i + 1; j < r.values.size(); ++j) {
            r.max_discrepancy =
                std::max(r.max_discrepancy, std::abs(r.values[i].second - r.values[j].second));
        }
    }
    r.holds = r.max_discrepancy <= epsilon;
    return r;
}

/// Compares the marginal of one measurement across the partner's settings
/// (and, when requested, against the measurement performed alone).
inline MarginalReport marginal_check(const Scenario &s, Side side, Outcome outcome,
                                     double epsilon = kSumTolerance, bool include_solo = false) {
    std::vector<std::pair<std::string, double>> values;
    if (include_solo) {
        const auto &solo = s.solo(side);
        if (!solo) {
            throw MissingSolo("no solo distribution recorded for side " +
                              std::string(key(side)));
        }
        values.emplace_back(std::string(kSoloContext), (*solo)[outcome]);
    }
    for (auto ctx : contexts_of(side)) {
        values.emplace_back(std::string(key(ctx)), s.marginal(side, ctx, outcome));
    }
    return make_marginal_report(side, outcome, std::move(values), epsilon, include_solo);
}

/// Runs marginal_check for every side/outcome pair (8 reports).
inline std::vector<MarginalReport> full_marginal_audit(const Scenario &s,
                                                       double epsilon = kSumTolerance,
                                                       bool include_solo = false) {
    std::vector<MarginalReport> out;
    out.reserve(8);
    for (auto side : kAllSides) {
        for (auto outcome : {Outcome::One, Outcome::Two}) {
            out.push_back(marginal_check(s, side, outcome, epsilon, include_solo));
        }
    }
    return out;
}

inline bool audit_holds(const std::vector<MarginalReport> &reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const MarginalReport &r) { return r.holds; });
}

inline double audit_max_discrepancy(const std::vector<MarginalReport> &reports) {
    double worst = 0.0;
    for (const auto &r : reports) {
        worst = std::max(worst, r.max_discrepancy);
    }
    return worst;
}

} // namespace bell_lab
