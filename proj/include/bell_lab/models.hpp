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
 * Generative models of coincidence experiments. Each model has a closed-form
 * table per setting and a latent-variable sampler that realizes the
 * mechanism producing it.
 */

#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace bell_lab {

/// One coincidence outcome such as "12" (first party 1, second party 2).
struct OutcomePair {
    Outcome a = Outcome::One;
    Outcome b = Outcome::One;

    /// Position in the 11, 12, 21, 22 cell order.
    constexpr std::size_t cell_index() const {
        return 2 * (static_cast<std::size_t>(a) - 1) + (static_cast<std::size_t>(b) - 1);
    }
    /// Two-digit label: 11, 12, 21 or 22.
    constexpr int code() const {
        return 10 * static_cast<int>(a) + static_cast<int>(b);
    }
    static constexpr OutcomePair from_cell(std::size_t cell) {
        return {cell < 2 ? Outcome::One : Outcome::Two,
                cell % 2 == 0 ? Outcome::One : Outcome::Two};
    }
    friend constexpr bool operator==(OutcomePair, OutcomePair) = default;
};

constexpr Outcome outcome_if(bool first) { return first ? Outcome::One : Outcome::Two; }

/// Inverse-CDF draw of one cell from a table.
inline OutcomePair sample_table(const JointDistribution &d, Substream &rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        acc += d.cells()[i];
        if (u < acc) {
            return OutcomePair::from_cell(i);
        }
    }
    // Guard against the residual mass of a table summing to slightly below 1.
    for (std::size_t i = 4; i-- > 0;) {
        if (d.cells()[i] > 0.0) {
            return OutcomePair::from_cell(i);
        }
    }
    return OutcomePair::from_cell(3);
}

class GenerativeModel {
  public:
    virtual ~GenerativeModel() = default;

    virtual std::string name() const = 0;
    virtual JointDistribution exact_distribution(Setting setting) const = 0;
    virtual OutcomePair sample(Setting setting, Substream &rng) const = 0;

    /// Distribution of a measurement performed without a partner, if the model defines one.
    virtual std::optional<SingleDistribution> solo(Side) const { return std::nullopt; }

    /// Draw number `draw` of the substream assigned to `setting` under `seed`.
    OutcomePair sample(Setting setting, std::uint64_t seed, std::uint64_t draw) const {
        Substream rng(seed, streams::coincidence(index(setting)), draw);
        return sample(setting, rng);
    }
};

/// Exact tables of every setting, with solo distributions when the model has them.
inline Scenario scenario_of(const GenerativeModel &m) {
    Scenario::Solos solos;
    for (auto side : kAllSides) {
        solos[index(side)] = m.solo(side);
    }
    return Scenario({m.exact_distribution(Setting::AB), m.exact_distribution(Setting::ABp),
                     m.exact_distribution(Setting::ApB), m.exact_distribution(Setting::ApBp)},
                    solos);
}

// ---------------------------------------------------------------------------
// Vessels of water connected by a tube.
//
// Measurement A (B) siphons the left (right) vessel into a reference vessel;
// outcome 1 when more than the threshold volume is collected. Measurement
// A' (B') takes a spoonful and checks transparency, which always succeeds.
// Siphoning both sides splits the water at random; siphoning one side while
// the other takes a spoonful drains all water to the siphon.

struct VesselsTrial {
    double left_collected = 0.0;  ///< liters collected on side A (0 for a spoon test)
    double right_collected = 0.0; ///< liters collected on side B
    OutcomePair outcome;
};

class VesselsModel final : public GenerativeModel {
  public:
    static constexpr double total_volume = 20.0;
    static constexpr double threshold = 10.0;

    std::string name() const override { return "vessels"; }

    JointDistribution exact_distribution(Setting setting) const override {
        if (setting == Setting::AB) {
            return JointDistribution::from_probabilities(0.0, 0.5, 0.5, 0.0);
        }
        return JointDistribution::from_probabilities(1.0, 0.0, 0.0, 0.0);
    }

    VesselsTrial trial(Setting setting, Substream &rng) const {
        VesselsTrial t;
        const bool siphon_left = side_a_of(setting) == Side::A;
        const bool siphon_right = side_b_of(setting) == Side::B;
        if (siphon_left && siphon_right) {
            t.left_collected = total_volume * rng.uniform();
            t.right_collected = total_volume - t.left_collected;
        } else if (siphon_left) {
            t.left_collected = total_volume;
        } else if (siphon_right) {
            t.right_collected = total_volume;
        }
        // The water is transparent, so a spoon test always gives outcome 1.
        const bool a1 = siphon_left ? t.left_collected > threshold : true;
        const bool b1 = siphon_right ? t.right_collected > threshold : true;
        t.outcome = {outcome_if(a1), outcome_if(b1)};
        return t;
    }

    OutcomePair sample(Setting setting, Substream &rng) const override {
        return trial(setting, rng).outcome;
    }
    using GenerativeModel::sample;
};

// ---------------------------------------------------------------------------
// Two cats, Glimmer and Inkling, that either both wear a bell or both do not.
//
// A: Glimmer is shown; outcome 1 iff (thought Glimmer and bell) or
//    (thought Inkling and no bell).
// B: Inkling is shown; outcome 1 iff (thought Inkling and bell) or
//    (thought Glimmer and no bell).
// A', B': outcome 1 iff the shown cat wears a bell.
// The owner's thought is drawn only when both cats are shown together (AB).

enum class Cat { Glimmer, Inkling };

struct CatsTrial {
    bool bell = false;
    std::optional<Cat> thought;
    OutcomePair outcome;
};

class CatsModel final : public GenerativeModel {
  public:
    explicit CatsModel(double bell_probability = 0.5) : bell_probability_(bell_probability) {
        if (!(bell_probability >= 0.0 && bell_probability <= 1.0)) {
            throw InvalidArgument("bell probability must lie in [0, 1]");
        }
    }

    double bell_probability() const { return bell_probability_; }
    std::string name() const override { return "cats"; }

    JointDistribution exact_distribution(Setting setting) const override {
        if (setting == Setting::AB) {
            return JointDistribution::from_probabilities(0.0, 0.5, 0.5, 0.0);
        }
        return JointDistribution::from_probabilities(bell_probability_, 0.0, 0.0,
                                                     1.0 - bell_probability_);
    }

    CatsTrial trial(Setting setting, Substream &rng) const {
        CatsTrial t;
        t.bell = rng.bernoulli(bell_probability_);
        if (setting == Setting::AB) {
            t.thought = rng.bernoulli(0.5) ? Cat::Glimmer : Cat::Inkling;
            const bool glimmer = *t.thought == Cat::Glimmer;
            const bool a1 = glimmer == t.bell;
            const bool b1 = glimmer != t.bell;
            t.outcome = {outcome_if(a1), outcome_if(b1)};
        } else {
            t.outcome = {outcome_if(t.bell), outcome_if(t.bell)};
        }
        return t;
    }

    OutcomePair sample(Setting setting, Substream &rng) const override {
        return trial(setting, rng).outcome;
    }
    using GenerativeModel::sample;

  private:
    double bell_probability_;
};

// ---------------------------------------------------------------------------
// Spin-1/2 singlet measured along coplanar directions.

class SingletModel final : public GenerativeModel {
  public:
    using Angles = std::array<double, 4>; ///< indexed by Side: A, A', B, B'

    static constexpr Angles kDefaultAngles{0.0, std::numbers::pi / 2, std::numbers::pi / 4,
                                           3 * std::numbers::pi / 4};

    explicit SingletModel(const Angles &angles = kDefaultAngles) : angles_(angles) {
        for (double a : angles) {
            if (!std::isfinite(a)) {
                throw InvalidArgument("singlet angles must be finite");
            }
        }
    }

    const Angles &angles() const { return angles_; }
    double angle(Side s) const { return angles_[index(s)]; }
    std::string name() const override { return "singlet"; }

    /// p11 = p22 = (1 - cos t)/4, p12 = p21 = (1 + cos t)/4.
    static JointDistribution table_for(double theta) {
        const double c = std::cos(theta);
        const double same = (1.0 - c) / 4.0;
        const double diff = (1.0 + c) / 4.0;
        return JointDistribution::from_probabilities(same, diff, diff, same);
    }

    double angle_difference(Setting setting) const {
        return angle(side_a_of(setting)) - angle(side_b_of(setting));
    }

    JointDistribution exact_distribution(Setting setting) const override {
        return table_for(angle_difference(setting));
    }

    OutcomePair sample(Setting setting, Substream &rng) const override {
        return sample_table(exact_distribution(setting), rng);
    }
    using GenerativeModel::sample;

  private:
    Angles angles_;
};

// ---------------------------------------------------------------------------
// Any fixed set of tables, sampled cell-wise.

class ScenarioModel final : public GenerativeModel {
  public:
    explicit ScenarioModel(Scenario scenario, std::string label = "scenario")
        : scenario_(std::move(scenario)), label_(std::move(label)) {}

    std::string name() const override { return label_; }
    JointDistribution exact_distribution(Setting setting) const override {
        return scenario_.table(setting);
    }
    std::optional<SingleDistribution> solo(Side side) const override {
        return scenario_.solo(side);
    }
    OutcomePair sample(Setting setting, Substream &rng) const override {
        return sample_table(scenario_.table(setting), rng);
    }
    using GenerativeModel::sample;

  private:
    Scenario scenario_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Human-subject data for the combination "The Animal Acts".
//
// Only the cells below were published alongside the marginal-law argument.
// Full tables must be supplied (Scenario JSON) before the model can answer
// exact_distribution or sample.

class AnimalActsData final : public GenerativeModel {
  public:
    static constexpr double solo_a1 = 0.531;   // Horse, no animal sound offered
    static constexpr double ab_11 = 0.049;     // The Horse Growls
    static constexpr double ab_12 = 0.630;     // The Horse Whinnies
    static constexpr double abp_11 = 0.593;    // The Horse Snorts
    static constexpr double abp_12 = 0.025;    // The Horse Meows
    /// Published values carry three decimals.
    static constexpr double kPublishedRounding = 5e-4;

    AnimalActsData() = default;

    /// Attaches full tables; they must reproduce the published cells.
    explicit AnimalActsData(Scenario tables) {
        check_consistent(tables);
        tables_ = std::move(tables);
    }

    bool has_tables() const { return tables_.has_value(); }
    std::string name() const override { return "animal-acts"; }

    static SingleDistribution solo_a() {
        return SingleDistribution::from_probabilities(solo_a1, 1.0 - solo_a1);
    }

    std::optional<SingleDistribution> solo(Side side) const override {
        if (side == Side::A) {
            return solo_a();
        }
        return tables_ ? tables_->solo(side) : std::nullopt;
    }

    JointDistribution exact_distribution(Setting setting) const override {
        if (!tables_) {
            throw IncompleteData("animal-acts: only the A-side outcome-1 cells of AB and AB' "
                                 "are published; load full tables to query setting " +
                                 std::string(key(setting)));
        }
        return tables_->table(setting);
    }

    OutcomePair sample(Setting setting, Substream &rng) const override {
        return sample_table(exact_distribution(setting), rng);
    }
    using GenerativeModel::sample;

    /// Marginal law for side A, outcome 1, computed from the published cells alone.
    MarginalReport published_marginal_check(double epsilon, bool include_solo) const {
        std::vector<std::pair<std::string, double>> values;
        if (include_solo) {
            values.emplace_back(std::string(kSoloContext), solo_a1);
        }
        values.emplace_back(std::string(key(Setting::AB)), ab_11 + ab_12);
        values.emplace_back(std::string(key(Setting::ABp)), abp_11 + abp_12);
        return make_marginal_report(Side::A, Outcome::One, std::move(values), epsilon,
                                    include_solo);
    }

  private:
    static void check_consistent(const Scenario &s) {
        auto near = [](double got, double published) {
            return std::abs(got - published) <= kPublishedRounding + 1e-12;
        };
        const auto &ab = s.table(Setting::AB);
        const auto &abp = s.table(Setting::ABp);
        if (!near(ab.p11(), ab_11) || !near(ab.p12(), ab_12) || !near(abp.p11(), abp_11) ||
            !near(abp.p12(), abp_12)) {
            throw InvalidArgument("animal-acts tables disagree with the published cells");
        }
        if (const auto &sa = s.solo(Side::A); sa && !near(sa->p1(), solo_a1)) {
            throw InvalidArgument("animal-acts solo A disagrees with the published value");
        }
    }

    std::optional<Scenario> tables_;
};

inline const std::vector<std::string> &builtin_model_names() {
    static const std::vector<std::string> names{"vessels", "cats", "singlet", "animal-acts"};
    return names;
}

/// Built-in model by name; `singlet_angles` applies to "singlet" only.
inline std::unique_ptr<GenerativeModel>
make_model(const std::string &name,
           const SingletModel::Angles &singlet_angles = SingletModel::kDefaultAngles) {
    if (name == "vessels") {
        return std::make_unique<VesselsModel>();
    }
    if (name == "cats") {
        return std::make_unique<CatsModel>();
    }
    if (name == "singlet") {
        return std::make_unique<SingletModel>(singlet_angles);
    }
    if (name == "animal-acts") {
        return std::make_unique<AnimalActsData>();
    }
    throw InvalidArgument("unknown model \"" + name + "\"");
}

} // namespace bell_lab
