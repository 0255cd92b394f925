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

#include <cmath>
#include <memory>

#include <catch_amalgamated.hpp>

#include "bell_lab/signaling.hpp"
#include "test_helpers.hpp"

using namespace bell_lab;
using namespace bell_lab::testing;
using Catch::Approx;

namespace {

ChannelConfig config_for(std::shared_ptr<const GenerativeModel> m, std::uint64_t trials,
                         Side alice = Side::A) {
    ChannelConfig c;
    c.model = std::move(m);
    c.trials_per_day = trials;
    c.alice_setting = alice;
    return c;
}

// P(X >= k) for X ~ Binomial(n, p), summed exactly in log space.
double binomial_upper_tail(int n, int k, double p) {
    double total = 0.0;
    for (int i = k; i <= n; ++i) {
        total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                          i * std::log(p) + (n - i) * std::log1p(-p));
    }
    return total;
}

} // namespace

TEST_CASE("theoretical marginals", "[signaling]") {
    const auto vessels = std::make_shared<VesselsModel>();
    auto m = theoretical_marginals(config_for(vessels, 500));
    CHECK(m.regime0 == 0.5);
    CHECK(m.regime1 == 1.0);
    CHECK(m.midpoint() == 0.75);

    m = theoretical_marginals(config_for(std::make_shared<CatsModel>(), 500));
    CHECK(m.regime0 == 0.5);
    CHECK(m.regime1 == 0.5);
    CHECK_FALSE(m.separated());

    m = theoretical_marginals(config_for(vessels, 500, Side::Ap));
    CHECK(m.regime0 == 1.0);
    CHECK(m.regime1 == 1.0);

    CHECK_THROWS_AS(theoretical_marginals(config_for(std::make_shared<AnimalActsData>(), 5)),
                    IncompleteData);
}

TEST_CASE("vessels channel decodes a short message", "[signaling]") {
    // A day under regime 0 reaches the 3/4 threshold with probability
    // P(Bin(500, 1/2) >= 375); regime 1 always gives frequency 1.
    const double tail = binomial_upper_tail(500, 375, 0.5);
    CHECK(tail == Approx(2.418404829826532e-30).epsilon(1e-6));

    auto cfg = config_for(std::make_shared<VesselsModel>(), 500);
    cfg.decoder_threshold = 0.75;
    const auto r = run_channel(cfg, parse_bits("1010"), 17);
    CHECK(format_bits(r.decoded_bits) == "1010");
    CHECK(r.ber == 0.0);
    CHECK(r.threshold == 0.75);
    CHECK_FALSE(r.degenerate);
    CHECK(r.warnings.empty());
    REQUIRE(r.daily_marginals.size() == 4);
    CHECK(r.daily_marginals[0] == 1.0);
    CHECK(r.daily_marginals[1] == Approx(0.5).margin(0.1));
}

TEST_CASE("a single one-trial day is deterministic per seed", "[signaling]") {
    const auto cfg = config_for(std::make_shared<VesselsModel>(), 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = run_channel(cfg, parse_bits("0"), seed);
        const auto b = run_channel(cfg, parse_bits("0"), seed);
        CHECK(a.decoded_bits == b.decoded_bits);
        CHECK(a.daily_marginals == b.daily_marginals);
        CHECK(a.decoded_bits.size() == 1);
    }
}

TEST_CASE("cats channel is at chance level", "[signaling][statistical]") {
    const auto cfg = config_for(std::make_shared<CatsModel>(), 100);
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = run_channel(cfg, random_bits(64, seed), seed);
        CHECK(r.degenerate);
        REQUIRE(r.warnings.size() == 1);
        CHECK(r.warnings[0].rfind("DegenerateChannel", 0) == 0);
        sum += r.ber;
    }
    CHECK(sum / 50 == Approx(0.5).margin(0.05));

    const auto r = run_channel(cfg, random_bits(200, 3), 3);
    CHECK(independence_test(r.sent_bits, r.decoded_bits).p_value >= 0.01);
}

TEST_CASE("parallel days reproduce the serial run", "[signaling]") {
    auto cfg = config_for(std::make_shared<SingletModel>(SingletModel::Angles{0, 0, 0.5, 2.0}), 37);
    cfg.alice_setting = Side::A;
    // The singlet satisfies the marginal law, so a custom threshold is fine.
    cfg.decoder_threshold = 0.5;
    const auto bits = random_bits(41, 8);
    const auto serial = run_channel(cfg, bits, 8);
    cfg.workers = 5;
    const auto parallel = run_channel(cfg, bits, 8);
    CHECK(serial.daily_marginals == parallel.daily_marginals);
    CHECK(serial.decoded_bits == parallel.decoded_bits);
}

TEST_CASE("ber curve", "[signaling][statistical]") {
    std::vector<std::uint64_t> seeds(20);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        seeds[i] = 100 + i;
    }
    const auto v = ber_curve(config_for(std::make_shared<VesselsModel>(), 1), 64, {1, 10, 100},
                             seeds);
    REQUIRE(v.size() == 3);
    CHECK(v[0].trials_per_day == 1);
    CHECK(v[0].mean_ber > v[1].mean_ber);
    CHECK(v[1].mean_ber > v[2].mean_ber);
    // One trial: a regime-0 day decodes as 1 half the time, regime 1 never errs.
    CHECK(v[0].mean_ber == Approx(0.25).margin(0.05));

    const auto c = ber_curve(config_for(std::make_shared<CatsModel>(), 1), 64, {1, 10, 100},
                             seeds);
    for (const auto &p : c) {
        CHECK(p.mean_ber >= 0.3);
        CHECK(p.mean_ber <= 0.7);
    }

    const auto single = ber_curve(config_for(std::make_shared<VesselsModel>(), 1), 8, {50}, {1});
    CHECK(single.size() == 1);
    CHECK(single[0].trials_per_day == 50);

    CHECK_THROWS_AS(ber_curve(config_for(std::make_shared<VesselsModel>(), 1), 8, {}, {1}),
                    InvalidArgument);
}

TEST_CASE("channel works exactly when the marginal law fails", "[signaling][property]") {
    Substream rng(31, 0, 0);
    for (int i = 0; i < 300; ++i) {
        Scenario s = random_scenario(rng);
        if (i % 4 == 0) {
            s = cats_tables();
        } else if (i % 4 == 1) {
            // Same A-side marginals in both contexts.
            s = Scenario(s.table(Setting::AB), s.table(Setting::AB), s.table(Setting::ApB),
                         s.table(Setting::ApBp));
        }
        const auto model = std::make_shared<ScenarioModel>(s);
        for (auto alice : {Side::A, Side::Ap}) {
            const auto m = theoretical_marginals(config_for(model, 10, alice));
            const auto check = marginal_check(s, alice, Outcome::One, 0.0);
            CHECK(m.separated() == !check.holds);
            CHECK(std::abs(m.regime0 - m.regime1) == Approx(check.max_discrepancy).margin(1e-15));
        }
    }
}

TEST_CASE("channel configuration errors", "[signaling]") {
    const auto vessels = std::make_shared<VesselsModel>();
    auto cfg = config_for(vessels, 10);
    CHECK_THROWS_AS(run_channel(cfg, {}, 1), InvalidArgument);

    auto same = cfg;
    same.bob_regime_for_1 = Side::B;
    CHECK_THROWS_AS(run_channel(same, parse_bits("01"), 1), InvalidArgument);

    auto wrong_party = cfg;
    wrong_party.alice_setting = Side::B;
    CHECK_THROWS_AS(run_channel(wrong_party, parse_bits("01"), 1), InvalidArgument);

    auto outside = cfg;
    outside.decoder_threshold = 0.3;
    CHECK_THROWS_AS(run_channel(outside, parse_bits("01"), 1), InvalidArgument);

    auto zero = cfg;
    zero.trials_per_day = 0;
    CHECK_THROWS_AS(run_channel(zero, parse_bits("01"), 1), InvalidArgument);

    CHECK_THROWS_AS(parse_bits(""), ParseError);
    CHECK_THROWS_AS(parse_bits("10a1"), ParseError);
    CHECK(format_bits(parse_bits("0110")) == "0110");
}

TEST_CASE("chi-square independence statistic", "[signaling]") {
    // 2x2 table [[2, 0], [0, 2]]: every expected count is 1, statistic 4.
    const auto r = independence_test(parse_bits("0011"), parse_bits("0011"));
    CHECK(r.statistic == Approx(4.0));
    CHECK(r.p_value == Approx(0.04550026389635857).epsilon(1e-9));

    const auto flat = independence_test(parse_bits("0101"), parse_bits("1111"));
    CHECK(flat.statistic == 0.0);
    CHECK(flat.p_value == 1.0);
    CHECK_THROWS_AS(independence_test(parse_bits("01"), parse_bits("011")), InvalidArgument);
}
