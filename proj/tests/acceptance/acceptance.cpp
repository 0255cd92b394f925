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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bell_lab/bell_lab.hpp"
#include "cli_app.hpp"

using namespace bell_lab;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
        }
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [FAILED]");
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

nlohmann::json run_cli(std::vector<std::string> args, int &code) {
    args.insert(args.begin(), "bell-lab");
    std::vector<char *> argv;
    for (auto &a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out;
    std::ostringstream err;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return nlohmann::json::parse(out.str());
}

struct Criterion {
    int number;
    std::string name;
    double time_limit_s;
    std::function<Verdict()> body;
};

const double kTsirelson = 2.0 * std::numbers::sqrt2;

Verdict vessels_exact() {
    Verdict o;
    int code = 0;
    const auto j = run_cli({"analyze", "--model", "vessels"}, code);
    o.require(code == 0, "exit " + std::to_string(code));
    const auto &e = j["chsh"]["expectations"];
    const double s = j["chsh"]["s_value"].get<double>();
    o.require(std::abs(e["AB"].get<double>() + 1.0) <= 1e-12 &&
                  std::abs(e["ABp"].get<double>() - 1.0) <= 1e-12 &&
                  std::abs(e["ApB"].get<double>() - 1.0) <= 1e-12 &&
                  std::abs(e["ApBp"].get<double>() - 1.0) <= 1e-12,
              "E = (-1, 1, 1, 1)");
    o.require(std::abs(s - 4.0) <= 1e-12, "S = " + fmt(s));
    const auto &a1 = j["marginal_law"]["reports"][0];
    const double m0 = a1["values"][0]["marginal"].get<double>();
    const double m1 = a1["values"][1]["marginal"].get<double>();
    const double d = a1["max_discrepancy"].get<double>();
    o.require(a1["side"] == "A" && a1["outcome"] == 1 && std::abs(m0 - 0.5) <= 1e-12 &&
                  std::abs(m1 - 1.0) <= 1e-12 && std::abs(d - 0.5) <= 1e-12,
              "A marginals {" + fmt(m0) + ", " + fmt(m1) + "}, discrepancy " + fmt(d));
    return o;
}

Verdict cats_exact() {
    Verdict o;
    const auto s = scenario_of(CatsModel{});
    const double v = chsh(s).s_value;
    o.require(std::abs(v - 4.0) <= 1e-12, "S = " + fmt(v));
    const auto audit = full_marginal_audit(s, 1e-12);
    o.require(audit_holds(audit), "audit holds at 1e-12, max discrepancy " +
                                      fmt(audit_max_discrepancy(audit)));
    return o;
}

Verdict animal_acts() {
    Verdict o;
    const AnimalActsData data;
    const auto r = data.published_marginal_check(kSumTolerance, false);
    o.require(r.values.size() == 2 && std::abs(r.values[0].second - 0.679) <= 1e-9 &&
                  std::abs(r.values[1].second - 0.618) <= 1e-9,
              "values " + fmt(r.values[0].second) + ", " + fmt(r.values[1].second));
    o.require(std::abs(r.max_discrepancy - 0.061) <= 1e-9,
              "discrepancy " + fmt(r.max_discrepancy));
    const auto solo = data.published_marginal_check(kSumTolerance, true);
    o.require(solo.values.size() == 3 && solo.values[0].first == "solo" &&
                  std::abs(solo.values[0].second - 0.531) <= 1e-9,
              "with solo adds " + fmt(solo.values[0].second));
    return o;
}

Verdict singlet_calibration() {
    Verdict o;
    const SingletModel model(SingletModel::kDefaultAngles);
    const double exact = chsh(scenario_of(model)).s_value;
    o.require(std::abs(exact - kTsirelson) <= 1e-9, "exact S = " + fmt(exact));
    const double mc = chsh(empirical_scenario(model, 100000, 7).scenario).s_value;
    o.require(std::abs(mc - kTsirelson) <= 0.05, "Monte Carlo S = " + fmt(mc));
    if (!o.pass) {
        // Informational: E = -cos(a - b) cancels pairwise at these angles;
        // exchanging the B and B' angles reaches the bound in magnitude.
        const auto &d = SingletModel::kDefaultAngles;
        const SingletModel swapped(SingletModel::Angles{d[0], d[1], d[3], d[2]});
        o.detail += "; note: swapped B/B' angles give exact S = " +
                    fmt(chsh(scenario_of(swapped)).s_value);
    }
    return o;
}

Verdict monte_carlo_fidelity() {
    Verdict o;
    const VesselsModel vessels;
    const CatsModel cats;
    for (const GenerativeModel *m : {static_cast<const GenerativeModel *>(&vessels),
                                     static_cast<const GenerativeModel *>(&cats)}) {
        const auto exact = scenario_of(*m);
        const auto a = empirical_scenario(*m, 100000, 11, 1);
        const auto b = empirical_scenario(*m, 100000, 11, 1);
        const auto c = empirical_scenario(*m, 100000, 11, 4);
        double worst = 0.0;
        bool same = true;
        for (auto s : kAllSettings) {
            worst = std::max(worst, max_cell_error(a.scenario.table(s), exact.table(s)));
            same = same && a.counts[index(s)] == b.counts[index(s)] &&
                   a.counts[index(s)] == c.counts[index(s)];
        }
        o.require(worst <= 0.01, m->name() + " max cell error " + fmt(worst));
        o.require(same, m->name() + " identical across reruns and 1/4 workers");
    }
    return o;
}

Verdict signaling_dichotomy() {
    Verdict o;
    ChannelConfig v;
    v.model = std::make_shared<VesselsModel>();
    v.trials_per_day = 500;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = run_channel(v, random_bits(32, seed), seed);
        worst = std::max(worst, r.ber);
    }
    o.require(worst == 0.0, "vessels worst BER over 20 seeds " + fmt(worst));

    ChannelConfig c;
    c.model = std::make_shared<CatsModel>();
    c.trials_per_day = 500;
    const auto bits = random_bits(200, 1);
    const auto r = run_channel(c, bits, 1);
    const auto chi = independence_test(bits, r.decoded_bits);
    o.require(chi.p_value >= 0.01, "cats chi-square p = " + fmt(chi.p_value) + ", BER " +
                                        fmt(r.ber));
    return o;
}

Verdict product_identity() {
    Verdict o;
    Substream rng(2026, 0, 0);
    auto draw = [&] {
        std::array<LocalBasis, 4> local;
        const auto state = random_state(rng);
        for (auto &l : local) {
            l = random_local_basis(rng);
        }
        return Representation::product(state, local);
    };
    double worst_gap = 0.0;
    for (int i = 0; i < 1000; ++i) {
        worst_gap = std::max(worst_gap, audit_max_discrepancy(full_marginal_audit(predict(draw()))));
    }
    o.require(worst_gap <= 1e-9, "1000 draws, max discrepancy " + fmt(worst_gap));
    double worst_s = 0.0;
    for (int i = 0; i < 10000; ++i) {
        worst_s = std::max(worst_s, std::abs(chsh(predict(draw())).s_value));
    }
    o.require(worst_s <= kTsirelson + 1e-9, "10^4 draws, max |S| " + fmt(worst_s));
    return o;
}

Verdict vessels_representation_check() {
    Verdict o;
    const auto rep = vessels_representation();
    const auto p = predict(rep);
    const auto exact = scenario_of(VesselsModel{});
    double worst = 0.0;
    for (auto s : kAllSettings) {
        worst = std::max(worst, max_cell_error(p.table(s), exact.table(s)));
    }
    o.require(worst <= 1e-12, "max cell error " + fmt(worst));
    for (auto s : {Setting::ABp, Setting::ApB, Setting::ApBp}) {
        const auto ranks = rep.basis(s).schmidt_ranks();
        o.require(std::find(ranks.begin(), ranks.end(), 2) != ranks.end(),
                  std::string(key(s)) + " has a rank-2 vector");
    }
    return o;
}

Verdict fit_separation() {
    Verdict o;
    const auto target = scenario_of(VesselsModel{});
    // Triangle inequality: a product fit gives A the same marginal m in both
    // contexts, and |m - 0.5| + |m - 1.0| >= 0.5 is spread over two cells per context.
    double gap = 0.0;
    for (auto side : kAllSides) {
        const auto ctx = contexts_of(side);
        gap = std::max(gap, std::abs(target.marginal(side, ctx[0], Outcome::One) -
                                     target.marginal(side, ctx[1], Outcome::One)));
    }
    const double bound = gap / 4.0;
    o.require(std::abs(bound - 0.125) <= 1e-15, "bound " + fmt(bound));
    const auto prod = fit(target, RepresentationClass::product, OptimizerConfig{}, 0);
    o.require(prod.residual_linf >= bound, "product residual " + fmt(prod.residual_linf));
    const auto ent = fit(target, RepresentationClass::entangled, OptimizerConfig{}, 0,
                         {vessels_representation()});
    o.require(ent.residual_linf <= 1e-6, "entangled residual " + fmt(ent.residual_linf));
    return o;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "vessels exact analysis", 1.0, vessels_exact},
        {2, "cats exact analysis", 1.0, cats_exact},
        {3, "animal acts published marginals", 1.0, animal_acts},
        {4, "singlet calibration", 10.0, singlet_calibration},
        {5, "monte carlo fidelity", 30.0, monte_carlo_fidelity},
        {6, "signaling dichotomy", 60.0, signaling_dichotomy},
        {7, "product measurement marginal identity", 60.0, product_identity},
        {8, "entangled representation of vessels", 1.0, vessels_representation_check},
        {9, "fit residual separation", 300.0, fit_separation},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict o;
        try {
            o = c.body();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(secs < c.time_limit_s, "runtime " + fmt(secs) + " s < " + fmt(c.time_limit_s) + " s");
        failures += o.pass ? 0 : 1;
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.number, c.name.c_str(),
                    o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
