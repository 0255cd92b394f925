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

// A short walk through the library: exact analysis, sampling, the
// regime-encoding channel and a two-qubit fit.

#include <cstdio>
#include <memory>
#include <numbers>

#include "bell_lab/bell_lab.hpp"

using namespace bell_lab;

namespace {

void describe(const char *label, const Scenario &s) {
    const auto report = chsh(s);
    const auto audit = full_marginal_audit(s);
    std::printf("%-22s S = %+.4f  classical %s  marginal law %s (max gap %.4f)\n", label,
                report.s_value, report.violates_classical ? "violated" : "ok",
                audit_holds(audit) ? "holds" : "fails", audit_max_discrepancy(audit));
}

} // namespace

int main() {
    std::printf("exact scenarios\n");
    describe("vessels", scenario_of(VesselsModel{}));
    describe("cats", scenario_of(CatsModel{}));
    const double pi = std::numbers::pi;
    describe("singlet, B/B' swapped",
             scenario_of(SingletModel({0.0, pi / 2, 3 * pi / 4, pi / 4})));

    std::printf("\nsampled, 10^5 trials per setting\n");
    const auto emp = empirical_scenario(VesselsModel{}, 100000, 7, 4);
    describe("vessels (estimate)", emp.scenario);
    const auto &ab = emp.estimates[index(Setting::AB)];
    std::printf("  AB p12 = %.4f, 95%% interval [%.4f, %.4f]\n", ab.point.p12(),
                ab.intervals[1].lower, ab.intervals[1].upper);

    std::printf("\nregime-encoding channel, message 1011001\n");
    const auto bits = parse_bits("1011001");
    for (auto model : {std::shared_ptr<const GenerativeModel>(std::make_shared<VesselsModel>()),
                       std::shared_ptr<const GenerativeModel>(std::make_shared<CatsModel>())}) {
        ChannelConfig cfg;
        cfg.model = model;
        const auto r = run_channel(cfg, bits, 3);
        std::printf("  %-8s decoded %s  BER %.3f%s\n", model->name().c_str(),
                    format_bits(r.decoded_bits).c_str(), r.ber,
                    r.degenerate ? "  (no signal: marginals coincide)" : "");
    }

    std::printf("\ntwo-qubit fits of the vessels tables\n");
    const auto target = scenario_of(VesselsModel{});
    OptimizerConfig cfg;
    cfg.workers = 4;
    std::printf("  product bound  %.4f\n", product_residual_lower_bound(target));
    const auto prod = fit(target, RepresentationClass::product, cfg, 1);
    std::printf("  product fit    residual %.4f\n", prod.residual_linf);
    const auto ent = fit(target, RepresentationClass::entangled, cfg, 1);
    std::printf("  entangled fit  residual %.2e (%zu evaluations)\n", ent.residual_linf,
                ent.evaluations);
    return 0;
}
