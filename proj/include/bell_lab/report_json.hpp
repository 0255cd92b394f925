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
 * JSON forms of the reports produced by the library. Field order is fixed
 * (ordered_json) so identical inputs serialize to identical bytes.
 */

#pragma once

#include <string>

#include "core.hpp"
#include "fit.hpp"
#include "montecarlo.hpp"
#include "scenario_json.hpp"
#include "signaling.hpp"

namespace bell_lab {

inline ordered_json to_json(const ChshReport &r) {
    ordered_json j;
    ordered_json e;
    for (auto s : kAllSettings) {
        e[std::string(key(s))] = r.e(s);
    }
    j["expectations"] = e;
    j["s_value"] = r.s_value;
    j["classical_bound"] = ChshReport::classical_bound;
    j["tsirelson_bound"] = ChshReport::tsirelson_bound;
    j["algebraic_bound"] = ChshReport::algebraic_bound;
    j["violates_classical"] = r.violates_classical;
    j["exceeds_tsirelson"] = r.exceeds_tsirelson;
    return j;
}

inline ordered_json to_json(const MarginalReport &r) {
    ordered_json j;
    j["side"] = std::string(key(r.side));
    j["outcome"] = static_cast<int>(r.outcome);
    ordered_json values = ordered_json::array();
    for (const auto &[ctx, v] : r.values) {
        ordered_json item;
        item["context"] = ctx;
        item["marginal"] = v;
        values.push_back(item);
    }
    j["values"] = values;
    j["max_discrepancy"] = r.max_discrepancy;
    j["epsilon"] = r.epsilon;
    j["holds"] = r.holds;
    j["include_solo"] = r.include_solo;
    return j;
}

inline ordered_json audit_to_json(const std::vector<MarginalReport> &reports, double epsilon) {
    ordered_json j;
    j["epsilon"] = epsilon;
    j["holds"] = audit_holds(reports);
    j["max_discrepancy"] = audit_max_discrepancy(reports);
    ordered_json arr = ordered_json::array();
    for (const auto &r : reports) {
        arr.push_back(to_json(r));
    }
    j["reports"] = arr;
    return j;
}

inline ordered_json to_json(const TrialCounts &c) {
    ordered_json j;
    j["n11"] = c.n11();
    j["n12"] = c.n12();
    j["n21"] = c.n21();
    j["n22"] = c.n22();
    j["n_total"] = c.total();
    return j;
}

inline ordered_json to_json(const EstimatedDistribution &e) {
    ordered_json j;
    j["point"] = to_json(e.point);
    ordered_json ci = ordered_json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        ordered_json cell;
        cell["lower"] = e.intervals[k].lower;
        cell["upper"] = e.intervals[k].upper;
        cell["halfwidth"] = e.ci_halfwidth(k);
        ci.push_back(cell);
    }
    j["wilson95"] = ci;
    j["n"] = e.n;
    return j;
}

inline ordered_json to_json(const EmpiricalScenario &e) {
    ordered_json j;
    j["seed"] = e.seed;
    ordered_json tables;
    for (auto s : kAllSettings) {
        ordered_json t;
        t["counts"] = to_json(e.counts[index(s)]);
        t["estimate"] = to_json(e.estimates[index(s)]);
        tables[std::string(key(s))] = t;
    }
    j["tables"] = tables;
    j["scenario"] = to_json(e.scenario);
    return j;
}

inline ordered_json to_json(const ChannelResult &r) {
    ordered_json j;
    j["sent_bits"] = format_bits(r.sent_bits);
    j["decoded_bits"] = format_bits(r.decoded_bits);
    j["ber"] = r.ber;
    j["daily_marginals"] = r.daily_marginals;
    ordered_json th;
    th["regime0"] = r.theoretical.regime0;
    th["regime1"] = r.theoretical.regime1;
    j["theoretical_marginals"] = th;
    j["threshold"] = r.threshold;
    j["degenerate"] = r.degenerate;
    j["warnings"] = r.warnings;
    return j;
}

inline ordered_json to_json(const Vec4 &v) {
    ordered_json arr = ordered_json::array();
    for (const auto &c : v) {
        arr.push_back(ordered_json::array({c.real(), c.imag()}));
    }
    return arr;
}

inline ordered_json to_json(const MeasurementBasis4 &b) {
    ordered_json j;
    j["kind"] = std::string(to_string(b.kind()));
    ordered_json vectors = ordered_json::array();
    for (const auto &v : b.vectors()) {
        vectors.push_back(to_json(v));
    }
    j["vectors"] = vectors;
    const auto ranks = b.schmidt_ranks();
    j["schmidt_ranks"] = ranks;
    if (const auto &lp = b.local_pair()) {
        ordered_json local;
        local["first"] = {{"theta", lp->first.theta}, {"phi", lp->first.phi}};
        local["second"] = {{"theta", lp->second.theta}, {"phi", lp->second.phi}};
        j["local_pair"] = local;
    }
    return j;
}

inline ordered_json to_json(const FitResult &r, const Scenario &target) {
    ordered_json j;
    j["class"] = std::string(to_string(r.representation_class));
    j["loss"] = r.loss;
    j["residual_linf"] = r.residual_linf;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["evaluations"] = r.evaluations;
    j["best_restart"] = r.best_restart;
    j["parameters"] = r.parameters;
    j["state"] = to_json(r.representation.state.amplitudes());
    ordered_json bases;
    for (auto s : kAllSettings) {
        bases[std::string(key(s))] = to_json(r.representation.basis(s));
    }
    j["bases"] = bases;
    j["predicted"] = to_json(predict(r.representation));
    j["target"] = to_json(target);
    return j;
}

} // namespace bell_lab
