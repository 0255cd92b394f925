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
 * The bell-lab command line: analyze, simulate, signal, fit and models.
 *
 * Exit codes: 0 success, 2 invalid input or arguments, 3 incomplete data,
 * 4 optimizer budget exhausted (the fit result is still printed).
 */

#pragma once

#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bell_lab/bell_lab.hpp"

namespace bell_lab::cli {

enum ExitCode : int { kOk = 0, kParse = 2, kIncomplete = 3, kBudget = 4 };

struct CommandConfig {
    std::string model;
    std::string input;
    std::string format = "json";
    std::uint64_t seed = 0;
    std::optional<double> epsilon;
    bool include_solo = false;
    std::string angles;
    std::uint64_t trials = 0;
    std::string bits;
    std::string alice = "A";
    std::string bob0 = "B";
    std::string bob1 = "Bp";
    std::optional<double> threshold;
    std::string cls = "entangled";
    std::size_t restarts = 20;
    std::size_t max_evaluations = 50000;
    bool closed_form_seed = true;
    unsigned workers = 1;
    std::string models_action;
    std::string models_name;
};

inline SingletModel::Angles parse_angles(const std::string &text) {
    SingletModel::Angles a{};
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= 4) {
            throw ParseError("--angles takes exactly four comma-separated values");
        }
        try {
            std::size_t used = 0;
            a[i] = std::stod(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error &) {
            throw ParseError("--angles: not a number: \"" + item + "\"");
        }
        ++i;
    }
    if (i != 4) {
        throw ParseError("--angles takes exactly four comma-separated values");
    }
    return a;
}

inline Side parse_side(const std::string &text) {
    if (auto s = side_from_key(text)) {
        return *s;
    }
    throw ParseError("unknown measurement \"" + text + "\" (use A, Ap, B or Bp)");
}

/// The model named by --model or the tables in --input; exactly one is allowed.
inline std::shared_ptr<const GenerativeModel> resolve_model(const CommandConfig &c) {
    if (c.model.empty() == c.input.empty()) {
        throw ParseError("give exactly one of --model or --input");
    }
    if (!c.input.empty()) {
        return std::make_shared<ScenarioModel>(load_scenario(c.input), c.input);
    }
    if (c.model != "singlet" && !c.angles.empty()) {
        throw ParseError("--angles applies to the singlet model only");
    }
    try {
        return make_model(c.model, c.angles.empty() ? SingletModel::kDefaultAngles
                                                    : parse_angles(c.angles));
    } catch (const InvalidArgument &e) {
        throw ParseError(e.what());
    }
}

inline ordered_json source_json(const CommandConfig &c) {
    ordered_json j;
    if (!c.input.empty()) {
        j["input"] = c.input;
    } else {
        j["model"] = c.model;
        if (c.model == "singlet") {
            j["angles"] = c.angles.empty() ? SingletModel::kDefaultAngles : parse_angles(c.angles);
        }
    }
    return j;
}

inline std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << (v == 0.0 ? 0.0 : v);
    return os.str();
}

inline void print_table(std::ostream &out, const Scenario &s, const ChshReport &chsh,
                        const std::vector<MarginalReport> &audit, double eps) {
    out << "setting   p11     p12     p21     p22     E\n";
    for (auto st : kAllSettings) {
        const auto &t = s.table(st);
        out << std::left << std::setw(8) << key(st) << std::right;
        for (double c : t.cells()) {
            out << "  " << fixed4(c);
        }
        out << "  " << fixed4(chsh.e(st)) << '\n';
    }
    out << "S = " << fixed4(chsh.s_value)
        << (chsh.violates_classical ? "  (violates |S| <= 2)" : "  (within |S| <= 2)")
        << (chsh.exceeds_tsirelson ? "  (exceeds 2*sqrt(2))" : "") << '\n';
    out << "marginal law (eps = " << eps << "): " << (audit_holds(audit) ? "holds" : "violated")
        << ", max discrepancy " << fixed4(audit_max_discrepancy(audit)) << '\n';
    for (const auto &r : audit) {
        out << "  " << std::left << std::setw(3) << key(r.side) << std::right << " outcome "
            << static_cast<int>(r.outcome) << ":";
        for (const auto &[ctx, v] : r.values) {
            out << ' ' << ctx << '=' << fixed4(v);
        }
        out << (r.holds ? "  ok" : "  VIOLATED") << '\n';
    }
}

inline void emit(std::ostream &out, const ordered_json &j) { out << j.dump(2) << '\n'; }

inline int cmd_analyze(const CommandConfig &c, std::ostream &out, std::ostream &err) {
    if (c.model.empty() == c.input.empty()) {
        throw ParseError("give exactly one of --model or --input");
    }
    // Exact tables get the algebraic tolerance, measured data the statistical one.
    const double eps = c.epsilon.value_or(c.input.empty() ? kSumTolerance : 0.01);
    if (c.model == "animal-acts") {
        const AnimalActsData data;
        ordered_json j;
        j["command"] = "analyze";
        j["source"] = source_json(c);
        j["error"] = "IncompleteData";
        j["message"] = "only the A-side outcome-1 cells of AB and AB' are published; "
                       "supply full tables with --input";
        j["published_marginal_check"] = to_json(data.published_marginal_check(eps, c.include_solo));
        emit(out, j);
        err << "error: incomplete data: " << j["message"].get<std::string>() << '\n';
        return kIncomplete;
    }
    const auto model = resolve_model(c);
    const Scenario s = scenario_of(*model);
    const auto report = chsh(s);
    const auto audit = full_marginal_audit(s, eps, c.include_solo);
    if (c.format == "table") {
        print_table(out, s, report, audit, eps);
        return kOk;
    }
    if (c.format == "csv") {
        out << "setting,p11,p12,p21,p22,expectation\n";
        out << std::setprecision(17);
        for (auto st : kAllSettings) {
            const auto &t = s.table(st);
            out << key(st) << ',' << t.p11() << ',' << t.p12() << ',' << t.p21() << ','
                << t.p22() << ',' << report.e(st) << '\n';
        }
        return kOk;
    }
    ordered_json j;
    j["command"] = "analyze";
    j["source"] = source_json(c);
    j["scenario"] = to_json(s);
    j["chsh"] = to_json(report);
    j["marginal_law"] = audit_to_json(audit, eps);
    emit(out, j);
    return kOk;
}

inline int cmd_simulate(const CommandConfig &c, std::ostream &out, std::ostream &) {
    if (c.trials == 0) {
        throw EmptyCounts("simulate: -n must be at least 1");
    }
    const auto model = resolve_model(c);
    const double eps = c.epsilon.value_or(0.01);
    const auto emp = empirical_scenario(*model, c.trials, c.seed, c.workers);
    const auto report = chsh(emp.scenario);
    const auto audit = full_marginal_audit(emp.scenario, eps, c.include_solo);
    if (c.format == "csv") {
        write_counts_csv(out, emp);
        return kOk;
    }
    if (c.format == "table") {
        out << "n per setting = " << c.trials << ", seed = " << c.seed << '\n';
        print_table(out, emp.scenario, report, audit, eps);
        return kOk;
    }
    ordered_json j;
    j["command"] = "simulate";
    j["source"] = source_json(c);
    j["n_per_setting"] = c.trials;
    j["empirical"] = to_json(emp);
    j["chsh"] = to_json(report);
    j["marginal_law"] = audit_to_json(audit, eps);
    emit(out, j);
    return kOk;
}

inline int cmd_signal(const CommandConfig &c, std::ostream &out, std::ostream &err) {
    ChannelConfig cfg;
    cfg.model = resolve_model(c);
    cfg.trials_per_day = c.trials == 0 ? 500 : c.trials;
    cfg.alice_setting = parse_side(c.alice);
    cfg.bob_regime_for_0 = parse_side(c.bob0);
    cfg.bob_regime_for_1 = parse_side(c.bob1);
    cfg.decoder_threshold = c.threshold;
    cfg.workers = c.workers;
    const Bits bits = c.bits.empty() ? random_bits(32, c.seed) : parse_bits(c.bits);
    ChannelResult r;
    try {
        r = run_channel(cfg, bits, c.seed);
    } catch (const InvalidArgument &e) {
        throw ParseError(e.what());
    }
    for (const auto &w : r.warnings) {
        err << "warning: " << w << '\n';
    }
    if (c.format == "table") {
        out << "sent    " << format_bits(r.sent_bits) << '\n'
            << "decoded " << format_bits(r.decoded_bits) << '\n'
            << "BER " << fixed4(r.ber) << ", threshold " << fixed4(r.threshold)
            << ", marginals " << fixed4(r.theoretical.regime0) << " / "
            << fixed4(r.theoretical.regime1) << '\n';
        return kOk;
    }
    ordered_json j;
    j["command"] = "signal";
    j["source"] = source_json(c);
    j["trials_per_day"] = cfg.trials_per_day;
    j["seed"] = c.seed;
    j["alice"] = c.alice;
    j["bob_regimes"] = {c.bob0, c.bob1};
    j["result"] = to_json(r);
    emit(out, j);
    return kOk;
}

inline int cmd_fit(const CommandConfig &c, std::ostream &out, std::ostream &err) {
    const auto model = resolve_model(c);
    const Scenario target = scenario_of(*model);
    RepresentationClass cls;
    if (c.cls == "product") {
        cls = RepresentationClass::product;
    } else if (c.cls == "entangled") {
        cls = RepresentationClass::entangled;
    } else {
        throw ParseError("--class must be product or entangled");
    }
    OptimizerConfig opt;
    opt.restarts = c.restarts;
    opt.max_evaluations = c.max_evaluations;
    opt.workers = c.workers;
    std::vector<Representation> seeds;
    // The vessels model has a known exact entangled representation; start one restart there.
    if (c.closed_form_seed && cls == RepresentationClass::entangled && c.model == "vessels") {
        seeds.push_back(vessels_representation());
    }
    if (opt.restarts + seeds.size() == 0) {
        throw ParseError("--restarts must be at least 1");
    }
    const auto r = fit(target, cls, opt, c.seed, seeds);
    if (c.format == "table") {
        out << "class " << to_string(cls) << ": loss " << r.loss << ", residual_linf "
            << r.residual_linf << (r.converged ? "" : " (budget exhausted)") << '\n';
        const auto pred = predict(r.representation);
        for (auto st : kAllSettings) {
            out << std::left << std::setw(6) << key(st) << std::right << ' '
                << to_string(r.representation.basis(st).kind());
            for (double v : pred.table(st).cells()) {
                out << "  " << fixed4(v);
            }
            out << '\n';
        }
    } else {
        ordered_json j;
        j["command"] = "fit";
        j["source"] = source_json(c);
        j["seed"] = c.seed;
        j["restarts"] = c.restarts;
        j["closed_form_seeds"] = seeds.size();
        j["product_residual_lower_bound"] = product_residual_lower_bound(target);
        j["fit"] = to_json(r, target);
        emit(out, j);
    }
    if (!r.converged) {
        err << "warning: optimizer budget exhausted; best result so far reported\n";
        return kBudget;
    }
    return kOk;
}

inline int cmd_models(const CommandConfig &c, std::ostream &out, std::ostream &) {
    if (c.models_action == "list") {
        ordered_json j;
        j["command"] = "models";
        j["models"] = builtin_model_names();
        emit(out, j);
        return kOk;
    }
    if (c.models_action != "export") {
        throw ParseError("models: action must be list or export");
    }
    if (c.models_name.empty()) {
        throw ParseError("models export: missing model name");
    }
    CommandConfig mc = c;
    mc.model = c.models_name;
    mc.input.clear();
    const auto model = resolve_model(mc);
    emit(out, to_json(scenario_of(*model)));
    return kOk;
}

/// Runs one invocation; argv[0] is the program name.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"bell-lab: CHSH statistics, marginal-law audits, coincidence-experiment "
                 "simulation, regime-encoding channels and two-qubit fits"};
    app.require_subcommand(1);
    CommandConfig c;

    auto add_source = [&](CLI::App *sub) {
        sub->add_option("--model", c.model, "built-in model: vessels, cats, singlet, animal-acts");
        sub->add_option("--input", c.input, "Scenario JSON file");
        sub->add_option("--angles", c.angles, "singlet angles A,A',B,B' in radians");
        sub->add_option("--seed", c.seed, "random seed (default 0)");
    };
    auto add_format = [&](CLI::App *sub, std::vector<std::string> formats) {
        sub->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember(std::move(formats)));
    };

    auto *analyze = app.add_subcommand("analyze", "CHSH value and marginal-law audit");
    add_source(analyze);
    add_format(analyze, {"json", "table", "csv"});
    analyze->add_option("--epsilon", c.epsilon, "marginal-law tolerance");
    analyze->add_flag("--include-solo", c.include_solo, "count the solo measurement as a context");

    auto *simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a scenario");
    add_source(simulate);
    add_format(simulate, {"json", "table", "csv"});
    simulate->add_option("-n,--trials", c.trials, "trials per setting")->required();
    simulate->add_option("--epsilon", c.epsilon, "marginal-law tolerance (default 0.01)");
    simulate->add_flag("--include-solo", c.include_solo, "count the solo measurement as a context");
    simulate->add_option("--workers", c.workers, "worker threads");

    auto *signal = app.add_subcommand("signal", "regime-encoding channel simulation");
    add_source(signal);
    add_format(signal, {"json", "table"});
    signal->add_option("--bits", c.bits, "message, e.g. 10110 (default: 32 random bits)");
    signal->add_option("--trials,--trials-per-day", c.trials, "trials per day (default 500)");
    signal->add_option("--alice", c.alice, "Alice's measurement (A or Ap)");
    signal->add_option("--bob0", c.bob0, "Bob's measurement encoding 0");
    signal->add_option("--bob1", c.bob1, "Bob's measurement encoding 1");
    signal->add_option("--threshold", c.threshold, "decoder threshold (default midpoint)");
    signal->add_option("--workers", c.workers, "worker threads");

    auto *fitcmd = app.add_subcommand("fit", "fit a two-qubit representation");
    add_source(fitcmd);
    add_format(fitcmd, {"json", "table"});
    fitcmd->add_option("--class", c.cls, "product or entangled");
    fitcmd->add_option("--restarts", c.restarts, "random restarts (default 20)");
    fitcmd->add_option("--max-evals", c.max_evaluations, "evaluations per restart");
    fitcmd->add_option("--workers", c.workers, "worker threads");
    fitcmd->add_flag("!--no-closed-form-seed", c.closed_form_seed,
                     "do not start a restart at a known exact representation");

    auto *models = app.add_subcommand("models", "list built-in models or export one");
    models->add_option("action", c.models_action, "list or export")->required();
    models->add_option("name", c.models_name, "model to export");
    models->add_option("--angles", c.angles, "singlet angles A,A',B,B' in radians");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (*analyze) {
            return cmd_analyze(c, out, err);
        }
        if (*simulate) {
            return cmd_simulate(c, out, err);
        }
        if (*signal) {
            return cmd_signal(c, out, err);
        }
        if (*fitcmd) {
            return cmd_fit(c, out, err);
        }
        return cmd_models(c, out, err);
    } catch (const IncompleteData &e) {
        err << "error: incomplete data: " << e.what() << '\n';
        return kIncomplete;
    } catch (const MissingSolo &e) {
        err << "error: incomplete data: " << e.what() << '\n';
        return kIncomplete;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kParse;
    }
}

} // namespace bell_lab::cli
