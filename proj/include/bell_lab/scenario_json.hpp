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
 * JSON form of a Scenario:
 *
 *   {"AB":   {"p11": .., "p12": .., "p21": .., "p22": ..},
 *    "ABp":  {...}, "ApB": {...}, "ApBp": {...},
 *    "soloA": {"p1": .., "p2": ..}, ...}           // solo keys optional
 *
 * Optional "name" and "description" strings are accepted and ignored.
 * Numbers are written with round-trip precision, so parse(dump(s)) == s.
 */

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "core.hpp"

namespace bell_lab {

using ordered_json = nlohmann::ordered_json;

inline std::string solo_key(Side s) { return "solo" + std::string(key(s)); }

inline ordered_json to_json(const JointDistribution &d) {
    ordered_json j;
    j["p11"] = d.p11();
    j["p12"] = d.p12();
    j["p21"] = d.p21();
    j["p22"] = d.p22();
    return j;
}

inline ordered_json to_json(const SingleDistribution &d) {
    ordered_json j;
    j["p1"] = d.p1();
    j["p2"] = d.p2();
    return j;
}

inline ordered_json to_json(const Scenario &s) {
    ordered_json j = ordered_json::object();
    for (auto setting : kAllSettings) {
        j[std::string(key(setting))] = to_json(s.table(setting));
    }
    for (auto side : kAllSides) {
        if (const auto &solo = s.solo(side)) {
            j[solo_key(side)] = to_json(*solo);
        }
    }
    return j;
}

namespace detail {

inline double number_field(const nlohmann::json &obj, const char *field, const std::string &where) {
    auto it = obj.find(field);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field \"" + field + "\"");
    }
    if (!it->is_number()) {
        throw ParseError(where + ": field \"" + field + "\" is not a number");
    }
    return it->get<double>();
}

inline void expect_only(const nlohmann::json &obj, std::initializer_list<const char *> allowed,
                        const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char *a : allowed) {
            known = known || it.key() == a;
        }
        if (!known) {
            throw ParseError(where + ": unexpected key \"" + it.key() + "\"");
        }
    }
}

} // namespace detail

inline JointDistribution joint_from_json(const nlohmann::json &j, const std::string &where) {
    if (!j.is_object()) {
        throw ParseError(where + ": expected an object");
    }
    detail::expect_only(j, {"p11", "p12", "p21", "p22"}, where);
    try {
        return JointDistribution::from_probabilities(
            detail::number_field(j, "p11", where), detail::number_field(j, "p12", where),
            detail::number_field(j, "p21", where), detail::number_field(j, "p22", where));
    } catch (const InvalidArgument &e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline SingleDistribution single_from_json(const nlohmann::json &j, const std::string &where) {
    if (!j.is_object()) {
        throw ParseError(where + ": expected an object");
    }
    detail::expect_only(j, {"p1", "p2"}, where);
    try {
        return SingleDistribution::from_probabilities(detail::number_field(j, "p1", where),
                                                      detail::number_field(j, "p2", where));
    } catch (const InvalidArgument &e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline Scenario scenario_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ParseError("scenario: expected a JSON object");
    }
    detail::expect_only(j,
                        {"AB", "ABp", "ApB", "ApBp", "soloA", "soloAp", "soloB", "soloBp", "name",
                         "description"},
                        "scenario");
    std::array<std::optional<JointDistribution>, 4> tables;
    for (auto setting : kAllSettings) {
        const std::string k(key(setting));
        if (!j.contains(k)) {
            throw ParseError("scenario: missing table \"" + k + "\"");
        }
        tables[index(setting)] = joint_from_json(j.at(k), k);
    }
    Scenario::Solos solos;
    for (auto side : kAllSides) {
        const auto k = solo_key(side);
        if (j.contains(k)) {
            solos[index(side)] = single_from_json(j.at(k), k);
        }
    }
    return Scenario({*tables[0], *tables[1], *tables[2], *tables[3]}, solos);
}

inline Scenario parse_scenario(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("scenario: malformed JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace bell_lab
