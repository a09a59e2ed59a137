// Copyright 2026 The qbanyan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Structured reports: JSON for everything, CSV for scalar tables.

#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "qbanyan/banyan.hpp"

#ifndef QBANYAN_VERSION
#define QBANYAN_VERSION "0.0.0"
#endif

namespace qbanyan {

using Json = nlohmann::ordered_json;

/// Amplitudes as [configuration, re, im] triples sorted by configuration.
inline Json state_json(const PhotonicState &state) {
    std::vector<std::tuple<std::string, double, double>> rows;
    for (const auto &[config, amp] : state.terms()) {
        rows.emplace_back(config.str(), amp.real(), amp.imag());
    }
    std::sort(rows.begin(), rows.end());
    Json out = Json::array();
    for (const auto &[c, re, im] : rows) {
        out.push_back(Json::array({c, re, im}));
    }
    return out;
}

inline Json complex_json(Amplitude a) {
    return Json::array({a.real(), a.imag()});
}

inline Json qubit_json(const QubitSpec &q) {
    return Json{{"H", complex_json(q.h())}, {"V", complex_json(q.v())}};
}

inline Json fused_json(const FusedState &f) {
    return Json{{"carrier", f.carrier()},
                {"bin0_H", complex_json(f(0, Polarization::H))},
                {"bin0_V", complex_json(f(0, Polarization::V))},
                {"bin1_H", complex_json(f(1, Polarization::H))},
                {"bin1_V", complex_json(f(1, Polarization::V))}};
}

inline Json port_json(const PortContent &p) {
    Json j{{"kind", to_string(p.kind())}};
    if (p.kind() == PortContent::Kind::Qubit) {
        j["qubit"] = qubit_json(p.qubit());
    } else if (p.kind() == PortContent::Kind::Fused) {
        j["fused"] = fused_json(p.fused());
    }
    return j;
}

inline Json pattern_json(const ClickPattern &p) {
    Json j = Json::object();
    for (const auto &[k, v] : p) {
        j[k] = v;
    }
    return j;
}

inline Json route_json(const RouteResult &r) {
    Json settings = Json::array();
    for (const auto &s : r.settings) {
        settings.push_back({{"stage", s.stage},
                            {"switch", s.index},
                            {"role", to_string(s.role)},
                            {"controls", s.controls.str()},
                            {"in_upper", s.in_packets[0]},
                            {"in_lower", s.in_packets[1]},
                            {"out_upper", s.out_packets[0]},
                            {"out_lower", s.out_packets[1]},
                            {"probability", s.role == UnitRole::Idle ? 1.0 : s.probability}});
    }
    Json segments = Json::array();
    for (const auto &f : r.fused_segments) {
        segments.push_back({{"fused_at_stage", f.fused_at_stage},
                            {"split_at_stage", f.split_at_stage},
                            {"packets", {f.packet_a, f.packet_b}}});
    }
    Json delivered = Json::array();
    for (const auto &[port, d] : r.delivered) {
        delivered.push_back({{"output", port}, {"packet", d.packet}, {"payload", port_json(d.payload)}});
    }
    Json j{{"status", to_string(r.status)},
           {"mode", to_string(r.mode)},
           {"success_probability", r.success_probability},
           {"engaged_fredkin_units", r.engaged_fredkin_units()},
           {"fused_segment_count", r.fused_segments.size()}};
    if (r.conflict) {
        j["conflict"] = {{"stage", r.conflict->stage}, {"switch", r.conflict->index}};
    }
    j["settings"] = settings;
    j["fused_segments"] = segments;
    j["delivered"] = delivered;
    return j;
}

inline Json stats_json(const MonteCarloStats &s) {
    return Json{{"trials", s.trials},
                {"delivered", s.delivered},
                {"herald_failed", s.herald_failed},
                {"blocked", s.blocked},
                {"unsupported", s.unsupported},
                {"delivery_rate", s.delivery_rate},
                {"delivery_rate_stderr", s.delivery_rate_stderr},
                {"herald_failure_rate", s.herald_failure_rate},
                {"herald_failure_rate_stderr", s.herald_failure_rate_stderr},
                {"mean_success_probability", s.mean_success_probability},
                {"mean_success_probability_stderr", s.mean_success_probability_stderr}};
}

inline Json blocking_json(const BlockingStats &s) {
    return Json{{"n_ports", s.n_ports},
                {"wiring", to_string(s.wiring)},
                {"exhaustive", s.exhaustive},
                {"permutations", s.permutations},
                {"blocked_classical", s.blocked_classical},
                {"unsupported_quantum", s.unsupported_quantum},
                {"blocked_fraction_classical", s.blocked_fraction_classical},
                {"unsupported_fraction_quantum", s.unsupported_fraction_quantum},
                {"blocked_stderr", s.blocked_stderr},
                {"unsupported_stderr", s.unsupported_stderr}};
}

struct Report {
    std::string command;
    Json config = Json::object();
    Json results = Json::object();
    std::string version = QBANYAN_VERSION;
    double duration_ms = 0;

    friend bool operator==(const Report &, const Report &) = default;
};

inline Json to_json(const Report &r) {
    return Json{{"tool", "qbanyan"},
                {"version", r.version},
                {"command", r.command},
                {"config", r.config},
                {"results", r.results},
                {"duration_ms", r.duration_ms}};
}

inline Report report_from_json(const Json &j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    r.results = j.at("results");
    r.version = j.at("version").get<std::string>();
    r.duration_ms = j.at("duration_ms").get<double>();
    return r;
}

inline std::string to_json_string(const Report &r) {
    return to_json(r).dump(2) + "\n";
}

inline Report parse_report(const std::string &text) {
    return report_from_json(Json::parse(text));
}

namespace detail {

inline std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

inline void flatten(const Json &j, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &rows) {
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) {
            flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
        }
    } else if (j.is_array()) {
        // Amplitude lists and other nested tables stay JSON-only.
        const bool scalar = std::all_of(j.begin(), j.end(), [](const Json &e) {
            return e.is_primitive();
        });
        if (scalar) {
            std::string joined;
            for (const auto &e : j) {
                joined += (joined.empty() ? "" : " ") + (e.is_string() ? e.get<std::string>() : e.dump());
            }
            rows.emplace_back(prefix, joined);
        } else if (std::all_of(j.begin(), j.end(), [](const Json &e) { return e.is_object(); })) {
            for (std::size_t i = 0; i < j.size(); ++i) {
                flatten(j[i], prefix + "." + std::to_string(i), rows);
            }
        }
    } else {
        rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
    }
}

}  // namespace detail

/// Two-column key,value table of every scalar in the report.
inline std::string to_csv(const Report &r) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("tool", "qbanyan");
    rows.emplace_back("version", r.version);
    rows.emplace_back("command", r.command);
    detail::flatten(r.config, "config", rows);
    detail::flatten(r.results, "results", rows);
    rows.emplace_back("duration_ms", Json(r.duration_ms).dump());
    std::ostringstream out;
    out << "key,value\n";
    for (const auto &[k, v] : rows) {
        out << detail::csv_escape(k) << "," << detail::csv_escape(v) << "\n";
    }
    return out.str();
}

}  // namespace qbanyan
