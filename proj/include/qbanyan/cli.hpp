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

// Command-line driver: scenario parsing, dispatch, report emission.

#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbanyan/report.hpp"

namespace qbanyan::cli {

enum class Command { Gate, Unit, Route, Stats, Enumerate };

inline const char *to_string(Command c) {
    switch (c) {
        case Command::Gate:
            return "gate";
        case Command::Unit:
            return "unit";
        case Command::Route:
            return "route";
        case Command::Stats:
            return "stats";
        case Command::Enumerate:
            return "enumerate";
    }
    return "?";
}

enum class GateKind { Fredkin, Fuse, Fission };

inline const char *to_string(GateKind g) {
    return g == GateKind::Fredkin ? "fredkin" : g == GateKind::Fuse ? "fuse" : "fission";
}

enum class Format { Json, Csv };

/// Thrown for malformed or inconsistent arguments (exit status 2).
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    Command command = Command::Gate;
    // gate
    GateKind gate = GateKind::Fredkin;
    int control = 0;
    std::string in1 = "D";
    std::string in2 = "R";
    // unit
    bool table1 = false;
    int f = 0, F = 0, s = 0, d = 1;
    // route / stats network / enumerate
    int n_ports = 8;
    Wiring wiring = Wiring::OmegaShuffle;
    std::optional<std::string> perm;  // comma list, '-' marks an idle input
    RouteMode mode = RouteMode::QuantumFusion;
    bool sample = false;
    // stats
    bool network = false;
    std::optional<int> fixed_f;  // empty: uniform over {0, 1}
    std::uint64_t trials = 100000;
    unsigned threads = 1;
    // enumerate
    std::uint64_t samples = 0;
    // shared
    std::optional<std::uint64_t> seed;
    double eta = 1.0;
    double dark = 0.0;
    bool threshold_detectors = false;
    bool feed_forward = true;
    Format format = Format::Json;
    std::string output;  // empty: stdout

    ChannelOptions channel() const {
        ChannelOptions o;
        o.feed_forward.enabled = feed_forward;
        o.detectors.efficiency = eta;
        o.detectors.dark_count_prob = dark;
        o.detectors.number_resolving = !threshold_detectors;
        return o;
    }
};

/// Qubit from a name (H, V, D, A, R, L) or four numbers "hre,him,vre,vim".
inline QubitSpec parse_qubit(const std::string &text) {
    const double r = 1.0 / std::sqrt(2.0);
    if (text == "H") {
        return QubitSpec::H();
    }
    if (text == "V") {
        return QubitSpec::V();
    }
    if (text == "D") {
        return QubitSpec(r, r);
    }
    if (text == "A") {
        return QubitSpec(r, -r);
    }
    if (text == "R") {
        return QubitSpec(r, Amplitude(0, r));
    }
    if (text == "L") {
        return QubitSpec(r, Amplitude(0, -r));
    }
    std::vector<double> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception &) {
            throw UsageError("bad qubit '" + text + "': expected H, V, D, A, R, L or hre,him,vre,vim");
        }
    }
    if (v.size() != 4) {
        throw UsageError("bad qubit '" + text + "': expected four numbers");
    }
    try {
        return QubitSpec(Amplitude(v[0], v[1]), Amplitude(v[2], v[3]));
    } catch (const NormError &e) {
        throw UsageError("bad qubit '" + text + "': " + e.what());
    }
}

/// Destinations per input port; '-' leaves that input idle.
inline std::vector<std::optional<int>> parse_perm(const std::string &text, int n_ports) {
    std::vector<std::optional<int>> out;
    std::stringstream ss(text);
    std::string tok;
    std::vector<bool> seen(static_cast<std::size_t>(n_ports), false);
    while (std::getline(ss, tok, ',')) {
        if (tok == "-") {
            out.emplace_back();
            continue;
        }
        int v = -1;
        try {
            std::size_t used = 0;
            v = std::stoi(tok, &used);
            if (used != tok.size()) {
                v = -1;
            }
        } catch (const std::exception &) {
            v = -1;
        }
        if (v < 0 || v >= n_ports) {
            throw UsageError("--perm: bad destination '" + tok + "' for n=" + std::to_string(n_ports));
        }
        if (seen[static_cast<std::size_t>(v)]) {
            throw UsageError("--perm: destination " + tok + " used twice");
        }
        seen[static_cast<std::size_t>(v)] = true;
        out.emplace_back(v);
    }
    if (static_cast<int>(out.size()) != n_ports) {
        throw UsageError("--perm must list " + std::to_string(n_ports) + " entries");
    }
    return out;
}

/// Parses a command line, reading `--config FILE` (TOML/INI, placed before
/// the subcommand) first; explicit flags override file values. Throws
/// UsageError, or CLI::Success for --help (message in `help`).
inline ScenarioConfig parse_config(int argc, const char *const *argv, std::string *help = nullptr) {
    ScenarioConfig c;
    CLI::App app{"Simulator of a block-free optical quantum Banyan switch fabric", "qbanyan"};
    app.set_config("--config", "", "Read options from a TOML/INI file; sections name subcommands");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_version_flag("--version", QBANYAN_VERSION);

    std::string format = "json";
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output,-o", c.output, "Write the report here instead of stdout");

    auto channel_opts = [&](CLI::App *sub) {
        sub->add_option("--eta", c.eta, "Detector efficiency")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--dark", c.dark, "Dark-count probability per detector")->check(CLI::Range(0.0, 1.0));
        sub->add_flag("--threshold", c.threshold_detectors, "Detectors do not resolve photon number");
        sub->add_flag("!--no-ff", c.feed_forward, "Disable feed-forward in fusion and fission");
    };

    auto *gate = app.add_subcommand("gate", "Run one heralded gate on chosen inputs");
    bool g_fredkin = false, g_fuse = false, g_fission = false;
    auto *which = gate->add_option_group("gate", "Which gate");
    which->add_flag("--fredkin", g_fredkin, "Fredkin gate on (in1, in2)");
    which->add_flag("--fuse", g_fuse, "Fuse in1 (polarization) and in2 (time bin)");
    which->add_flag("--fission", g_fission, "Split the fused state of time-bin qubit in1 and polarization qubit in2");
    which->require_option(1);
    gate->add_option("--control", c.control, "Fredkin control bit")->check(CLI::Range(0, 1));
    gate->add_option("--in1", c.in1, "First input qubit (H, V, D, A, R, L or hre,him,vre,vim)");
    gate->add_option("--in2", c.in2, "Second input qubit");
    channel_opts(gate);

    auto *unit = app.add_subcommand("unit", "Run the switch unit");
    unit->add_flag("--table1", c.table1, "Run all eight control settings and check each row");
    unit->add_option("-f", c.f, "Fusion control")->check(CLI::Range(0, 1));
    unit->add_option("-F", c.F, "Fredkin cross control")->check(CLI::Range(0, 1));
    unit->add_option("-s", c.s, "Fused-output select (1: b7, 0: b8)")->check(CLI::Range(0, 1));
    unit->add_option("-d", c.d, "Converter enable")->check(CLI::Range(0, 1));
    unit->add_option("--in1", c.in1, "Qubit on a7");
    unit->add_option("--in2", c.in2, "Qubit on a8");
    channel_opts(unit);

    std::string wiring = "omega", mode = "quantum";
    auto net_opts = [&](CLI::App *sub) {
        sub->add_option("--n", c.n_ports, "Network size (power of two, >= 4)")->check(CLI::Range(4, 1 << 20));
        sub->add_option("--wiring", wiring, "Inter-stage wiring")->check(CLI::IsMember({"omega", "butterfly"}));
    };

    auto *route = app.add_subcommand("route", "Route one batch of packets through the fabric");
    net_opts(route);
    route->add_option("--perm", c.perm, "Destination of each input, comma separated; '-' for idle");
    route->add_option("--mode", mode, "Routing mode")->check(CLI::IsMember({"classical", "quantum"}));
    route->add_flag("--sample", c.sample, "Sample every herald instead of reporting the success branch");
    route->add_option("--seed", c.seed, "Seed for payloads, random traffic and sampled heralds");
    channel_opts(route);

    auto *stats = app.add_subcommand("stats", "Monte Carlo statistics");
    bool st_unit = false, f_uniform = false;
    auto *kind = stats->add_option_group("traffic", "What to simulate");
    kind->add_flag("--unit", st_unit, "A single switch unit with random inputs and controls");
    kind->add_flag("--network", c.network, "A whole fabric");
    kind->require_option(1);
    auto *fsel = stats->add_option_group("fusion", "Unit fusion control");
    fsel->add_flag("--f-uniform", f_uniform, "f uniform over {0, 1}");
    fsel->add_option("--f", c.fixed_f, "Fixed f")->check(CLI::Range(0, 1));
    fsel->require_option(0, 1);
    net_opts(stats);
    stats->add_option("--perm", c.perm, "Fixed permutation for --network (default uniform random)");
    stats->add_option("--mode", mode, "Routing mode")->check(CLI::IsMember({"classical", "quantum"}));
    stats->add_option("--trials", c.trials, "Number of trials")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    stats->add_option("--seed", c.seed, "Seed (required)")->required();
    stats->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1U, 1024U));
    channel_opts(stats);

    auto *enumerate = app.add_subcommand("enumerate", "Blocking fractions over permutations");
    net_opts(enumerate);
    enumerate->add_option("--samples", c.samples, "Random permutations (sampled mode, required for n > 8)");
    enumerate->add_option("--seed", c.seed, "Seed for sampled mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        if (help) {
            *help = app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help();
        }
        throw CLI::Success();
    } catch (const CLI::CallForVersion &) {
        if (help) {
            *help = std::string(QBANYAN_VERSION) + "\n";
        }
        throw CLI::Success();
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }

    c.format = format == "csv" ? Format::Csv : Format::Json;
    c.wiring = parse_wiring(wiring);
    c.mode = parse_route_mode(mode);
    const CLI::App *sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "gate") {
        c.command = Command::Gate;
        c.gate = g_fredkin ? GateKind::Fredkin : g_fuse ? GateKind::Fuse : GateKind::Fission;
    } else if (name == "unit") {
        c.command = Command::Unit;
    } else if (name == "route") {
        c.command = Command::Route;
    } else if (name == "stats") {
        c.command = Command::Stats;
        if (f_uniform) {
            c.fixed_f.reset();
        }
        if (c.network && c.fixed_f) {
            throw UsageError("--f applies to --unit only");
        }
    } else {
        c.command = Command::Enumerate;
    }

    // Range and consistency checks that need more than one option.
    parse_qubit(c.in1);
    parse_qubit(c.in2);
    if (log2_exact(c.n_ports) < 0) {
        throw UsageError("--n must be a power of two, got " + std::to_string(c.n_ports));
    }
    if (c.perm) {
        parse_perm(*c.perm, c.n_ports);
    }
    if (c.command == Command::Route && (c.sample || !c.perm) && !c.seed) {
        throw UsageError("route needs --seed when sampling heralds or drawing a random permutation");
    }
    if (c.command == Command::Enumerate) {
        if (c.n_ports > 8 && c.samples == 0) {
            throw UsageError("enumerate --n > 8 needs --samples");
        }
        if (c.samples > 0 && !c.seed) {
            throw UsageError("enumerate --samples needs --seed");
        }
    }
    return c;
}

inline Json config_json(const ScenarioConfig &c) {
    Json j{{"command", to_string(c.command)}};
    switch (c.command) {
        case Command::Gate:
            j["gate"] = to_string(c.gate);
            j["control"] = c.control;
            j["in1"] = c.in1;
            j["in2"] = c.in2;
            break;
        case Command::Unit:
            j["table1"] = c.table1;
            if (!c.table1) {
                j["f"] = c.f;
                j["F"] = c.F;
                j["s"] = c.s;
                j["d"] = c.d;
            }
            j["in1"] = c.in1;
            j["in2"] = c.in2;
            break;
        case Command::Route:
            j["n"] = c.n_ports;
            j["wiring"] = to_string(c.wiring);
            j["mode"] = to_string(c.mode);
            j["perm"] = c.perm ? Json(*c.perm) : Json(nullptr);
            j["sample"] = c.sample;
            break;
        case Command::Stats:
            j["traffic"] = c.network ? "network" : "unit";
            if (c.network) {
                j["n"] = c.n_ports;
                j["wiring"] = to_string(c.wiring);
                j["mode"] = to_string(c.mode);
                j["perm"] = c.perm ? Json(*c.perm) : Json(nullptr);
            } else {
                j["f"] = c.fixed_f ? Json(*c.fixed_f) : Json("uniform");
            }
            j["trials"] = c.trials;
            j["threads"] = c.threads;
            break;
        case Command::Enumerate:
            j["n"] = c.n_ports;
            j["wiring"] = to_string(c.wiring);
            j["samples"] = c.samples;
            break;
    }
    j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
    if (c.command != Command::Enumerate) {
        j["feed_forward"] = c.feed_forward;
        j["eta"] = c.eta;
        j["dark"] = c.dark;
        j["threshold_detectors"] = c.threshold_detectors;
    }
    return j;
}

namespace detail {

inline Json herald_json(const HeraldOutcome &h) {
    Json j{{"success", h.success}, {"probability", h.probability}, {"herald", pattern_json(h.pattern)}};
    if (h.output) {
        j["state"] = state_json(*h.output);
    }
    return j;
}

inline Json run_gate(const ScenarioConfig &c) {
    const QubitSpec q1 = parse_qubit(c.in1);
    const QubitSpec q2 = parse_qubit(c.in2);
    const ChannelOptions opts = c.channel();
    Json j{{"kind", "analytic"}};
    switch (c.gate) {
        case GateKind::Fredkin: {
            const FredkinPorts ports;
            const PhotonicState in = tensor(make_qubit_state(ports.in1, 0, q1), make_qubit_state(ports.in2, 0, q2));
            j["input"] = state_json(in);
            j["output"] = herald_json(fredkin(in, c.control == 1, opts, ports));
            j["ideal_success_probability"] = kFredkinSuccess;
            break;
        }
        case GateKind::Fuse: {
            const HeraldOutcome h = fuse(q1, q2, opts);
            j["output"] = herald_json(h);
            j["fused"] = fused_json(FusedState::from_state(h.state(), FusionPorts{}.merged));
            j["ideal_success_probability"] = fusion_probability(opts.feed_forward);
            break;
        }
        case GateKind::Fission: {
            const FusedState f = FusedState::from_product(q1, q2, FissionPorts{}.fused);
            j["input"] = fused_json(f);
            const HeraldOutcome h = fission(f, opts);
            j["output"] = herald_json(h);
            j["b5"] = port_json(read_port(h.state(), FissionPorts{}.out5));
            j["b6"] = port_json(read_port(h.state(), FissionPorts{}.out6));
            j["ideal_success_probability"] = fission_probability(opts.feed_forward);
            break;
        }
    }
    return j;
}

inline bool same_qubit(const PortContent &p, const QubitSpec &q) {
    return p.kind() == PortContent::Kind::Qubit &&
           equal_up_to_phase(make_qubit_state("x", 0, p.qubit()), make_qubit_state("x", 0, q), 1e-10);
}

inline Json unit_row(const SwitchControls &ctl, const QubitSpec &q7, const QubitSpec &q8, const ChannelOptions &opts,
                     bool check) {
    const UnitOutcome u = oqsu(PortContent::qubit(q7), PortContent::qubit(q8), ctl, opts);
    Json j{{"controls", ctl.str()},
           {"success", u.success},
           {"probability", u.probability},
           {"herald", pattern_json(u.herald)},
           {"b7", port_json(u.out_b7)},
           {"b8", port_json(u.out_b8)}};
    if (u.joint) {
        j["state"] = state_json(*u.joint);
    }
    if (!check) {
        return j;
    }
    bool ok = u.success;
    std::string condition;
    if (!ctl.fusion) {
        const QubitSpec &w7 = ctl.cross ? q8 : q7;
        const QubitSpec &w8 = ctl.cross ? q7 : q8;
        ok = ok && same_qubit(u.out_b7, w7) && same_qubit(u.out_b8, w8) && u.herald == fredkin_herald();
        condition = "D1 and D2 have no count";
    } else {
        const PortContent &fused = ctl.select_b7 ? u.out_b7 : u.out_b8;
        const PortContent &empty = ctl.select_b7 ? u.out_b8 : u.out_b7;
        ok = ok && empty.kind() == PortContent::Kind::Vacuum && fused.kind() == PortContent::Kind::Fused &&
             equal_up_to_phase(fused.fused().with_carrier("x").to_state(),
                               FusedState::from_product(q8, q7, "x").to_state(), 1e-10) &&
             u.herald == fusion_herald() && u.joint->paths().size() == 1;
        condition = "D3 and D5 detect exactly one photon, D4 and D6 no count, one photon on the outputs";
    }
    j["condition"] = condition;
    j["pass"] = ok;
    return j;
}

inline Json run_unit(const ScenarioConfig &c) {
    const QubitSpec q7 = parse_qubit(c.in1);
    const QubitSpec q8 = parse_qubit(c.in2);
    const ChannelOptions opts = c.channel();
    Json j{{"kind", "analytic"}};
    if (!c.table1) {
        j["row"] = unit_row(SwitchControls::from_bits(c.f, c.F, c.s, c.d), q7, q8, opts, c.d == 1);
        return j;
    }
    Json rows = Json::array();
    bool all = true;
    for (int f = 0; f < 2; ++f) {
        for (int F = 0; F < 2; ++F) {
            for (int s = 0; s < 2; ++s) {
                Json row = unit_row(SwitchControls::from_bits(f, F, s), q7, q8, opts, true);
                all = all && row["pass"].get<bool>();
                rows.push_back(std::move(row));
            }
        }
    }
    j["rows"] = rows;
    j["all_pass"] = all;
    j["mean_probability_uniform_f"] =
        0.5 * unit_probability(SwitchControls::from_bits(1, 0, 0), opts) + 0.5 * unit_probability(SwitchControls{}, opts);
    return j;
}

inline std::vector<Packet> route_packets(const ScenarioConfig &c, Rng *payload_rng) {
    std::vector<std::optional<int>> perm;
    if (c.perm) {
        perm = parse_perm(*c.perm, c.n_ports);
    } else {
        Rng rng = stream_rng(*c.seed, 1);
        for (int d : random_permutation(c.n_ports, rng)) {
            perm.emplace_back(d);
        }
    }
    std::vector<Packet> packets;
    for (int i = 0; i < c.n_ports; ++i) {
        if (!perm[static_cast<std::size_t>(i)]) {
            continue;
        }
        Packet p;
        p.input_port = i;
        p.dest = static_cast<std::uint32_t>(*perm[static_cast<std::size_t>(i)]);
        p.payload = payload_rng ? QubitSpec::random(*payload_rng) : QubitSpec::H();
        packets.push_back(p);
    }
    return packets;
}

inline Json run_route(const ScenarioConfig &c) {
    const auto topo = build_topology(c.n_ports, c.wiring);
    std::optional<Rng> payload_rng;
    if (c.seed) {
        payload_rng = stream_rng(*c.seed, 0);
    }
    const auto packets = route_packets(c, payload_rng ? &*payload_rng : nullptr);
    Json inputs = Json::array();
    for (const auto &p : packets) {
        inputs.push_back({{"input", p.input_port}, {"dest", p.dest}, {"payload", qubit_json(p.payload)}});
    }
    RouteResult r;
    if (c.sample) {
        Rng rng = stream_rng(*c.seed, 2);
        r = route(packets, topo, c.mode, rng, c.channel());
    } else {
        r = route(packets, topo, c.mode, c.channel());
    }
    return Json{{"kind", c.sample ? "sampled" : "analytic"}, {"packets", inputs}, {"route", route_json(r)}};
}

inline Json run_stats(const ScenarioConfig &c) {
    TrafficSpec tr;
    if (c.network) {
        tr.kind = TrafficSpec::Kind::Network;
        tr.n_ports = c.n_ports;
        tr.wiring = c.wiring;
        tr.mode = c.mode;
        if (c.perm) {
            std::vector<int> p;
            for (const auto &d : parse_perm(*c.perm, c.n_ports)) {
                if (!d) {
                    throw UsageError("stats --perm must be a full permutation");
                }
                p.push_back(*d);
            }
            tr.permutation = p;
        }
    } else if (c.fixed_f) {
        tr.fusion = *c.fixed_f == 1;
    }
    MonteCarloOptions o;
    o.trials = c.trials;
    o.seed = *c.seed;
    o.channel = c.channel();
    o.threads = c.threads;
    const MonteCarloStats st = monte_carlo(tr, o);
    Json analytic = Json::object();
    if (!c.network) {
        const double p0 = unit_probability(SwitchControls{}, o.channel);
        const double p1 = unit_probability(SwitchControls::from_bits(1, 0, 0), o.channel);
        analytic["success_probability"] = c.fixed_f ? (*c.fixed_f ? p1 : p0) : 0.5 * p0 + 0.5 * p1;
    }
    return Json{{"analytic", analytic}, {"monte_carlo", stats_json(st)}};
}

inline Json run_enumerate(const ScenarioConfig &c) {
    EnumerateOptions o;
    o.samples = c.samples;
    o.seed = c.seed.value_or(0);
    o.force_sampling = c.samples > 0;
    return Json{{"kind", c.samples > 0 ? "sampled" : "exhaustive"},
                {"blocking", blocking_json(enumerate_blocking(build_topology(c.n_ports, c.wiring), o))}};
}

}  // namespace detail

/// Runs a parsed scenario. Domain errors propagate to the caller.
inline Report run(const ScenarioConfig &c) {
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.command = to_string(c.command);
    r.config = config_json(c);
    switch (c.command) {
        case Command::Gate:
            r.results = detail::run_gate(c);
            break;
        case Command::Unit:
            r.results = detail::run_unit(c);
            break;
        case Command::Route:
            r.results = detail::run_route(c);
            break;
        case Command::Stats:
            r.results = detail::run_stats(c);
            break;
        case Command::Enumerate:
            r.results = detail::run_enumerate(c);
            break;
    }
    r.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Full driver: parse, run, write. Returns the process exit status.
inline int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    ScenarioConfig c;
    try {
        std::string help;
        try {
            c = parse_config(argc, argv, &help);
        } catch (const CLI::Success &) {
            out << help;
            return kExitOk;
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    Report r;
    try {
        r = run(c);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        err << "error in " << to_string(c.command) << ": " << e.what() << "\n";
        return kExitDomain;
    }
    const std::string text = c.format == Format::Csv ? to_csv(r) : to_json_string(r);
    if (c.output.empty()) {
        out << text;
    } else {
        std::ofstream f(c.output);
        if (!f || !(f << text)) {
            err << "error: cannot write " << c.output << "\n";
            return kExitDomain;
        }
    }
    return kExitOk;
}

}  // namespace qbanyan::cli
