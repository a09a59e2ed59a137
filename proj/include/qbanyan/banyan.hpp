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

// Self-routing Banyan fabric of 2x2 block-free switch units.
//
// Lines are numbered 0..N-1 at every stage boundary. Boundary 0 is the input
// ports and boundary n the output ports. A packet at stage i leaves its switch
// on the upper output when bit i (MSB first) of its destination is 0 and on the
// lower output when it is 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qbanyan/switch_unit.hpp"

namespace qbanyan {

enum class Wiring { OmegaShuffle, Butterfly };

inline const char *to_string(Wiring w) {
    return w == Wiring::OmegaShuffle ? "omega" : "butterfly";
}

inline Wiring parse_wiring(const std::string &s) {
    if (s == "omega" || s == "omega-shuffle") {
        return Wiring::OmegaShuffle;
    }
    if (s == "butterfly") {
        return Wiring::Butterfly;
    }
    throw DomainError("unknown wiring '" + s + "' (expected omega or butterfly)");
}

/// One 2x2 switch: input lines at the boundary before its stage, output lines
/// at the boundary after it. Index 0 is upper, 1 is lower.
struct SwitchLinks {
    std::array<int, 2> in;
    std::array<int, 2> out;
};

class BanyanTopology {
   public:
    int ports() const {
        return ports_;
    }
    int stages() const {
        return stages_;
    }
    int switches_per_stage() const {
        return ports_ / 2;
    }
    Wiring wiring() const {
        return wiring_;
    }

    /// Switch `index` of `stage` (stages are 1-based).
    const SwitchLinks &at(int stage, int index) const {
        return switches_.at(static_cast<std::size_t>(stage - 1)).at(static_cast<std::size_t>(index));
    }

    /// (switch index, side) fed by `line` at the input of `stage`.
    std::pair<int, int> input_of(int stage, int line) const {
        return feeds_.at(static_cast<std::size_t>(stage - 1)).at(static_cast<std::size_t>(line));
    }

    friend BanyanTopology build_topology(int n_ports, Wiring wiring);

   private:
    int ports_ = 0;
    int stages_ = 0;
    Wiring wiring_ = Wiring::OmegaShuffle;
    std::vector<std::vector<SwitchLinks>> switches_;
    std::vector<std::vector<std::pair<int, int>>> feeds_;
};

inline int log2_exact(int n) {
    int k = 0;
    while ((1 << k) < n) {
        ++k;
    }
    return (1 << k) == n ? k : -1;
}

/// Omega: a perfect shuffle precedes every stage and switch j joins lines 2j
/// and 2j+1. Butterfly: stage i pairs the lines that differ in address bit
/// n-i.
inline BanyanTopology build_topology(int n_ports, Wiring wiring) {
    const int n = log2_exact(n_ports);
    if (n_ports < 4 || n < 0 || n > 20) {
        throw DomainError("network size must be a power of two >= 4, got " + std::to_string(n_ports));
    }
    BanyanTopology t;
    t.ports_ = n_ports;
    t.stages_ = n;
    t.wiring_ = wiring;
    const int mask = n_ports - 1;
    for (int stage = 1; stage <= n; ++stage) {
        std::vector<SwitchLinks> row;
        if (wiring == Wiring::OmegaShuffle) {
            // Line x reaches shuffle position rotl(x); invert that for 2j, 2j+1.
            auto unshuffle = [&](int y) {
                return ((y >> 1) | ((y & 1) << (n - 1))) & mask;
            };
            for (int j = 0; j < n_ports / 2; ++j) {
                row.push_back({{unshuffle(2 * j), unshuffle(2 * j + 1)}, {2 * j, 2 * j + 1}});
            }
        } else {
            const int bit = 1 << (n - stage);
            for (int x = 0; x < n_ports; ++x) {
                if ((x & bit) == 0) {
                    row.push_back({{x, x | bit}, {x, x | bit}});
                }
            }
        }
        std::vector<std::pair<int, int>> feeds(static_cast<std::size_t>(n_ports), {-1, -1});
        for (int j = 0; j < static_cast<int>(row.size()); ++j) {
            for (int side = 0; side < 2; ++side) {
                feeds[static_cast<std::size_t>(row[static_cast<std::size_t>(j)].in[static_cast<std::size_t>(side)])] = {j, side};
            }
        }
        t.switches_.push_back(std::move(row));
        t.feeds_.push_back(std::move(feeds));
    }
    return t;
}

enum class RouteDirection { Upper = 0, Lower = 1 };

/// Direction taken at `stage` (1-based) by a packet bound for `dest`.
inline RouteDirection route_bit(std::uint32_t dest, int stage, int n_stages) {
    if (stage < 1 || stage > n_stages) {
        throw DomainError("stage out of range");
    }
    return ((dest >> (n_stages - stage)) & 1U) ? RouteDirection::Lower : RouteDirection::Upper;
}

struct Packet {
    int input_port = 0;
    std::uint32_t dest = 0;
    QubitSpec payload = QubitSpec::H();
};

enum class RouteMode { Classical, QuantumFusion };

inline const char *to_string(RouteMode m) {
    return m == RouteMode::Classical ? "classical" : "quantum";
}

inline RouteMode parse_route_mode(const std::string &s) {
    if (s == "classical") {
        return RouteMode::Classical;
    }
    if (s == "quantum" || s == "quantum-fusion") {
        return RouteMode::QuantumFusion;
    }
    throw DomainError("unknown routing mode '" + s + "' (expected classical or quantum)");
}

enum class RouteStatus { Delivered, BlockedClassical, UnsupportedContention, HeraldFailed };

inline const char *to_string(RouteStatus s) {
    switch (s) {
        case RouteStatus::Delivered:
            return "Delivered";
        case RouteStatus::BlockedClassical:
            return "BlockedClassical";
        case RouteStatus::UnsupportedContention:
            return "UnsupportedContention";
        case RouteStatus::HeraldFailed:
            return "HeraldFailed";
    }
    return "?";
}

/// What a switch does for one routing instance.
enum class UnitRole {
    Idle,            // no input
    Fredkin,         // basic unit, f = 0
    Fusion,          // basic unit, f = 1
    FusedFredkin,    // fused payload passes through a Fredkin gate
    FissionFredkin,  // fission followed by a Fredkin gate
};

inline const char *to_string(UnitRole r) {
    switch (r) {
        case UnitRole::Idle:
            return "idle";
        case UnitRole::Fredkin:
            return "fredkin";
        case UnitRole::Fusion:
            return "fusion";
        case UnitRole::FusedFredkin:
            return "fused-fredkin";
        case UnitRole::FissionFredkin:
            return "fission-fredkin";
    }
    return "?";
}

inline int fredkin_count(UnitRole r) {
    return r == UnitRole::Fredkin || r == UnitRole::FusedFredkin || r == UnitRole::FissionFredkin ? 1 : 0;
}

struct SwitchSetting {
    int stage = 0;
    int index = 0;
    UnitRole role = UnitRole::Idle;
    SwitchControls controls;
    /// Packet ids (input ports) on the upper/lower input and output links. A
    /// fused payload lists its polarization-slot packet first.
    std::array<std::vector<int>, 2> in_packets;
    std::array<std::vector<int>, 2> out_packets;
    double probability = 1.0;
};

struct FusedSegment {
    int fused_at_stage = 0;
    int split_at_stage = 0;
    int packet_a = 0;  // polarization slot
    int packet_b = 0;  // time-bin slot
};

struct Conflict {
    int stage = 0;
    int index = 0;
};

struct Delivery {
    int packet = 0;
    PortContent payload = PortContent::vacuum();
};

struct RouteResult {
    RouteStatus status = RouteStatus::Delivered;
    RouteMode mode = RouteMode::QuantumFusion;
    /// Every switch of every stage reached before routing stopped, stage-major.
    std::vector<SwitchSetting> settings;
    std::vector<FusedSegment> fused_segments;
    std::optional<Conflict> conflict;
    /// Product of the heralding probabilities of every engaged unit; zero when
    /// the instance cannot be delivered.
    double success_probability = 0;
    /// Output port -> delivered payload. Filled only when Delivered.
    std::map<int, Delivery> delivered;

    int engaged_fredkin_units() const {
        int k = 0;
        for (const auto &s : settings) {
            k += fredkin_count(s.role);
        }
        return k;
    }
};

namespace detail {

inline void validate_packets(std::span<const Packet> packets, const BanyanTopology &topo) {
    std::vector<bool> used_in(static_cast<std::size_t>(topo.ports()), false);
    std::vector<bool> used_out(static_cast<std::size_t>(topo.ports()), false);
    for (const auto &p : packets) {
        if (p.input_port < 0 || p.input_port >= topo.ports()) {
            throw DomainError("input port " + std::to_string(p.input_port) + " out of range");
        }
        if (p.dest >= static_cast<std::uint32_t>(topo.ports())) {
            throw DomainError("destination " + std::to_string(p.dest) + " out of range");
        }
        if (used_in[static_cast<std::size_t>(p.input_port)]) {
            throw DomainError("two packets on input port " + std::to_string(p.input_port));
        }
        if (used_out[p.dest]) {
            throw DomainError("two packets addressed to output " + std::to_string(p.dest));
        }
        used_in[static_cast<std::size_t>(p.input_port)] = true;
        used_out[p.dest] = true;
    }
}

}  // namespace detail

/// Control plan: decides every switch setting from destination addresses
/// alone, detects blocking and contention, and accounts heralding
/// probabilities from the channel constants. No quantum state is touched.
inline RouteResult plan_route(std::span<const Packet> packets, const BanyanTopology &topo, RouteMode mode,
                              const ChannelOptions &opts = {}) {
    detail::validate_packets(packets, topo);
    const int n = topo.stages();
    std::map<int, std::uint32_t> dest_of;
    // Occupants per line: one packet, or a fused pair (polarization slot first).
    std::vector<std::vector<int>> lines(static_cast<std::size_t>(topo.ports()));
    for (const auto &p : packets) {
        dest_of[p.input_port] = p.dest;
        lines[static_cast<std::size_t>(p.input_port)] = {p.input_port};
    }
    std::map<std::pair<int, int>, int> fused_since;

    RouteResult r;
    r.mode = mode;
    double prob = 1.0;
    auto dir = [&](int packet, int stage) {
        return static_cast<int>(route_bit(dest_of.at(packet), stage, n));
    };
    auto stop = [&](RouteStatus status, int stage, int index) {
        r.status = status;
        r.conflict = Conflict{stage, index};
        r.success_probability = 0;
        return r;
    };

    for (int stage = 1; stage <= n; ++stage) {
        std::vector<std::vector<int>> next(static_cast<std::size_t>(topo.ports()));
        for (int j = 0; j < topo.switches_per_stage(); ++j) {
            const SwitchLinks &links = topo.at(stage, j);
            SwitchSetting s;
            s.stage = stage;
            s.index = j;
            for (int side = 0; side < 2; ++side) {
                s.in_packets[static_cast<std::size_t>(side)] = lines[static_cast<std::size_t>(links.in[static_cast<std::size_t>(side)])];
            }
            const auto &up = s.in_packets[0];
            const auto &low = s.in_packets[1];
            const std::size_t occupied = (up.empty() ? 0 : 1) + (low.empty() ? 0 : 1);

            if (occupied == 0) {
                r.settings.push_back(std::move(s));
                continue;
            }
            const bool any_fused = up.size() > 1 || low.size() > 1;
            if (any_fused && occupied == 2) {
                r.settings.push_back(std::move(s));
                return stop(RouteStatus::UnsupportedContention, stage, j);
            }

            if (any_fused) {
                // A fused pair alone at this switch.
                const int side_in = up.empty() ? 1 : 0;
                const auto &pair = s.in_packets[static_cast<std::size_t>(side_in)];
                const int da = dir(pair[0], stage);
                const int db = dir(pair[1], stage);
                if (da == db) {
                    s.role = UnitRole::FusedFredkin;
                    s.controls.cross = side_in != da;
                    s.out_packets[static_cast<std::size_t>(da)] = pair;
                    s.probability = fredkin_success_probability(opts);
                } else {
                    // Fission puts the time-bin packet on b7 when not crossed.
                    s.role = UnitRole::FissionFredkin;
                    s.controls.cross = db != 0;
                    s.out_packets[static_cast<std::size_t>(da)] = {pair[0]};
                    s.out_packets[static_cast<std::size_t>(db)] = {pair[1]};
                    s.probability = fission_success_probability(opts) * fredkin_success_probability(opts);
                    r.fused_segments.push_back({fused_since.at({pair[0], pair[1]}), stage, pair[0], pair[1]});
                }
            } else if (occupied == 2 && dir(up[0], stage) == dir(low[0], stage)) {
                const int d = dir(up[0], stage);
                if (mode == RouteMode::Classical) {
                    r.settings.push_back(std::move(s));
                    return stop(RouteStatus::BlockedClassical, stage, j);
                }
                s.role = UnitRole::Fusion;
                s.controls.fusion = true;
                s.controls.select_b7 = d == 0;
                s.out_packets[static_cast<std::size_t>(d)] = {up[0], low[0]};
                s.probability = unit_probability(s.controls, opts);
                fused_since[{up[0], low[0]}] = stage;
            } else {
                s.role = UnitRole::Fredkin;
                if (!up.empty()) {
                    const int d = dir(up[0], stage);
                    s.controls.cross = d == 1;
                    s.out_packets[static_cast<std::size_t>(d)] = up;
                }
                if (!low.empty()) {
                    const int d = dir(low[0], stage);
                    s.controls.cross = d == 0;
                    s.out_packets[static_cast<std::size_t>(d)] = low;
                }
                s.probability = unit_probability(s.controls, opts);
            }
            prob *= s.probability;
            for (int side = 0; side < 2; ++side) {
                next[static_cast<std::size_t>(links.out[static_cast<std::size_t>(side)])] = s.out_packets[static_cast<std::size_t>(side)];
            }
            r.settings.push_back(std::move(s));
        }
        lines = std::move(next);
    }

    for (int line = 0; line < topo.ports(); ++line) {
        const auto &occ = lines[static_cast<std::size_t>(line)];
        if (occ.empty()) {
            continue;
        }
        if (occ.size() != 1 || dest_of.at(occ[0]) != static_cast<std::uint32_t>(line)) {
            throw Error("routing plan left a packet on the wrong output");
        }
        r.delivered[line] = Delivery{occ[0], PortContent::vacuum()};
    }
    r.status = RouteStatus::Delivered;
    r.success_probability = prob;
    return r;
}

namespace detail {

inline RouteResult execute_route(std::span<const Packet> packets, const BanyanTopology &topo, RouteMode mode,
                                 const ChannelOptions &opts, Rng *rng) {
    RouteResult r = plan_route(packets, topo, mode, opts);
    if (r.status != RouteStatus::Delivered) {
        return r;
    }
    std::map<int, QubitSpec> original;
    std::vector<PortContent> lines(static_cast<std::size_t>(topo.ports()), PortContent::vacuum());
    for (const auto &p : packets) {
        original.emplace(p.input_port, p.payload);
        lines[static_cast<std::size_t>(p.input_port)] = PortContent::qubit(p.payload);
    }

    double prob = 1.0;
    int current_stage = 1;
    std::vector<PortContent> next = lines;
    for (const auto &s : r.settings) {
        if (s.stage != current_stage) {
            lines = next;
            current_stage = s.stage;
        }
        const SwitchLinks &links = topo.at(s.stage, s.index);
        const PortContent &in7 = lines[static_cast<std::size_t>(links.in[0])];
        const PortContent &in8 = lines[static_cast<std::size_t>(links.in[1])];
        PortContent out7 = PortContent::vacuum();
        PortContent out8 = PortContent::vacuum();
        bool ok = true;
        double p = 1.0;

        switch (s.role) {
            case UnitRole::Idle:
                break;
            case UnitRole::Fredkin:
            case UnitRole::Fusion: {
                UnitOutcome u = rng ? oqsu(in7, in8, s.controls, *rng, opts) : oqsu(in7, in8, s.controls, opts);
                ok = u.success;
                p = u.probability;
                out7 = u.out_b7;
                out8 = u.out_b8;
                break;
            }
            case UnitRole::FusedFredkin: {
                const bool upper = in7.kind() == PortContent::Kind::Fused;
                const FusedState f = (upper ? in7 : in8).fused();
                const FredkinPorts fp{"a7", "a8", "b7", "b8"};
                const PhotonicState st = f.with_carrier(upper ? "a7" : "a8").to_state();
                HeraldOutcome h = rng ? fredkin(st, s.controls.cross, *rng, opts, fp) : fredkin(st, s.controls.cross, opts, fp);
                ok = h.success;
                p = h.probability;
                if (ok) {
                    out7 = read_port(h.state(), "b7", true);
                    out8 = read_port(h.state(), "b8", true);
                }
                break;
            }
            case UnitRole::FissionFredkin: {
                const FusedState f = (in7.kind() == PortContent::Kind::Fused ? in7 : in8).fused();
                VariantOutcome v = rng ? variant_a(f, s.controls.cross, *rng, opts) : variant_a(f, s.controls.cross, opts);
                ok = v.success;
                p = v.probability;
                if (ok) {
                    out7 = read_port(v.state(), "b7");
                    out8 = read_port(v.state(), "b8");
                }
                break;
            }
        }
        if (!ok) {
            r.status = RouteStatus::HeraldFailed;
            r.conflict = Conflict{s.stage, s.index};
            r.success_probability = 0;
            r.delivered.clear();
            return r;
        }
        prob *= p;
        next[static_cast<std::size_t>(links.out[0])] = std::move(out7);
        next[static_cast<std::size_t>(links.out[1])] = std::move(out8);
    }
    lines = next;

    for (auto &[port, delivery] : r.delivered) {
        const PortContent &got = lines[static_cast<std::size_t>(port)];
        const QubitSpec &want = original.at(delivery.packet);
        if (got.kind() != PortContent::Kind::Qubit ||
            !equal_up_to_phase(make_qubit_state("x", 0, got.qubit()), make_qubit_state("x", 0, want), 1e-9)) {
            throw Error("payload of packet " + std::to_string(delivery.packet) + " corrupted in transit");
        }
        // Report the payload in the global phase of the input.
        const Amplitude overlap = std::conj(want.h()) * got.qubit().h() + std::conj(want.v()) * got.qubit().v();
        const Amplitude undo = std::conj(overlap) / std::abs(overlap);
        delivery.payload = PortContent::qubit(QubitSpec(got.qubit().h() * undo, got.qubit().v() * undo));
    }
    r.success_probability = prob;
    return r;
}

}  // namespace detail

/// Routes one batch of packets through the fabric, running every engaged
/// switch unit on the actual payloads (success branches, analytic
/// probabilities).
inline RouteResult route(std::span<const Packet> packets, const BanyanTopology &topo, RouteMode mode,
                         const ChannelOptions &opts = {}) {
    return detail::execute_route(packets, topo, mode, opts, nullptr);
}

/// As route(), with every unit's herald sampled; the first failed herald
/// fails the whole instance.
inline RouteResult route(std::span<const Packet> packets, const BanyanTopology &topo, RouteMode mode, Rng &rng,
                         const ChannelOptions &opts = {}) {
    return detail::execute_route(packets, topo, mode, opts, &rng);
}

/// Packets for a full permutation: input i goes to perm[i].
inline std::vector<Packet> permutation_packets(std::span<const int> perm, std::span<const QubitSpec> payloads = {}) {
    std::vector<Packet> out;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        Packet p;
        p.input_port = static_cast<int>(i);
        if (perm[i] < 0) {
            throw DomainError("negative destination in permutation");
        }
        p.dest = static_cast<std::uint32_t>(perm[i]);
        if (i < payloads.size()) {
            p.payload = payloads[i];
        }
        out.push_back(p);
    }
    return out;
}

inline std::vector<int> random_permutation(int n, Rng &rng) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(i + 1)));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    return perm;
}

struct BlockingStats {
    int n_ports = 0;
    Wiring wiring = Wiring::OmegaShuffle;
    bool exhaustive = true;
    std::uint64_t permutations = 0;
    std::uint64_t blocked_classical = 0;
    std::uint64_t unsupported_quantum = 0;
    double blocked_fraction_classical = 0;
    double unsupported_fraction_quantum = 0;
    /// Binomial standard errors; zero when exhaustive.
    double blocked_stderr = 0;
    double unsupported_stderr = 0;
};

struct EnumerateOptions {
    /// Number of random permutations when not exhaustive.
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    /// Exhaustive enumeration is used for N <= 8 unless samples > 0.
    bool force_sampling = false;
};

/// Fraction of full permutations blocked classically and fraction left with
/// unsupported contention under fusion routing.
inline BlockingStats enumerate_blocking(const BanyanTopology &topo, const EnumerateOptions &opts = {}) {
    BlockingStats st;
    st.n_ports = topo.ports();
    st.wiring = topo.wiring();
    st.exhaustive = topo.ports() <= 8 && !opts.force_sampling;
    auto tally = [&](const std::vector<int> &perm) {
        const auto packets = permutation_packets(perm);
        ++st.permutations;
        if (plan_route(packets, topo, RouteMode::Classical).status == RouteStatus::BlockedClassical) {
            ++st.blocked_classical;
        }
        if (plan_route(packets, topo, RouteMode::QuantumFusion).status == RouteStatus::UnsupportedContention) {
            ++st.unsupported_quantum;
        }
    };
    if (st.exhaustive) {
        std::vector<int> perm(static_cast<std::size_t>(topo.ports()));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            tally(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        if (opts.samples == 0) {
            throw DomainError("sampled blocking estimate needs samples > 0");
        }
        for (std::uint64_t i = 0; i < opts.samples; ++i) {
            Rng rng = stream_rng(opts.seed, i);
            tally(random_permutation(topo.ports(), rng));
        }
    }
    const double n = static_cast<double>(st.permutations);
    st.blocked_fraction_classical = static_cast<double>(st.blocked_classical) / n;
    st.unsupported_fraction_quantum = static_cast<double>(st.unsupported_quantum) / n;
    if (!st.exhaustive) {
        auto se = [n](double p) {
            return std::sqrt(p * (1 - p) / n);
        };
        st.blocked_stderr = se(st.blocked_fraction_classical);
        st.unsupported_stderr = se(st.unsupported_fraction_quantum);
    }
    return st;
}

/// What a Monte Carlo experiment exercises.
struct TrafficSpec {
    enum class Kind { SingleUnit, Network };
    Kind kind = Kind::SingleUnit;
    /// SingleUnit: fixed f, or uniform over {0, 1} when empty.
    std::optional<bool> fusion;
    /// Network: size, wiring, mode, and a fixed permutation or uniform random
    /// permutations when empty.
    int n_ports = 8;
    Wiring wiring = Wiring::OmegaShuffle;
    RouteMode mode = RouteMode::QuantumFusion;
    std::optional<std::vector<int>> permutation;
};

struct MonteCarloOptions {
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    ChannelOptions channel{};
    unsigned threads = 1;
};

struct MonteCarloStats {
    std::uint64_t trials = 0;
    std::uint64_t delivered = 0;
    std::uint64_t herald_failed = 0;
    std::uint64_t blocked = 0;
    std::uint64_t unsupported = 0;
    double delivery_rate = 0;
    double delivery_rate_stderr = 0;
    double herald_failure_rate = 0;
    double herald_failure_rate_stderr = 0;
    double mean_success_probability = 0;
    double mean_success_probability_stderr = 0;

    friend bool operator==(const MonteCarloStats &, const MonteCarloStats &) = default;
};

namespace detail {

struct TrialResult {
    RouteStatus status = RouteStatus::Delivered;
    double analytic_probability = 0;
};

inline TrialResult run_trial(const TrafficSpec &traffic, const BanyanTopology *topo, const ChannelOptions &opts,
                             Rng &rng) {
    TrialResult t;
    if (traffic.kind == TrafficSpec::Kind::SingleUnit) {
        const bool f = traffic.fusion ? *traffic.fusion : bernoulli(rng, 0.5);
        const auto c = SwitchControls::from_bits(f, bernoulli(rng, 0.5), bernoulli(rng, 0.5));
        const auto q7 = QubitSpec::random(rng);
        const auto q8 = QubitSpec::random(rng);
        t.analytic_probability = unit_probability(c, opts);
        t.status = oqsu(PortContent::qubit(q7), PortContent::qubit(q8), c, rng, opts).success
                       ? RouteStatus::Delivered
                       : RouteStatus::HeraldFailed;
        return t;
    }
    const std::vector<int> perm = traffic.permutation ? *traffic.permutation : random_permutation(topo->ports(), rng);
    std::vector<QubitSpec> payloads;
    for (int i = 0; i < topo->ports(); ++i) {
        payloads.push_back(QubitSpec::random(rng));
    }
    const auto packets = permutation_packets(perm, payloads);
    t.analytic_probability = plan_route(packets, *topo, traffic.mode, opts).success_probability;
    t.status = route(packets, *topo, traffic.mode, rng, opts).status;
    return t;
}

}  // namespace detail

/// Independent trials; trial i draws from stream_rng(seed, i), and results are
/// reduced in trial order, so the statistics do not depend on `threads`.
inline MonteCarloStats monte_carlo(const TrafficSpec &traffic, const MonteCarloOptions &opts) {
    if (opts.trials < 1) {
        throw DomainError("monte_carlo needs at least one trial");
    }
    opts.channel.detectors.validate();
    std::optional<BanyanTopology> topo;
    if (traffic.kind == TrafficSpec::Kind::Network) {
        topo = build_topology(traffic.n_ports, traffic.wiring);
        if (traffic.permutation) {
            detail::validate_packets(permutation_packets(*traffic.permutation), *topo);
            if (static_cast<int>(traffic.permutation->size()) != traffic.n_ports) {
                throw DomainError("permutation length must equal the network size");
            }
        }
    }
    std::vector<detail::TrialResult> results(opts.trials);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            Rng rng = stream_rng(opts.seed, i);
            results[i] = detail::run_trial(traffic, topo ? &*topo : nullptr, opts.channel, rng);
        }
    };
    const std::uint64_t threads = std::clamp<std::uint64_t>(opts.threads, 1, opts.trials);
    if (threads == 1) {
        work(0, opts.trials);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (opts.trials + threads - 1) / threads;
        for (std::uint64_t t = 0; t < threads; ++t) {
            const std::uint64_t b = t * chunk;
            const std::uint64_t e = std::min(opts.trials, b + chunk);
            if (b < e) {
                pool.emplace_back(work, b, e);
            }
        }
    }

    MonteCarloStats st;
    st.trials = opts.trials;
    double sum_p = 0, sum_p2 = 0;
    for (const auto &r : results) {
        switch (r.status) {
            case RouteStatus::Delivered:
                ++st.delivered;
                break;
            case RouteStatus::HeraldFailed:
                ++st.herald_failed;
                break;
            case RouteStatus::BlockedClassical:
                ++st.blocked;
                break;
            case RouteStatus::UnsupportedContention:
                ++st.unsupported;
                break;
        }
        sum_p += r.analytic_probability;
        sum_p2 += r.analytic_probability * r.analytic_probability;
    }
    const double n = static_cast<double>(st.trials);
    auto se = [n](double p) {
        return std::sqrt(p * (1 - p) / n);
    };
    st.delivery_rate = static_cast<double>(st.delivered) / n;
    st.delivery_rate_stderr = se(st.delivery_rate);
    st.herald_failure_rate = static_cast<double>(st.herald_failed) / n;
    st.herald_failure_rate_stderr = se(st.herald_failure_rate);
    st.mean_success_probability = sum_p / n;
    const double var = st.trials > 1 ? std::max(0.0, (sum_p2 - sum_p * sum_p / n) / (n - 1)) : 0.0;
    st.mean_success_probability_stderr = std::sqrt(var / n);
    return st;
}

}  // namespace qbanyan
