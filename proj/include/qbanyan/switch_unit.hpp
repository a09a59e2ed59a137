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

// The block-free 2x2 switch unit and four composite units built from fusion,
// fission and Fredkin gates.
//
// Port conventions:
//  * unit inputs a7 (upper) and a8 (lower), outputs b7 (upper) and b8 (lower);
//  * in fusion mode a7 takes the polarization slot and a8 the time-bin slot,
//    so the fused payload is FusedState::from_product(q_a8, q_a7);
//  * s = 1 sends the fused payload to b7, s = 0 to b8.

#pragma once

#include <optional>
#include <string>
#include <variant>

#include "qbanyan/gates.hpp"

namespace qbanyan {

/// Classical settings of one unit: f (fusion), F (Fredkin cross), s (fused
/// output on b7) and d (converter enable).
struct SwitchControls {
    bool fusion = false;
    bool cross = false;
    bool select_b7 = false;
    bool convert = true;

    static SwitchControls from_bits(int f, int F, int s, int d = 1) {
        for (int bit : {f, F, s, d}) {
            if (bit != 0 && bit != 1) {
                throw DomainError("switch controls must be 0 or 1");
            }
        }
        return {f == 1, F == 1, s == 1, d == 1};
    }

    std::string str() const {
        return std::string("f=") + (fusion ? '1' : '0') + " F=" + (cross ? '1' : '0') + " s=" + (select_b7 ? '1' : '0') +
               " d=" + (convert ? '1' : '0');
    }

    friend bool operator==(const SwitchControls &, const SwitchControls &) = default;
};

/// What one port carries: nothing, a polarization qubit, or a fused
/// time-polarization photon.
class PortContent {
   public:
    enum class Kind { Vacuum, Qubit, Fused };

    static PortContent vacuum() {
        return PortContent(std::monostate{});
    }
    static PortContent qubit(QubitSpec q) {
        return PortContent(q);
    }
    static PortContent fused(FusedState f) {
        return PortContent(std::move(f));
    }

    Kind kind() const {
        return static_cast<Kind>(payload_.index());
    }
    const QubitSpec &qubit() const {
        if (kind() != Kind::Qubit) {
            throw DomainError("port does not carry a single qubit");
        }
        return std::get<QubitSpec>(payload_);
    }
    const FusedState &fused() const {
        if (kind() != Kind::Fused) {
            throw DomainError("port does not carry a fused state");
        }
        return std::get<FusedState>(payload_);
    }

    /// The payload as photons on `path`.
    PhotonicState to_state(const std::string &path) const {
        switch (kind()) {
            case Kind::Vacuum:
                return PhotonicState::vacuum();
            case Kind::Qubit:
                return make_qubit_state(path, 0, qubit());
            case Kind::Fused:
                return fused().with_carrier(path).to_state();
        }
        return PhotonicState::vacuum();
    }

   private:
    explicit PortContent(std::variant<std::monostate, QubitSpec, FusedState> p) : payload_(std::move(p)) {}
    std::variant<std::monostate, QubitSpec, FusedState> payload_;
};

inline const char *to_string(PortContent::Kind k) {
    switch (k) {
        case PortContent::Kind::Vacuum:
            return "vacuum";
        case PortContent::Kind::Qubit:
            return "qubit";
        case PortContent::Kind::Fused:
            return "fused";
    }
    return "?";
}

namespace detail {

/// Single-photon factor of `joint` living on `path`, assuming the joint state
/// is a product across `path` and everything else. The factor is returned as
/// (mode -> amplitude); its global phase is fixed by the dominant term of the
/// complement, so a factor is only meaningful up to a phase.
inline std::map<Mode, Amplitude> factor_on(const PhotonicState &joint, const std::string &path) {
    auto on_path = [&](const Mode &m) {
        return m.path == path;
    };
    auto off_path = [&](const Mode &m) {
        return m.path != path;
    };
    std::map<FockConfig, double> rest_weight;
    for (const auto &[c, a] : joint.terms()) {
        rest_weight[c.filtered(off_path)] += std::norm(a);
    }
    const FockConfig *ref = nullptr;
    double best = -1;
    for (const auto &[rest, w] : rest_weight) {
        if (w > best + 1e-12) {
            best = w;
            ref = &rest;
        }
    }
    std::map<Mode, Amplitude> factor;
    for (const auto &[c, a] : joint.terms()) {
        if (c.filtered(off_path) == *ref) {
            const FockConfig mine = c.filtered(on_path);
            if (mine.total_photons() != 1) {
                throw DomainError("port '" + path + "' does not hold exactly one photon");
            }
            factor[mine.entries()[0].first] += a;
        }
    }
    double n = 0;
    for (const auto &[m, a] : factor) {
        n += std::norm(a);
    }
    n = std::sqrt(n);
    for (auto &[m, a] : factor) {
        a /= n;
    }
    // Verify the product structure: joint = factor x complement.
    std::map<FockConfig, Amplitude> complement;
    for (const auto &[c, a] : joint.terms()) {
        const FockConfig mine = c.filtered(on_path);
        if (mine.total_photons() != 1) {
            throw DomainError("port '" + path + "' does not hold exactly one photon");
        }
        auto it = factor.find(mine.entries()[0].first);
        if (it != factor.end()) {
            complement[c.filtered(off_path)] += std::conj(it->second) * a;
        }
    }
    for (const auto &[c, a] : joint.terms()) {
        const Mode m = c.filtered(on_path).entries()[0].first;
        auto it = factor.find(m);
        const Amplitude predicted = (it == factor.end() ? Amplitude{} : it->second) * complement[c.filtered(off_path)];
        if (std::abs(predicted - a) > 1e-9) {
            throw DomainError("port '" + path + "' is entangled with the rest of the state");
        }
    }
    return factor;
}

}  // namespace detail

/// Reads one port of a product state: vacuum if no photon is there, a qubit if
/// the photon sits in bin 0 only and `expect_fused` is false, else a fused
/// payload. Defined up to a global phase.
inline PortContent read_port(const PhotonicState &joint, const std::string &path, bool expect_fused = false) {
    if (!joint.paths().contains(path)) {
        return PortContent::vacuum();
    }
    const auto factor = detail::factor_on(joint, path);
    std::array<Amplitude, 4> c{};
    bool late = false;
    for (const auto &[m, a] : factor) {
        if (m.bin > 1) {
            throw DomainError("port '" + path + "' holds a photon outside bins {0,1}");
        }
        late = late || m.bin == 1;
        c[static_cast<std::size_t>(m.bin * 2 + static_cast<int>(m.pol))] = a;
    }
    if (!late && !expect_fused) {
        return PortContent::qubit(QubitSpec(c[0], c[1]));
    }
    return PortContent::fused(FusedState(c, path));
}

struct UnitPorts {
    std::string a7 = "a7";
    std::string a8 = "a8";
    std::string b7 = "b7";
    std::string b8 = "b8";
};

struct UnitOutcome {
    PortContent out_b7 = PortContent::vacuum();
    PortContent out_b8 = PortContent::vacuum();
    bool success = false;
    double probability = 0;
    ClickPattern herald;
    /// Exact joint output state on (b7, b8); present on success.
    std::optional<PhotonicState> joint;
};

/// Path selection: f = 0 sends the inputs to the Fredkin arm (a7', a8'), f = 1
/// to the fusion arm (a7'', a8''). Amplitudes are untouched.
inline PhotonicState path_select(const PhotonicState &state, bool fusion, const UnitPorts &ports = {}) {
    const std::string suffix = fusion ? "''" : "'";
    return rename_paths(state, {{ports.a7, ports.a7 + suffix}, {ports.a8, ports.a8 + suffix}});
}

/// Heralded success probability of the unit for one control setting.
inline double unit_probability(const SwitchControls &c, FeedForward ff) {
    return c.fusion ? fusion_probability(ff) : kFredkinSuccess;
}

inline double unit_probability(const SwitchControls &c, const ChannelOptions &opts) {
    return c.fusion ? fusion_success_probability(opts) : fredkin_success_probability(opts);
}

namespace detail {

inline UnitOutcome oqsu_impl(const PortContent &in7, const PortContent &in8, const SwitchControls &c,
                             const ChannelOptions &opts, const UnitPorts &ports, Rng *rng) {
    if (in7.kind() == PortContent::Kind::Fused || in8.kind() == PortContent::Kind::Fused) {
        throw UnsupportedError("the basic switch unit takes single qubits; fused inputs need a composite unit");
    }
    if (c.fusion && !c.convert) {
        throw DomainError("fusion mode needs the converter enabled (d = 1)");
    }
    const PhotonicState routed = path_select(tensor(in7.to_state(ports.a7), in8.to_state(ports.a8)), c.fusion, ports);

    UnitOutcome out;
    out.probability = unit_probability(c, opts);
    if (!c.fusion) {
        const FredkinPorts fp{ports.a7 + "'", ports.a8 + "'", ports.b7, ports.b8};
        HeraldOutcome h = rng ? fredkin(routed, c.cross, *rng, opts, fp) : fredkin(routed, c.cross, opts, fp);
        if (!h.success) {
            return out;
        }
        out.success = true;
        out.herald = h.pattern;
        out.out_b7 = read_port(h.state(), ports.b7);
        out.out_b8 = read_port(h.state(), ports.b8);
        out.joint = std::move(h.output);
        return out;
    }

    if (in7.kind() == PortContent::Kind::Vacuum || in8.kind() == PortContent::Kind::Vacuum) {
        throw DomainError("fusion mode needs a photon on both inputs");
    }
    const std::string &target = c.select_b7 ? ports.b7 : ports.b8;
    FusionPorts fp;
    fp.in3 = ports.a7 + "''";
    fp.in4 = ports.a8 + "''";
    fp.arm3 = target + ".b3'";
    fp.arm4 = target + ".b4'";
    fp.merged = target;
    HeraldOutcome h = rng ? fuse(routed, *rng, opts, c.convert, fp) : fuse(routed, opts, c.convert, fp);
    if (!h.success) {
        return out;
    }
    out.success = true;
    out.herald = h.pattern;
    PortContent fused = PortContent::fused(FusedState::from_state(h.state(), target));
    (c.select_b7 ? out.out_b7 : out.out_b8) = std::move(fused);
    out.joint = std::move(h.output);
    return out;
}

}  // namespace detail

/// The block-free switch unit in analytic mode (success branch).
inline UnitOutcome oqsu(const PortContent &in_a7, const PortContent &in_a8, const SwitchControls &c,
                        const ChannelOptions &opts = {}, const UnitPorts &ports = {}) {
    return detail::oqsu_impl(in_a7, in_a8, c, opts, ports, nullptr);
}

/// The block-free switch unit with sampled heralds.
inline UnitOutcome oqsu(const PortContent &in_a7, const PortContent &in_a8, const SwitchControls &c, Rng &rng,
                        const ChannelOptions &opts = {}, const UnitPorts &ports = {}) {
    return detail::oqsu_impl(in_a7, in_a8, c, opts, ports, &rng);
}

/// Result of a composite unit. Outputs live on b7 and b8 of `output`.
struct VariantOutcome {
    bool success = false;
    double probability = 0;
    /// Herald patterns of every constituent that ran, keyed "<stage>.<detector>".
    ClickPattern herald;
    std::optional<PhotonicState> output;

    const PhotonicState &state() const {
        if (!output) {
            throw Error("composite unit failed; no output state");
        }
        return *output;
    }
};

namespace detail {

/// Runs heralded stages in order and stops at the first failure.
class Chain {
   public:
    Chain(PhotonicState start, double probability, Rng *rng) : state_(std::move(start)), rng_(rng) {
        out_.probability = probability;
    }

    template <typename Op>
    Chain &then(const std::string &tag, Op &&op) {
        if (failed_) {
            return *this;
        }
        HeraldOutcome h = op(state_, rng_);
        if (!h.success) {
            failed_ = true;
            return *this;
        }
        for (const auto &[label, n] : h.pattern) {
            out_.herald[tag + "." + label] = n;
        }
        state_ = std::move(*h.output);
        return *this;
    }

    VariantOutcome finish(const std::map<std::string, std::string> &renames = {}) {
        if (!failed_) {
            out_.success = true;
            out_.output = rename_paths(state_, renames);
        }
        return std::move(out_);
    }

   private:
    PhotonicState state_;
    Rng *rng_;
    bool failed_ = false;
    VariantOutcome out_;
};

inline auto fission_step(const ChannelOptions &opts, FissionPorts ports) {
    return [&opts, ports](const PhotonicState &s, Rng *rng) {
        return rng ? fission(s, *rng, opts, ports) : fission(s, opts, ports);
    };
}

inline auto fusion_step(const ChannelOptions &opts, FusionPorts ports) {
    return [&opts, ports](const PhotonicState &s, Rng *rng) {
        return rng ? fuse(s, *rng, opts, true, ports) : fuse(s, opts, true, ports);
    };
}

inline auto fredkin_step(const ChannelOptions &opts, bool cross, FredkinPorts ports) {
    return [&opts, cross, ports](const PhotonicState &s, Rng *rng) {
        return rng ? fredkin(s, cross, *rng, opts, ports) : fredkin(s, cross, opts, ports);
    };
}

inline VariantOutcome variant_a_impl(const FusedState &fused_in, bool cross, const ChannelOptions &opts, Rng *rng) {
    const FissionPorts fis;
    return Chain(fused_in.with_carrier(fis.fused).to_state(),
                 fission_success_probability(opts) * fredkin_success_probability(opts), rng)
        .then("fission", fission_step(opts, fis))
        .then("fredkin", fredkin_step(opts, cross, {fis.out5, fis.out6, "b7", "b8"}))
        .finish();
}

inline VariantOutcome variant_b_impl(const FusedState &fused_in, const QubitSpec &single_in, bool s,
                                     const ChannelOptions &opts, Rng *rng) {
    const FissionPorts fis;
    const std::string single_path = "c";
    FusionPorts fus;
    fus.in3 = single_path;
    fus.in4 = s ? fis.out5 : fis.out6;
    fus.arm3 = "b8.b3'";
    fus.arm4 = "b8.b4'";
    fus.merged = "b8";
    const std::string &direct = s ? fis.out6 : fis.out5;
    return Chain(tensor(fused_in.with_carrier(fis.fused).to_state(), make_qubit_state(single_path, 0, single_in)),
                 fission_success_probability(opts) * fusion_success_probability(opts), rng)
        .then("fission", fission_step(opts, fis))
        .then("fusion", fusion_step(opts, fus))
        .finish({{direct, "b7"}});
}

inline VariantOutcome variant_c_impl(const FusedState &fused_in, const QubitSpec &single_in, bool cross,
                                     const ChannelOptions &opts, Rng *rng) {
    // The single photon occupies bin 0; its bin-1 slot is the inserted vacuum,
    // so both inputs span two time bins.
    return Chain(tensor(fused_in.with_carrier("a7").to_state(), make_qubit_state("a8", 0, single_in)),
                 fredkin_success_probability(opts), rng)
        .then("fredkin", fredkin_step(opts, cross, {"a7", "a8", "b7", "b8"}))
        .finish();
}

inline VariantOutcome variant_d_impl(const FusedState &fused1, const FusedState &fused2, const ChannelOptions &opts,
                                     Rng *rng) {
    const FissionPorts first{"a56", "a5'", "a6'", "b5", "b6"};
    const FissionPorts second{"c56", "c5'", "c6'", "c5", "c6"};
    // Exchange the polarization-slot qubits: (qA,qB), (qC,qD) -> (qA,qD), (qC,qB).
    const FusionPorts upper{second.out6, first.out5, "b7.b3'", "b7.b4'", "b7"};
    const FusionPorts lower{first.out6, second.out5, "b8.b3'", "b8.b4'", "b8"};
    const double pf = fission_success_probability(opts);
    const double pu = fusion_success_probability(opts);
    return Chain(tensor(fused1.with_carrier(first.fused).to_state(), fused2.with_carrier(second.fused).to_state()),
                 pf * pf * pu * pu, rng)
        .then("fission1", fission_step(opts, first))
        .then("fission2", fission_step(opts, second))
        .then("fusion1", fusion_step(opts, upper))
        .then("fusion2", fusion_step(opts, lower))
        .finish();
}

}  // namespace detail

/// (a) fission then Fredkin: the time-bin qubit leaves on b7 and the
/// polarization qubit on b8, swapped when `cross`.
inline VariantOutcome variant_a(const FusedState &fused_in, bool cross, const ChannelOptions &opts = {}) {
    return detail::variant_a_impl(fused_in, cross, opts, nullptr);
}
inline VariantOutcome variant_a(const FusedState &fused_in, bool cross, Rng &rng, const ChannelOptions &opts = {}) {
    return detail::variant_a_impl(fused_in, cross, opts, &rng);
}

/// (b) fission then fusion with a single input. With s = 0 the time-bin qubit
/// of the fused input leaves on b7 and its polarization qubit is re-fused with
/// `single_in`; with s = 1 the roles of the two qubits are exchanged. The
/// re-fused payload on b8 carries the fission qubit in its time bin and
/// `single_in` in its polarization.
inline VariantOutcome variant_b(const FusedState &fused_in, const QubitSpec &single_in, bool s,
                                const ChannelOptions &opts = {}) {
    return detail::variant_b_impl(fused_in, single_in, s, opts, nullptr);
}
inline VariantOutcome variant_b(const FusedState &fused_in, const QubitSpec &single_in, bool s, Rng &rng,
                                const ChannelOptions &opts = {}) {
    return detail::variant_b_impl(fused_in, single_in, s, opts, &rng);
}

/// (c) one Fredkin gate acting on a fused input (a7) and a vacuum-padded single
/// input (a8), swapping the whole two-bin payloads when `cross`.
inline VariantOutcome variant_c(const FusedState &fused_in, const QubitSpec &single_in, bool cross,
                                const ChannelOptions &opts = {}) {
    return detail::variant_c_impl(fused_in, single_in, cross, opts, nullptr);
}
inline VariantOutcome variant_c(const FusedState &fused_in, const QubitSpec &single_in, bool cross, Rng &rng,
                                const ChannelOptions &opts = {}) {
    return detail::variant_c_impl(fused_in, single_in, cross, opts, &rng);
}

/// (d) two fissions and two fusions. Inputs (qA,qB) and (qC,qD), written as
/// (time-bin qubit, polarization qubit), leave as (qA,qD) on b7 and (qC,qB) on
/// b8.
inline VariantOutcome variant_d(const FusedState &fused1, const FusedState &fused2, const ChannelOptions &opts = {}) {
    return detail::variant_d_impl(fused1, fused2, opts, nullptr);
}
inline VariantOutcome variant_d(const FusedState &fused1, const FusedState &fused2, Rng &rng,
                                const ChannelOptions &opts = {}) {
    return detail::variant_d_impl(fused1, fused2, opts, &rng);
}

}  // namespace qbanyan
