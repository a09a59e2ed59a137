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

// Heralded primitives: controlled swap (Fredkin), state fusion and state
// fission.
//
// The Fredkin gate and the fusion/fission cores are modelled as heralded
// channels: on the success branch they apply a fixed linear map to the input
// photons, and the branch occurs with a fixed probability that does not depend
// on the input. The converters between spatial-polarization and
// time-polarization encodings are built from wave plates, beam splitters,
// delays and controlled flips.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbanyan/components.hpp"
#include "qbanyan/fock.hpp"

namespace qbanyan {

inline constexpr double kFredkinSuccess = 0.25;
inline constexpr double kFusionSuccess = 1.0 / 32.0;
inline constexpr double kFusionSuccessFeedForward = 1.0 / 8.0;

struct FeedForward {
    bool enabled = true;
};

inline double fusion_probability(FeedForward ff) {
    return ff.enabled ? kFusionSuccessFeedForward : kFusionSuccess;
}

/// Fission succeeds with the same probability as fusion.
inline double fission_probability(FeedForward ff) {
    return fusion_probability(ff);
}

/// Settings shared by every heralded channel.
struct ChannelOptions {
    FeedForward feed_forward{};
    DetectorModel detectors{};
};

inline ClickPattern fredkin_herald() {
    return {{"D1", 0}, {"D2", 0}};
}

/// D3/D5 watch the H outputs of the two fusion beam splitters, D4/D6 the V
/// outputs.
inline ClickPattern fusion_herald() {
    return {{"D3", 1}, {"D4", 0}, {"D5", 1}, {"D6", 0}};
}

inline ClickPattern fission_herald() {
    return {{"PBS20.H", 1}, {"PBS20.V", 0}};
}

/// Probability of a correct herald: the ideal channel constant times the
/// chance that the detector bank reports the herald pattern when the photons
/// are where it says. False heralds caused by loss are not counted.
inline double fredkin_success_probability(const ChannelOptions &opts = {}) {
    return kFredkinSuccess * herald_fidelity(fredkin_herald(), opts.detectors);
}

inline double fusion_success_probability(const ChannelOptions &opts = {}) {
    return fusion_probability(opts.feed_forward) * herald_fidelity(fusion_herald(), opts.detectors);
}

inline double fission_success_probability(const ChannelOptions &opts = {}) {
    return fission_probability(opts.feed_forward) * herald_fidelity(fission_herald(), opts.detectors);
}

struct HeraldOutcome {
    bool success = false;
    double probability = 0;
    ClickPattern pattern;
    std::optional<PhotonicState> output;

    const PhotonicState &state() const {
        if (!output) {
            throw Error("heralded operation failed; no output state");
        }
        return *output;
    }
};

/// Single photon in the time-polarization encoding: amplitude (bin, pol) for
/// bin in {0, 1}.
class FusedState {
   public:
    static constexpr double kNormTolerance = 1e-12;

    /// Coefficients ordered (bin0,H), (bin0,V), (bin1,H), (bin1,V).
    explicit FusedState(std::array<Amplitude, 4> coefficients, std::string carrier = "b43")
        : c_(coefficients), carrier_(std::move(carrier)) {
        double n = 0;
        for (auto a : c_) {
            n += std::norm(a);
        }
        if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
            throw NormError("fused state coefficients must have unit norm, got " + std::to_string(n));
        }
        if (carrier_.empty()) {
            throw DomainError("fused state carrier path must be non-empty");
        }
    }

    /// The time bin carries `bin_qubit` (bin 0 = H, bin 1 = V) and the
    /// polarization carries `pol_qubit`.
    static FusedState from_product(const QubitSpec &bin_qubit, const QubitSpec &pol_qubit,
                                   std::string carrier = "b43") {
        return FusedState({bin_qubit.h() * pol_qubit.h(), bin_qubit.h() * pol_qubit.v(), bin_qubit.v() * pol_qubit.h(),
                           bin_qubit.v() * pol_qubit.v()},
                          std::move(carrier));
    }

    Amplitude operator()(int bin, Polarization p) const {
        return c_.at(static_cast<std::size_t>(bin * 2 + static_cast<int>(p)));
    }
    const std::array<Amplitude, 4> &coefficients() const {
        return c_;
    }
    const std::string &carrier() const {
        return carrier_;
    }

    FusedState with_carrier(std::string path) const {
        return FusedState(c_, std::move(path));
    }

    PhotonicState to_state() const {
        PhotonicState::Terms t;
        for (int bin = 0; bin < 2; ++bin) {
            for (auto p : {Polarization::H, Polarization::V}) {
                t.emplace(FockConfig::single(Mode(carrier_, p, bin)), (*this)(bin, p));
            }
        }
        return PhotonicState(std::move(t));
    }

    /// Inverse of to_state. The state must hold exactly one photon, on
    /// `carrier`, in bin 0 or 1.
    static FusedState from_state(const PhotonicState &state, const std::string &carrier) {
        std::array<Amplitude, 4> c{};
        for (const auto &[config, amp] : state.terms()) {
            const auto &e = config.entries();
            if (e.size() != 1 || e[0].second != 1 || e[0].first.path != carrier || e[0].first.bin > 1) {
                throw DomainError("state is not a single photon in bins {0,1} of '" + carrier + "': " + config.str());
            }
            c[static_cast<std::size_t>(e[0].first.bin * 2 + static_cast<int>(e[0].first.pol))] = amp;
        }
        return FusedState(c, carrier);
    }

    double max_coefficient_diff(const FusedState &other) const {
        double d = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            d = std::max(d, std::abs(c_[i] - other.c_[i]));
        }
        return d;
    }

   private:
    std::array<Amplitude, 4> c_;
    std::string carrier_;
};

struct FredkinPorts {
    std::string in1 = "a1";
    std::string in2 = "a2";
    std::string out1 = "b1";
    std::string out2 = "b2";
};

struct FusionPorts {
    std::string in3 = "a3";
    std::string in4 = "a4";
    std::string arm3 = "b3'";
    std::string arm4 = "b4'";
    std::string merged = "b43";
};

struct FissionPorts {
    std::string fused = "a56";
    std::string arm5 = "a5'";
    std::string arm6 = "a6'";
    std::string out5 = "b5";
    std::string out6 = "b6";
};

/// Reads a classical control bit off a basis-state control qubit.
inline bool control_bit(const QubitSpec &control) {
    const bool has_h = std::abs(control.h()) > 1e-12;
    const bool has_v = std::abs(control.v()) > 1e-12;
    if (has_h && has_v) {
        throw UnsupportedError("superposed control qubits are not supported; use |H> (0) or |V> (1)");
    }
    return has_v;
}

namespace detail {

/// Throws unless none of `paths` carries a photon, ignoring `allowed`.
inline void require_free(const PhotonicState &state, const std::vector<std::string> &paths,
                         const std::vector<std::string> &allowed, const char *op) {
    const auto occupied = state.paths();
    for (const auto &p : paths) {
        if (occupied.contains(p) && std::find(allowed.begin(), allowed.end(), p) == allowed.end()) {
            throw DomainError(std::string(op) + ": output path '" + p + "' is already occupied");
        }
    }
}

inline HeraldOutcome herald(PhotonicState mapped, double p, ClickPattern pattern, Rng *rng) {
    HeraldOutcome out;
    out.probability = p;
    out.success = rng == nullptr || bernoulli(*rng, p);
    if (out.success) {
        out.pattern = std::move(pattern);
        out.output = std::move(mapped);
    }
    return out;
}

}  // namespace detail

/// Success-branch map of the Fredkin gate. Each input path carries at most one
/// photon per term (an idle input is vacuum). Photons keep their polarization
/// and time bin; in1 goes to out1 and in2 to out2, or crossed when `cross`.
inline PhotonicState fredkin_map(const PhotonicState &state, bool cross, const FredkinPorts &ports = {}) {
    for (const auto &[config, amp] : state.terms()) {
        if (config.photons_on(ports.in1) > 1 || config.photons_on(ports.in2) > 1) {
            throw DomainError("fredkin: each input must carry a single photon, got " + config.str());
        }
    }
    detail::require_free(state, {ports.out1, ports.out2}, {ports.in1, ports.in2}, "fredkin");
    const std::string &to1 = cross ? ports.out2 : ports.out1;
    const std::string &to2 = cross ? ports.out1 : ports.out2;
    return relabel(state, [&](const Mode &m) {
        if (m.path == ports.in1) {
            return Mode(to1, m.pol, m.bin);
        }
        if (m.path == ports.in2) {
            return Mode(to2, m.pol, m.bin);
        }
        return m;
    });
}

/// Fredkin gate in analytic mode: the success branch with its probability.
inline HeraldOutcome fredkin(const PhotonicState &state, bool cross, const ChannelOptions &opts = {},
                             const FredkinPorts &ports = {}) {
    return detail::herald(fredkin_map(state, cross, ports), fredkin_success_probability(opts), fredkin_herald(), nullptr);
}

/// Fredkin gate with the herald sampled from `rng`.
inline HeraldOutcome fredkin(const PhotonicState &state, bool cross, Rng &rng, const ChannelOptions &opts = {},
                             const FredkinPorts &ports = {}) {
    return detail::herald(fredkin_map(state, cross, ports), fredkin_success_probability(opts), fredkin_herald(), &rng);
}

inline HeraldOutcome fredkin(const QubitSpec &q1, const QubitSpec &q2, bool cross, const ChannelOptions &opts = {},
                             const FredkinPorts &ports = {}) {
    return fredkin(tensor(make_qubit_state(ports.in1, 0, q1), make_qubit_state(ports.in2, 0, q2)), cross, opts, ports);
}

/// Success-branch map of the fusion core. The photon from in4 sets the arm
/// (H -> arm3, V -> arm4) and the photon from in3 keeps its polarization on
/// the single surviving photon.
inline PhotonicState fuse_spatial(const PhotonicState &state, const FusionPorts &ports = {}) {
    detail::require_free(state, {ports.arm3, ports.arm4}, {}, "fuse_spatial");
    PhotonicState::Terms out;
    for (const auto &[config, amp] : state.terms()) {
        std::optional<Mode> m3, m4;
        std::vector<FockConfig::Entry> rest;
        for (const auto &[m, n] : config.entries()) {
            if (m.path == ports.in3 || m.path == ports.in4) {
                if (n != 1 || m.bin != 0) {
                    throw DomainError("fuse: inputs must be single photons in bin 0, got " + config.str());
                }
                (m.path == ports.in3 ? m3 : m4) = m;
            } else {
                rest.emplace_back(m, n);
            }
        }
        if (!m3 || !m4 || config.photons_on(ports.in3) != 1 || config.photons_on(ports.in4) != 1) {
            throw DomainError("fuse: each input must carry exactly one photon, got " + config.str());
        }
        const std::string &arm = m4->pol == Polarization::H ? ports.arm3 : ports.arm4;
        rest.emplace_back(Mode(arm, m3->pol, 0), 1);
        out[FockConfig(std::move(rest))] += amp;
    }
    return PhotonicState(std::move(out));
}

/// Merges the two fusion arms onto one path: arm3 lands in bin 0 and arm4 in
/// bin 1 of `merged`, polarization preserved. `enable` is the converter
/// control; when clear the state passes untouched.
///
/// Layout: a 45-degree plate on arm3, a one-bin delay on arm4, a beam splitter
/// mixing the arms, flips gated to bin 0 on both of its outputs, and a second
/// beam splitter whose reflected port is `merged`.
inline PhotonicState spatial_to_time(const PhotonicState &state, bool enable, const FusionPorts &ports = {}) {
    if (!enable) {
        return state;
    }
    const std::string o1 = ports.merged + "#1";
    const std::string o2 = ports.merged + "#2";
    const std::string dump = ports.merged + "#dump";
    detail::require_free(state, {ports.merged, o1, o2, dump}, {}, "spatial_to_time");
    for (const auto &[config, amp] : state.terms()) {
        int n = 0;
        for (const auto &[m, c] : config.entries()) {
            if (m.path == ports.arm3 || m.path == ports.arm4) {
                if (m.bin != 0) {
                    throw DomainError("spatial_to_time: photon outside bin 0: " + config.str());
                }
                n += c;
            }
        }
        if (n != 1) {
            throw DomainError("spatial_to_time: expected one photon over the two arms, got " + config.str());
        }
    }
    PhotonicState s = hwp_apply(state, ports.arm3, HwpSetting(45.0));
    s = delay_apply(s, ports.arm4, 1);
    s = pbs_apply(s, ports.arm3, ports.arm4, o1, o2);
    s = controlled_flip(s, enable, o1, BinSelector::only(0));
    s = controlled_flip(s, enable, o2, BinSelector::only(0));
    s = pbs_apply(s, o1, o2, dump, ports.merged);
    const auto left = s.paths();
    for (const auto &p : {dump, o1, o2, ports.arm3, ports.arm4}) {
        if (left.contains(p)) {
            throw Error("spatial_to_time: photon left on internal path '" + p + "'");
        }
    }
    return s;
}

/// Splits a time-polarization photon on `in` into bin 0 -> `out_early` and
/// bin 1 -> `out_late`, both re-timed to bin 0, polarization preserved.
///
/// Layout: a beam splitter separating H and V, flips gated to bin 1 on both
/// arms, a second beam splitter that sorts by time, a 45-degree plate on the
/// late arm, and a one-bin delay on the early arm so both leave together.
inline PhotonicState time_to_spatial(const PhotonicState &state, bool enable, const std::string &in,
                                     const std::string &out_early, const std::string &out_late) {
    if (!enable) {
        return state;
    }
    const std::string h_arm = in + "#h";
    const std::string v_arm = in + "#v";
    const std::string idle = in + "#idle";
    detail::require_free(state, {out_early, out_late, h_arm, v_arm, idle}, {}, "time_to_spatial");
    for (const auto &[config, amp] : state.terms()) {
        int n = 0;
        for (const auto &[m, c] : config.entries()) {
            if (m.path == in) {
                if (m.bin > 1) {
                    throw DomainError("time_to_spatial: photon outside bins {0,1}: " + config.str());
                }
                n += c;
            }
        }
        if (n != 1) {
            throw DomainError("time_to_spatial: expected one photon on '" + in + "', got " + config.str());
        }
    }
    PhotonicState s = pbs_apply(state, in, idle, h_arm, v_arm);
    s = controlled_flip(s, enable, h_arm, BinSelector::only(1));
    s = controlled_flip(s, enable, v_arm, BinSelector::only(1));
    s = pbs_apply(s, v_arm, h_arm, out_late, out_early);
    s = hwp_apply(s, out_late, HwpSetting(45.0));
    s = delay_apply(s, out_early, 1);
    // Both arms now sit in bin 1; move the time origin there.
    return relabel(s, [&](const Mode &m) {
        return m.path == out_early || m.path == out_late ? Mode(m.path, m.pol, m.bin - 1) : m;
    });
}

inline PhotonicState time_to_spatial(const PhotonicState &state, bool enable, const FissionPorts &ports = {}) {
    return time_to_spatial(state, enable, ports.fused, ports.arm5, ports.arm6);
}

namespace detail {

inline HeraldOutcome fuse_impl(const PhotonicState &state, const ChannelOptions &opts, bool enable,
                               const FusionPorts &ports, Rng *rng) {
    PhotonicState s = spatial_to_time(fuse_spatial(state, ports), enable, ports);
    return herald(std::move(s), fusion_success_probability(opts), fusion_herald(), rng);
}

}  // namespace detail

/// Fusion followed by the spatial-to-time converter. The photon on in4 ends up
/// in the time bin (H -> bin 0), the photon on in3 in the polarization.
inline HeraldOutcome fuse(const PhotonicState &state, const ChannelOptions &opts = {}, bool enable_converter = true,
                          const FusionPorts &ports = {}) {
    return detail::fuse_impl(state, opts, enable_converter, ports, nullptr);
}

inline HeraldOutcome fuse(const PhotonicState &state, Rng &rng, const ChannelOptions &opts = {},
                          bool enable_converter = true, const FusionPorts &ports = {}) {
    return detail::fuse_impl(state, opts, enable_converter, ports, &rng);
}

inline HeraldOutcome fuse(const QubitSpec &q3, const QubitSpec &q4, const ChannelOptions &opts = {},
                          bool enable_converter = true, const FusionPorts &ports = {}) {
    return fuse(tensor(make_qubit_state(ports.in3, 0, q3), make_qubit_state(ports.in4, 0, q4)), opts,
                enable_converter, ports);
}

/// Success-branch map of the fission core: a photon on arm5 or arm6 becomes
/// two photons. The arm becomes the out5 qubit (arm5 -> H, arm6 -> V) and the
/// polarization becomes the out6 qubit.
inline PhotonicState fission_core(const PhotonicState &state, const FissionPorts &ports = {}) {
    detail::require_free(state, {ports.out5, ports.out6}, {}, "fission");
    PhotonicState::Terms out;
    for (const auto &[config, amp] : state.terms()) {
        std::optional<Mode> carrier;
        std::vector<FockConfig::Entry> rest;
        for (const auto &[m, n] : config.entries()) {
            if (m.path == ports.arm5 || m.path == ports.arm6) {
                if (n != 1 || m.bin != 0 || carrier) {
                    throw DomainError("fission: expected one photon in bin 0 over the arms, got " + config.str());
                }
                carrier = m;
            } else {
                rest.emplace_back(m, n);
            }
        }
        if (!carrier) {
            throw DomainError("fission: no photon on the fission arms in " + config.str());
        }
        rest.emplace_back(Mode(ports.out5, carrier->path == ports.arm5 ? Polarization::H : Polarization::V, 0), 1);
        rest.emplace_back(Mode(ports.out6, carrier->pol, 0), 1);
        out[FockConfig(std::move(rest))] += amp;
    }
    return PhotonicState(std::move(out));
}

namespace detail {

inline HeraldOutcome fission_impl(const PhotonicState &state, const ChannelOptions &opts, const FissionPorts &ports,
                                  Rng *rng) {
    PhotonicState s = fission_core(time_to_spatial(state, true, ports), ports);
    return herald(std::move(s), fission_success_probability(opts), fission_herald(), rng);
}

}  // namespace detail

/// Fission of a time-polarization photon on ports.fused. On success, out5
/// carries the time-bin qubit and out6 the polarization qubit, so
/// fission(fuse(q3, q4)) leaves q4 on out5 and q3 on out6.
inline HeraldOutcome fission(const PhotonicState &state, const ChannelOptions &opts = {},
                             const FissionPorts &ports = {}) {
    return detail::fission_impl(state, opts, ports, nullptr);
}

inline HeraldOutcome fission(const PhotonicState &state, Rng &rng, const ChannelOptions &opts = {},
                             const FissionPorts &ports = {}) {
    return detail::fission_impl(state, opts, ports, &rng);
}

inline HeraldOutcome fission(const FusedState &fused, const ChannelOptions &opts = {},
                             const FissionPorts &ports = {}) {
    return fission(fused.with_carrier(ports.fused).to_state(), opts, ports);
}

inline HeraldOutcome fission(const FusedState &fused, Rng &rng, const ChannelOptions &opts = {},
                             const FissionPorts &ports = {}) {
    return fission(fused.with_carrier(ports.fused).to_state(), rng, opts, ports);
}

}  // namespace qbanyan
