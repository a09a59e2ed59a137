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

// Passive optical elements and photon detectors.
//
// Conventions: a polarizing beam splitter transmits H and reflects V with no
// extra reflection phase. Time bins are abstract integer slots; the physical
// bin spacing is assumed larger than the optical pulse width and the detector
// dead time, so photons in different bins never interfere.

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbanyan/fock.hpp"

namespace qbanyan {

/// Selects either every time bin or one specific bin of a path.
class BinSelector {
   public:
    static BinSelector all() {
        return BinSelector(std::nullopt);
    }
    static BinSelector only(int bin) {
        return BinSelector(bin);
    }

    bool matches(int bin) const {
        return !bin_ || *bin_ == bin;
    }
    std::optional<int> bin() const {
        return bin_;
    }

   private:
    explicit BinSelector(std::optional<int> b) : bin_(b) {}
    std::optional<int> bin_;
};

/// Half-wave plate angle in degrees from the H axis, reduced to (-90, 90].
class HwpSetting {
   public:
    explicit HwpSetting(double theta_deg) {
        if (!std::isfinite(theta_deg)) {
            throw DomainError("half-wave plate angle must be finite");
        }
        double t = std::fmod(theta_deg, 180.0);
        if (t <= -90.0) {
            t += 180.0;
        } else if (t > 90.0) {
            t -= 180.0;
        }
        theta_ = t;
    }
    double degrees() const {
        return theta_;
    }

   private:
    double theta_;
};

/// Jones matrix [[cos 2t, sin 2t], [sin 2t, -cos 2t]] on the (H, V) basis.
/// Column j is the image of basis state j.
inline ComplexMatrix hwp_matrix(const HwpSetting &setting) {
    const double two_theta = 2.0 * setting.degrees() * M_PI / 180.0;
    double c = std::cos(two_theta);
    double s = std::sin(two_theta);
    // Snap the common plate angles to exact values.
    if (std::abs(c) < 1e-15) {
        c = 0;
    }
    if (std::abs(s) < 1e-15) {
        s = 0;
    }
    return ComplexMatrix{{c, s}, {s, -c}};
}

/// Applies a wave plate to every photon on `path` in the selected bins.
inline PhotonicState hwp_apply(const PhotonicState &state, const std::string &path, const HwpSetting &setting,
                               BinSelector sel = BinSelector::all()) {
    const ComplexMatrix jones = hwp_matrix(setting);
    PhotonicState out = state;
    for (int b : bins_on(state, path)) {
        if (!sel.matches(b)) {
            continue;
        }
        const std::vector<Mode> modes{Mode(path, Polarization::H, b), Mode(path, Polarization::V, b)};
        out = apply_mode_map(out, modes, jones);
    }
    return out;
}

/// Polarizing beam splitter. Port in1 transmits to out_transmit and reflects to
/// out_reflect; port in2 transmits to out_reflect and reflects to
/// out_transmit. Input and output labels may coincide (a path that continues
/// straight through).
inline PhotonicState pbs_apply(const PhotonicState &state, const std::string &in1, const std::string &in2,
                               const std::string &out_transmit, const std::string &out_reflect,
                               BinSelector sel = BinSelector::all()) {
    if (in1 == in2 || out_transmit == out_reflect) {
        throw DomainError("pbs_apply: the two inputs and the two outputs must be distinct");
    }
    auto bins = bins_on(state, in1);
    bins.merge(bins_on(state, in2));
    using P = Polarization;
    PhotonicState out = state;
    for (int b : bins) {
        if (!sel.matches(b)) {
            continue;
        }
        const std::vector<Mode> ins{Mode(in1, P::H, b), Mode(in1, P::V, b), Mode(in2, P::H, b), Mode(in2, P::V, b)};
        const std::vector<Mode> outs{Mode(out_transmit, P::H, b), Mode(out_reflect, P::V, b),
                                     Mode(out_reflect, P::H, b), Mode(out_transmit, P::V, b)};
        out = apply_mode_map(out, ins, outs, ComplexMatrix::identity(4));
    }
    return out;
}

/// Fibre delay: every photon on `path` moves `delta_bins` slots later.
inline PhotonicState delay_apply(const PhotonicState &state, const std::string &path, int delta_bins) {
    if (delta_bins < 0) {
        throw DomainError("delay_apply: delay must be non-negative");
    }
    if (delta_bins == 0) {
        return state;
    }
    return relabel(state, [&](const Mode &m) {
        return m.path == path ? Mode(m.path, m.pol, m.bin + delta_bins) : m;
    });
}

/// Classically controlled NOT on polarization: flips H and V on `path` in the
/// selected bins when `control` is set.
inline PhotonicState controlled_flip(const PhotonicState &state, bool control, const std::string &path,
                                     BinSelector sel = BinSelector::all()) {
    if (!control) {
        return state;
    }
    return relabel(state, [&](const Mode &m) {
        return m.path == path && sel.matches(m.bin) ? Mode(m.path, flipped(m.pol), m.bin) : m;
    });
}

/// Detector imperfections. The default is an ideal photon-number-resolving
/// detector.
struct DetectorModel {
    double efficiency = 1.0;
    double dark_count_prob = 0.0;
    bool number_resolving = true;

    void validate() const {
        if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
            throw DomainError("detector efficiency must lie in [0,1]");
        }
        if (!(dark_count_prob >= 0.0 && dark_count_prob < 1.0)) {
            throw DomainError("dark count probability must lie in [0,1)");
        }
    }

    bool ideal() const {
        return efficiency == 1.0 && dark_count_prob == 0.0;
    }
};

/// Detector label -> observed count.
using ClickPattern = std::map<std::string, int>;

inline std::string to_string(const ClickPattern &p) {
    std::string out;
    for (const auto &[label, n] : p) {
        if (!out.empty()) {
            out += ',';
        }
        out += label + "=" + std::to_string(n);
    }
    return out;
}

/// A detector watching every polarization of `path` in the selected bins.
struct DetectorSpec {
    std::string label;
    std::string path;
    BinSelector bins = BinSelector::all();
};

namespace detail {

/// P(observed | n photons arrive) for one detector.
inline std::map<int, double> observed_count_distribution(int n, const DetectorModel &model) {
    std::map<int, double> out;
    for (int k = 0; k <= n; ++k) {
        const double thin = std::tgamma(n + 1) / (std::tgamma(k + 1) * std::tgamma(n - k + 1)) *
                            std::pow(model.efficiency, k) * std::pow(1.0 - model.efficiency, n - k);
        if (thin == 0.0) {
            continue;
        }
        for (int dark = 0; dark <= 1; ++dark) {
            const double pd = dark ? model.dark_count_prob : 1.0 - model.dark_count_prob;
            if (pd == 0.0) {
                continue;
            }
            int seen = k + dark;
            if (!model.number_resolving) {
                seen = std::min(seen, 1);
            }
            out[seen] += thin * pd;
        }
    }
    return out;
}

inline std::vector<int> true_counts(const FockConfig &c, const std::vector<DetectorSpec> &detectors) {
    std::vector<int> counts(detectors.size(), 0);
    for (const auto &[m, n] : c.entries()) {
        for (std::size_t d = 0; d < detectors.size(); ++d) {
            if (m.path == detectors[d].path && detectors[d].bins.matches(m.bin)) {
                counts[d] += n;
            }
        }
    }
    return counts;
}

}  // namespace detail

/// Exact distribution of click patterns. Absent paths read as vacuum.
inline std::map<ClickPattern, double> detect_distribution(const PhotonicState &state,
                                                          const std::vector<DetectorSpec> &detectors,
                                                          const DetectorModel &model = {}) {
    model.validate();
    std::map<ClickPattern, double> out;
    for (const auto &[config, amp] : state.terms()) {
        const double w = std::norm(amp);
        const auto counts = detail::true_counts(config, detectors);
        std::map<ClickPattern, double> partial{{ClickPattern{}, w}};
        for (std::size_t d = 0; d < detectors.size(); ++d) {
            std::map<ClickPattern, double> next;
            for (const auto &[seen, p] : detail::observed_count_distribution(counts[d], model)) {
                for (const auto &[pattern, q] : partial) {
                    ClickPattern extended = pattern;
                    extended[detectors[d].label] = seen;
                    next[extended] += p * q;
                }
            }
            partial = std::move(next);
        }
        for (const auto &[pattern, p] : partial) {
            out[pattern] += p;
        }
    }
    return out;
}

struct SampledDetection {
    ClickPattern pattern;
    PhotonicState conditioned;
};

/// Samples one detection record. The measured modes are read out in the Fock
/// basis (the finest record), the remaining photons are returned as the pure
/// conditioned state, and the click counts are then degraded by the detector
/// model.
inline SampledDetection detect_sample(const PhotonicState &state, const std::vector<DetectorSpec> &detectors,
                                      const DetectorModel &model, Rng &rng) {
    model.validate();
    auto measured = [&](const Mode &m) {
        for (const auto &d : detectors) {
            if (m.path == d.path && d.bins.matches(m.bin)) {
                return true;
            }
        }
        return false;
    };
    const FockConfig outcome = sample_config(state, rng);
    const FockConfig seen_part = outcome.filtered(measured);

    PhotonicState::Terms rest;
    for (const auto &[c, a] : state.terms()) {
        if (c.filtered(measured) == seen_part) {
            rest[c.filtered([&](const Mode &m) {
                return !measured(m);
            })] += a;
        }
    }

    ClickPattern pattern;
    const auto counts = detail::true_counts(outcome, detectors);
    for (std::size_t d = 0; d < detectors.size(); ++d) {
        int seen = 0;
        for (int k = 0; k < counts[d]; ++k) {
            seen += bernoulli(rng, model.efficiency) ? 1 : 0;
        }
        seen += bernoulli(rng, model.dark_count_prob) ? 1 : 0;
        if (!model.number_resolving) {
            seen = std::min(seen, 1);
        }
        pattern[detectors[d].label] = seen;
    }
    return {std::move(pattern), PhotonicState(std::move(rest)).normalized()};
}

/// Probability that a detector bank reports `herald` when the photons really
/// are where the herald says. Computed by running detect_distribution on the
/// ideal herald configuration; equals 1 for ideal detectors.
inline double herald_fidelity(const ClickPattern &herald, const DetectorModel &model) {
    std::vector<DetectorSpec> detectors;
    std::vector<FockConfig::Entry> photons;
    for (const auto &[label, n] : herald) {
        const std::string path = "det:" + label;
        detectors.push_back({label, path, BinSelector::all()});
        if (n > 0) {
            photons.emplace_back(Mode(path, Polarization::H, 0), n);
        }
    }
    PhotonicState::Terms t;
    t.emplace(FockConfig(std::move(photons)), 1.0);
    const auto dist = detect_distribution(PhotonicState(std::move(t)), detectors, model);
    auto it = dist.find(herald);
    return it == dist.end() ? 0.0 : it->second;
}

}  // namespace qbanyan
