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

// Exact sparse simulation of multi-photon states over labelled optical modes.
//
// A state is a finite superposition of Fock configurations. Each mode is a
// (path, polarization, time bin) triple; passive optics acts by substituting
// creation operators, and heralding acts by projection.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbanyan/error.hpp"
#include "qbanyan/rng.hpp"

namespace qbanyan {

using Amplitude = std::complex<double>;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

constexpr Polarization flipped(Polarization p) {
    return p == Polarization::H ? Polarization::V : Polarization::H;
}

constexpr char to_char(Polarization p) {
    return p == Polarization::H ? 'H' : 'V';
}

/// One optical mode. Ordered by (path, pol, bin) so configurations have a
/// canonical form.
struct Mode {
    std::string path;
    Polarization pol = Polarization::H;
    int bin = 0;

    Mode(std::string path_, Polarization pol_, int bin_ = 0) : path(std::move(path_)), pol(pol_), bin(bin_) {
        if (path.empty()) {
            throw DomainError("mode path label must be non-empty");
        }
        if (bin < 0) {
            throw DomainError("mode time bin must be non-negative, got " + std::to_string(bin));
        }
    }

    std::string str() const {
        return path + ":" + to_char(pol) + "@" + std::to_string(bin);
    }

    friend auto operator<=>(const Mode &, const Mode &) = default;
    friend bool operator==(const Mode &, const Mode &) = default;
};

/// Occupation numbers of a finite set of modes, kept sorted with no zero
/// entries so that equal configurations compare equal structurally.
class FockConfig {
   public:
    using Entry = std::pair<Mode, int>;

    FockConfig() = default;

    explicit FockConfig(std::vector<Entry> entries) : entries_(std::move(entries)) {
        for (const auto &[mode, n] : entries_) {
            if (n < 0) {
                throw DomainError("negative photon count on " + mode.str());
            }
        }
        std::sort(entries_.begin(), entries_.end(), [](const Entry &a, const Entry &b) {
            return a.first < b.first;
        });
        std::vector<Entry> merged;
        for (auto &e : entries_) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
            } else {
                merged.push_back(std::move(e));
            }
        }
        std::erase_if(merged, [](const Entry &e) {
            return e.second == 0;
        });
        entries_ = std::move(merged);
    }

    static FockConfig single(Mode m) {
        return FockConfig({{std::move(m), 1}});
    }

    const std::vector<Entry> &entries() const {
        return entries_;
    }
    bool empty() const {
        return entries_.empty();
    }

    int count(const Mode &m) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), m, [](const Entry &e, const Mode &key) {
            return e.first < key;
        });
        return it != entries_.end() && it->first == m ? it->second : 0;
    }

    int total_photons() const {
        int n = 0;
        for (const auto &e : entries_) {
            n += e.second;
        }
        return n;
    }

    int photons_on(std::string_view path) const {
        int n = 0;
        for (const auto &[mode, c] : entries_) {
            if (mode.path == path) {
                n += c;
            }
        }
        return n;
    }

    /// Modes matching `keep`, as a new configuration.
    FockConfig filtered(const std::function<bool(const Mode &)> &keep) const {
        FockConfig out;
        for (const auto &e : entries_) {
            if (keep(e.first)) {
                out.entries_.push_back(e);
            }
        }
        return out;
    }

    FockConfig merged(const FockConfig &other) const {
        std::vector<Entry> all = entries_;
        all.insert(all.end(), other.entries_.begin(), other.entries_.end());
        return FockConfig(std::move(all));
    }

    /// "vac" for the vacuum, otherwise space-separated "path:P@bin" tokens with
    /// a "^n" suffix for multiple occupancy.
    std::string str() const {
        if (entries_.empty()) {
            return "vac";
        }
        std::string out;
        for (const auto &[mode, n] : entries_) {
            if (!out.empty()) {
                out += ' ';
            }
            out += mode.str();
            if (n > 1) {
                out += "^" + std::to_string(n);
            }
        }
        return out;
    }

    friend bool operator==(const FockConfig &, const FockConfig &) = default;
    friend bool operator<(const FockConfig &a, const FockConfig &b) {
        return std::lexicographical_compare(
            a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
            [](const Entry &x, const Entry &y) {
                if (x.first != y.first) {
                    return x.first < y.first;
                }
                return x.second < y.second;
            });
    }

   private:
    std::vector<Entry> entries_;
};

/// Dense complex matrix, row-major. Only used for small mode maps.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ComplexMatrix(std::initializer_list<std::initializer_list<Amplitude>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        for (const auto &r : rows) {
            if (r.size() != cols_) {
                throw DomainError("ragged matrix literal");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    Amplitude &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const Amplitude &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        if (a.cols_ != b.rows_) {
            throw DomainError("matrix dimension mismatch");
        }
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += a(i, k) * b(k, j);
                }
            }
        }
        return out;
    }

    double max_abs_diff(const ComplexMatrix &other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            return INFINITY;
        }
        double d = 0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            d = std::max(d, std::abs(data_[i] - other.data_[i]));
        }
        return d;
    }

    bool is_unitary(double tol = 1e-10) const {
        return rows_ == cols_ && (adjoint() * *this).max_abs_diff(identity(rows_)) <= tol;
    }

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Amplitude> data_;
};

/// Pure multi-photon state: a sparse map from configuration to amplitude.
/// The empty configuration is the vacuum.
class PhotonicState {
   public:
    using Terms = std::map<FockConfig, Amplitude>;

    /// Amplitudes smaller than this are dropped after every operation.
    static constexpr double kPruneThreshold = 1e-12;
    static constexpr double kNormTolerance = 1e-9;

    /// The vacuum.
    PhotonicState() {
        terms_.emplace(FockConfig{}, 1.0);
    }

    explicit PhotonicState(Terms terms) : terms_(std::move(terms)) {
        prune();
    }

    static PhotonicState vacuum() {
        return PhotonicState();
    }

    const Terms &terms() const {
        return terms_;
    }
    std::size_t size() const {
        return terms_.size();
    }

    Amplitude amplitude(const FockConfig &c) const {
        auto it = terms_.find(c);
        return it == terms_.end() ? Amplitude{} : it->second;
    }

    double norm_squared() const {
        double s = 0;
        for (const auto &[c, a] : terms_) {
            s += std::norm(a);
        }
        return s;
    }

    bool is_normalized(double tol = kNormTolerance) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }

    PhotonicState normalized() const {
        const double n = std::sqrt(norm_squared());
        if (n < 1e-15) {
            throw ImpossibleOutcome("cannot normalize a zero state");
        }
        Terms t;
        for (const auto &[c, a] : terms_) {
            t.emplace(c, a / n);
        }
        return PhotonicState(std::move(t));
    }

    /// Every path label carrying a photon in at least one term.
    std::set<std::string> paths() const {
        std::set<std::string> out;
        for (const auto &[c, a] : terms_) {
            for (const auto &[m, n] : c.entries()) {
                out.insert(m.path);
            }
        }
        return out;
    }

    /// Largest |a_i - b_i| over the union of supports.
    friend double max_amplitude_diff(const PhotonicState &a, const PhotonicState &b) {
        double d = 0;
        for (const auto &[c, x] : a.terms_) {
            d = std::max(d, std::abs(x - b.amplitude(c)));
        }
        for (const auto &[c, y] : b.terms_) {
            if (!a.terms_.contains(c)) {
                d = std::max(d, std::abs(y));
            }
        }
        return d;
    }

    friend bool approx_equal(const PhotonicState &a, const PhotonicState &b, double tol = 1e-12) {
        return max_amplitude_diff(a, b) <= tol;
    }

    /// Equality up to one global phase: |<a|b>| = |a||b|.
    friend bool equal_up_to_phase(const PhotonicState &a, const PhotonicState &b, double tol = 1e-10) {
        Amplitude overlap{};
        for (const auto &[c, x] : a.terms_) {
            overlap += std::conj(x) * b.amplitude(c);
        }
        if (std::abs(overlap) < 1e-15) {
            return a.norm_squared() < tol && b.norm_squared() < tol;
        }
        const Amplitude phase = overlap / std::abs(overlap);
        double d = 0;
        for (const auto &[c, x] : a.terms_) {
            d = std::max(d, std::abs(x * phase - b.amplitude(c)));
        }
        for (const auto &[c, y] : b.terms_) {
            if (!a.terms_.contains(c)) {
                d = std::max(d, std::abs(y));
            }
        }
        return d <= tol;
    }

    std::string str() const {
        std::string out;
        for (const auto &[c, a] : terms_) {
            if (!out.empty()) {
                out += " + ";
            }
            out += "(" + std::to_string(a.real()) + (a.imag() < 0 ? "" : "+") + std::to_string(a.imag()) + "i)|" +
                   c.str() + ">";
        }
        return out.empty() ? "0" : out;
    }

   private:
    void prune() {
        std::erase_if(terms_, [](const auto &kv) {
            return std::abs(kv.second) < kPruneThreshold;
        });
    }

    Terms terms_;
};

/// Polarization qubit amplitudes (beta_h, beta_v).
class QubitSpec {
   public:
    static constexpr double kNormTolerance = 1e-12;

    QubitSpec(Amplitude beta_h, Amplitude beta_v) : h_(beta_h), v_(beta_v) {
        const double n = std::norm(h_) + std::norm(v_);
        if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
            throw NormError("qubit amplitudes must satisfy |h|^2+|v|^2=1, got " + std::to_string(n));
        }
    }

    static QubitSpec H() {
        return {1.0, 0.0};
    }
    static QubitSpec V() {
        return {0.0, 1.0};
    }
    static QubitSpec diagonal() {
        return {M_SQRT1_2, M_SQRT1_2};
    }

    /// Haar-random qubit.
    static QubitSpec random(Rng &rng) {
        Amplitude h{standard_normal(rng), standard_normal(rng)};
        Amplitude v{standard_normal(rng), standard_normal(rng)};
        const double n = std::sqrt(std::norm(h) + std::norm(v));
        return {h / n, v / n};
    }

    Amplitude h() const {
        return h_;
    }
    Amplitude v() const {
        return v_;
    }
    Amplitude operator[](Polarization p) const {
        return p == Polarization::H ? h_ : v_;
    }

    friend bool operator==(const QubitSpec &, const QubitSpec &) = default;

   private:
    Amplitude h_;
    Amplitude v_;
};

/// One photon on `path` at `bin` carrying `q` in its polarization.
inline PhotonicState make_qubit_state(const std::string &path, int bin, const QubitSpec &q) {
    PhotonicState::Terms t;
    t.emplace(FockConfig::single(Mode(path, Polarization::H, bin)), q.h());
    t.emplace(FockConfig::single(Mode(path, Polarization::V, bin)), q.v());
    return PhotonicState(std::move(t));
}

/// Product of states living on disjoint path labels.
inline PhotonicState tensor(const PhotonicState &a, const PhotonicState &b) {
    const auto pa = a.paths();
    for (const auto &p : b.paths()) {
        if (pa.contains(p)) {
            throw DomainError("tensor: path '" + p + "' appears in both factors");
        }
    }
    PhotonicState::Terms t;
    for (const auto &[ca, xa] : a.terms()) {
        for (const auto &[cb, xb] : b.terms()) {
            t[ca.merged(cb)] += xa * xb;
        }
    }
    return PhotonicState(std::move(t));
}

namespace detail {

inline double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

}  // namespace detail

/// Linear optics on a subset of modes. Creation operator of inputs[j] is
/// replaced by sum_i matrix(i, j) * creation operator of outputs[i]; modes not
/// listed are untouched. Outputs that are not also inputs must be empty in
/// every term, otherwise the substitution would not be norm preserving.
inline PhotonicState apply_mode_map(const PhotonicState &state, std::span<const Mode> inputs,
                                    std::span<const Mode> outputs, const ComplexMatrix &matrix) {
    const std::size_t n = inputs.size();
    if (outputs.size() != n || matrix.rows() != n || matrix.cols() != n) {
        throw DomainError("apply_mode_map: matrix must be square with one row per mode");
    }
    if (!matrix.is_unitary(1e-10)) {
        throw NonUnitaryError("apply_mode_map: matrix is not unitary within 1e-10");
    }
    const std::set<Mode> in_set(inputs.begin(), inputs.end());
    const std::set<Mode> out_set(outputs.begin(), outputs.end());
    if (in_set.size() != n || out_set.size() != n) {
        throw DomainError("apply_mode_map: modes must be distinct");
    }

    PhotonicState::Terms result;
    for (const auto &[config, amp] : state.terms()) {
        std::vector<FockConfig::Entry> rest;
        std::vector<int> in_counts(n, 0);
        for (const auto &[m, c] : config.entries()) {
            if (in_set.contains(m)) {
                const auto j = static_cast<std::size_t>(std::find(inputs.begin(), inputs.end(), m) - inputs.begin());
                in_counts[j] = c;
            } else {
                if (out_set.contains(m)) {
                    throw DomainError("apply_mode_map: output mode " + m.str() + " is already occupied");
                }
                rest.emplace_back(m, c);
            }
        }

        // Expand prod_j (sum_i M_ij a_i^dag)^{n_j} as a polynomial in the output operators.
        std::map<std::vector<int>, Amplitude> poly{{std::vector<int>(n, 0), Amplitude{1.0}}};
        double norm_in = 1;
        for (std::size_t j = 0; j < n; ++j) {
            norm_in *= detail::factorial(in_counts[j]);
            for (int rep = 0; rep < in_counts[j]; ++rep) {
                std::map<std::vector<int>, Amplitude> next;
                for (const auto &[k, c] : poly) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const Amplitude m = matrix(i, j);
                        if (m == Amplitude{}) {
                            continue;
                        }
                        auto k2 = k;
                        ++k2[i];
                        next[k2] += c * m;
                    }
                }
                poly = std::move(next);
            }
        }
        const Amplitude base = amp / std::sqrt(norm_in);
        for (const auto &[k, c] : poly) {
            double norm_out = 1;
            std::vector<FockConfig::Entry> entries = rest;
            for (std::size_t i = 0; i < n; ++i) {
                if (k[i] > 0) {
                    norm_out *= detail::factorial(k[i]);
                    entries.emplace_back(outputs[i], k[i]);
                }
            }
            result[FockConfig(std::move(entries))] += base * c * std::sqrt(norm_out);
        }
    }
    return PhotonicState(std::move(result));
}

/// In-place variant: the listed modes are mapped onto themselves.
inline PhotonicState apply_mode_map(const PhotonicState &state, std::span<const Mode> modes,
                                    const ComplexMatrix &matrix) {
    return apply_mode_map(state, modes, modes, matrix);
}

/// Bijective relabelling of occupied modes (routing, delays, polarization
/// flips). Amplitudes are untouched. Throws if two occupied modes of one term
/// collapse onto the same label.
inline PhotonicState relabel(const PhotonicState &state, const std::function<Mode(const Mode &)> &fn) {
    PhotonicState::Terms result;
    for (const auto &[config, amp] : state.terms()) {
        std::vector<FockConfig::Entry> entries;
        std::set<Mode> seen;
        for (const auto &[m, c] : config.entries()) {
            Mode target = fn(m);
            if (!seen.insert(target).second) {
                throw DomainError("relabel: two occupied modes map onto " + target.str());
            }
            entries.emplace_back(std::move(target), c);
        }
        result[FockConfig(std::move(entries))] += amp;
    }
    return PhotonicState(std::move(result));
}

/// Rename path labels; other labels are kept.
inline PhotonicState rename_paths(const PhotonicState &state, const std::map<std::string, std::string> &renames) {
    return relabel(state, [&](const Mode &m) {
        auto it = renames.find(m.path);
        return it == renames.end() ? m : Mode(it->second, m.pol, m.bin);
    });
}

struct Projection {
    PhotonicState conditioned;
    double probability = 0;
};

/// Total weight of the terms satisfying `pred`.
inline double probability_of(const PhotonicState &state, const std::function<bool(const FockConfig &)> &pred) {
    double p = 0;
    for (const auto &[c, a] : state.terms()) {
        if (pred(c)) {
            p += std::norm(a);
        }
    }
    return p;
}

/// Post-selection on a predicate over configurations.
inline Projection project(const PhotonicState &state, const std::function<bool(const FockConfig &)> &pred) {
    PhotonicState::Terms kept;
    double p = 0;
    for (const auto &[c, a] : state.terms()) {
        if (pred(c)) {
            kept.emplace(c, a);
            p += std::norm(a);
        }
    }
    if (p < 1e-15) {
        throw ImpossibleOutcome("projection onto an outcome of zero probability");
    }
    const double s = std::sqrt(p);
    for (auto &[c, a] : kept) {
        a /= s;
    }
    return {PhotonicState(std::move(kept)), std::min(p, 1.0)};
}

/// Draws one configuration with probability |amplitude|^2, walking terms in
/// canonical order.
inline FockConfig sample_config(const PhotonicState &state, Rng &rng) {
    const double total = state.norm_squared();
    const double u = uniform01(rng) * total;
    double acc = 0;
    const FockConfig *last = nullptr;
    for (const auto &[c, a] : state.terms()) {
        acc += std::norm(a);
        last = &c;
        if (u < acc) {
            return c;
        }
    }
    if (last == nullptr) {
        throw DomainError("sample_config: empty state");
    }
    return *last;
}

/// Set of time bins occupied on `path` in any term.
inline std::set<int> bins_on(const PhotonicState &state, std::string_view path) {
    std::set<int> out;
    for (const auto &[c, a] : state.terms()) {
        for (const auto &[m, n] : c.entries()) {
            if (m.path == path) {
                out.insert(m.bin);
            }
        }
    }
    return out;
}

}  // namespace qbanyan
