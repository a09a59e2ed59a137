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

#include "qbanyan/components.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace qbanyan;
using P = Polarization;

namespace {

FockConfig one(const std::string &path, P pol, int bin = 0) {
    return FockConfig::single(Mode(path, pol, bin));
}

/// Image of basis state `in` under the plate, as (H, V) amplitudes.
std::pair<Amplitude, Amplitude> plate_image(double theta, P in) {
    auto out = hwp_apply(make_qubit_state("p", 0, in == P::H ? QubitSpec::H() : QubitSpec::V()), "p", HwpSetting(theta));
    return {out.amplitude(one("p", P::H)), out.amplitude(one("p", P::V))};
}

void expect_image(double theta, P in, double h, double v) {
    auto [ah, av] = plate_image(theta, in);
    EXPECT_NEAR(std::abs(ah - h), 0, 1e-12) << theta << " deg, input " << to_char(in);
    EXPECT_NEAR(std::abs(av - v), 0, 1e-12) << theta << " deg, input " << to_char(in);
}

}  // namespace

TEST(components, hwp_named_angles) {
    const double r = M_SQRT1_2;
    // Hadamard.
    expect_image(22.5, P::H, r, r);
    expect_image(22.5, P::V, r, -r);
    // |H> -> (|V> - |H>)/sqrt2, |V> -> (|H> + |V>)/sqrt2.
    expect_image(67.5, P::H, -r, r);
    expect_image(67.5, P::V, r, r);
    // NOT.
    expect_image(45, P::H, 0, 1);
    expect_image(45, P::V, 1, 0);
    expect_image(-22.5, P::H, r, -r);
    expect_image(-22.5, P::V, -r, -r);
}

TEST(components, hwp_is_hermitian_involution) {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const double theta = (uniform01(rng) - 0.5) * 720.0;
        auto m = hwp_matrix(HwpSetting(theta));
        ASSERT_TRUE(m.is_unitary(1e-12));
        ASSERT_LE((m * m).max_abs_diff(ComplexMatrix::identity(2)), 1e-12);
        ASSERT_LE(m.max_abs_diff(m.adjoint()), 1e-12);
    }
}

TEST(components, hwp_angle_canonical_range) {
    ASSERT_DOUBLE_EQ(HwpSetting(-90).degrees(), 90);
    ASSERT_DOUBLE_EQ(HwpSetting(90).degrees(), 90);
    ASSERT_DOUBLE_EQ(HwpSetting(112.5).degrees(), -67.5);
    ASSERT_DOUBLE_EQ(HwpSetting(-22.5).degrees(), -22.5);
    ASSERT_LE(hwp_matrix(HwpSetting(202.5)).max_abs_diff(hwp_matrix(HwpSetting(22.5))), 1e-12);
    ASSERT_THROW(HwpSetting(NAN), DomainError);
}

TEST(components, pbs_routes_by_polarization) {
    auto h = pbs_apply(make_qubit_state("in1", 0, QubitSpec::H()), "in1", "in2", "t", "r");
    ASSERT_EQ(h.amplitude(one("t", P::H)), Amplitude(1.0));
    auto v = pbs_apply(make_qubit_state("in1", 0, QubitSpec::V()), "in1", "in2", "t", "r");
    ASSERT_EQ(v.amplitude(one("r", P::V)), Amplitude(1.0));
    auto h2 = pbs_apply(make_qubit_state("in2", 0, QubitSpec::H()), "in1", "in2", "t", "r");
    ASSERT_EQ(h2.amplitude(one("r", P::H)), Amplitude(1.0));
    auto v2 = pbs_apply(make_qubit_state("in2", 0, QubitSpec::V()), "in1", "in2", "t", "r");
    ASSERT_EQ(v2.amplitude(one("t", P::V)), Amplitude(1.0));

    auto d = pbs_apply(make_qubit_state("in1", 0, QubitSpec::diagonal()), "in1", "in2", "t", "r");
    ASSERT_EQ(d.paths(), (std::set<std::string>{"r", "t"}));
    ASSERT_NEAR(d.norm_squared(), 1.0, 1e-15);

    // A transmitted path may keep its label.
    auto same = pbs_apply(make_qubit_state("x", 0, QubitSpec::diagonal()), "x", "y", "x", "y");
    ASSERT_NEAR(std::abs(same.amplitude(one("x", P::H)) - M_SQRT1_2), 0, 1e-15);
    ASSERT_NEAR(std::abs(same.amplitude(one("y", P::V)) - M_SQRT1_2), 0, 1e-15);

    // Only the selected bin is affected.
    auto late = pbs_apply(make_qubit_state("in1", 3, QubitSpec::V()), "in1", "in2", "t", "r", BinSelector::only(0));
    ASSERT_EQ(late.amplitude(one("in1", P::V, 3)), Amplitude(1.0));
}

TEST(components, pbs_and_delay_preserve_photon_number_and_norm) {
    Rng rng(4);
    const std::vector<Mode> modes{Mode("in1", P::H), Mode("in1", P::V), Mode("in2", P::H, 1), Mode("in2", P::V),
                                  Mode("x", P::V)};
    for (int trial = 0; trial < 200; ++trial) {
        auto s = test_util::random_state(modes, 3, 4, rng);
        auto out = delay_apply(pbs_apply(s, "in1", "in2", "t", "r"), "t", 2);
        ASSERT_NEAR(out.norm_squared(), 1.0, 1e-12);
        ASSERT_EQ(out.size(), s.size());
        for (int photons = 1; photons <= 3; ++photons) {
            auto with_n = [photons](const FockConfig &c) {
                return c.total_photons() == photons;
            };
            ASSERT_NEAR(probability_of(out, with_n), probability_of(s, with_n), 1e-12);
        }
    }
}

TEST(components, delay) {
    auto s = make_qubit_state("a", 0, QubitSpec::H());
    ASSERT_EQ(delay_apply(s, "a", 1).amplitude(one("a", P::H, 1)), Amplitude(1.0));
    ASSERT_TRUE(approx_equal(delay_apply(s, "a", 0), s, 0));
    ASSERT_THROW(delay_apply(s, "a", -1), DomainError);

    PhotonicState::Terms t;
    t.emplace(one("a", P::H, 0), 0.6);
    t.emplace(one("a", P::V, 1), Amplitude(0, 0.8));
    auto shifted = delay_apply(PhotonicState(t), "a", 1);
    ASSERT_EQ(shifted.amplitude(one("a", P::H, 1)), Amplitude(0.6));
    ASSERT_EQ(shifted.amplitude(one("a", P::V, 2)), Amplitude(0, 0.8));
}

TEST(components, controlled_flip) {
    auto s = make_qubit_state("a", 0, QubitSpec(0.6, Amplitude(0, 0.8)));
    ASSERT_TRUE(approx_equal(controlled_flip(s, false, "a"), s, 0));
    auto f = controlled_flip(make_qubit_state("a", 0, QubitSpec::H()), true, "a");
    ASSERT_EQ(f.amplitude(one("a", P::V)), Amplitude(1.0));
    ASSERT_TRUE(approx_equal(controlled_flip(controlled_flip(s, true, "a"), true, "a"), s, 0));

    // Bin-gated flip touches only the second time mode.
    PhotonicState::Terms t;
    t.emplace(FockConfig({{Mode("a", P::H, 0), 1}, {Mode("a", P::H, 1), 1}}), 1.0);
    auto gated = controlled_flip(PhotonicState(t), true, "a", BinSelector::only(1));
    ASSERT_EQ(gated.amplitude(FockConfig({{Mode("a", P::H, 0), 1}, {Mode("a", P::V, 1), 1}})), Amplitude(1.0));
}

TEST(components, detect_ideal) {
    const std::vector<DetectorSpec> d{{"D1", "a"}};
    auto dist = detect_distribution(make_qubit_state("a", 0, QubitSpec::diagonal()), d);
    ASSERT_EQ(dist.size(), 1u);
    ASSERT_NEAR(dist.at({{"D1", 1}}), 1.0, 1e-15);

    auto vac = detect_distribution(make_qubit_state("elsewhere", 0, QubitSpec::H()), d);
    ASSERT_EQ(vac.size(), 1u);
    ASSERT_NEAR(vac.at({{"D1", 0}}), 1.0, 1e-15);
    ASSERT_NEAR(detect_distribution(PhotonicState::vacuum(), d).at({{"D1", 0}}), 1.0, 1e-15);
}

TEST(components, detect_binomial_thinning) {
    // Oracle: with n photons and efficiency eta the count is Binomial(n, eta).
    auto binomial = [](int n, int k, double eta) {
        double c = 1;
        for (int i = 0; i < k; ++i) {
            c = c * (n - i) / (i + 1);
        }
        return c * std::pow(eta, k) * std::pow(1 - eta, n - k);
    };
    const DetectorModel half{0.5, 0.0};
    const std::vector<DetectorSpec> d{{"D", "a"}};
    auto dist = detect_distribution(make_qubit_state("a", 0, QubitSpec::H()), d, half);
    ASSERT_NEAR(dist.at({{"D", 1}}), binomial(1, 1, 0.5), 1e-15);
    ASSERT_NEAR(dist.at({{"D", 0}}), binomial(1, 0, 0.5), 1e-15);

    PhotonicState::Terms t;
    t.emplace(FockConfig({{Mode("a", P::H), 2}, {Mode("a", P::V, 1), 1}}), 1.0);
    const DetectorModel eta{0.7, 0.0};
    auto three = detect_distribution(PhotonicState(t), d, eta);
    for (int k = 0; k <= 3; ++k) {
        ASSERT_NEAR(three.at({{"D", k}}), binomial(3, k, 0.7), 1e-14);
    }

    // Dark counts add one spurious click; a non-resolving detector saturates.
    const DetectorModel dark{1.0, 0.1};
    auto with_dark = detect_distribution(make_qubit_state("a", 0, QubitSpec::H()), d, dark);
    ASSERT_NEAR(with_dark.at({{"D", 1}}), 0.9, 1e-15);
    ASSERT_NEAR(with_dark.at({{"D", 2}}), 0.1, 1e-15);
    const DetectorModel bucket{1.0, 0.1, false};
    auto clipped = detect_distribution(make_qubit_state("a", 0, QubitSpec::H()), d, bucket);
    ASSERT_EQ(clipped.size(), 1u);
    ASSERT_NEAR(clipped.at({{"D", 1}}), 1.0, 1e-15);

    ASSERT_THROW(detect_distribution(PhotonicState::vacuum(), d, DetectorModel{1.5, 0}), DomainError);
    ASSERT_THROW(detect_distribution(PhotonicState::vacuum(), d, DetectorModel{1.0, 1.0}), DomainError);
}

TEST(components, detect_distribution_sums_to_one) {
    Rng rng(8);
    const std::vector<Mode> modes{Mode("a", P::H), Mode("a", P::V, 1), Mode("b", P::H), Mode("c", P::V)};
    const std::vector<DetectorSpec> d{{"Da", "a"}, {"Db", "b", BinSelector::only(0)}};
    for (int trial = 0; trial < 100; ++trial) {
        auto s = test_util::random_state(modes, 3, 5, rng);
        for (const auto &model : {DetectorModel{}, DetectorModel{0.8, 0.05}, DetectorModel{0.6, 0.1, false}}) {
            double total = 0;
            for (const auto &[pattern, p] : detect_distribution(s, d, model)) {
                total += p;
            }
            ASSERT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(components, detect_sample_conditions_remaining_photons) {
    // Bell-like pair: detecting a's polarization collapses b.
    PhotonicState::Terms t;
    t.emplace(FockConfig({{Mode("a", P::H), 1}, {Mode("b", P::H), 1}}), M_SQRT1_2);
    t.emplace(FockConfig({{Mode("a", P::V, 1), 1}, {Mode("b", P::V), 1}}), M_SQRT1_2);
    const PhotonicState bell(t);
    const std::vector<DetectorSpec> d{{"early", "a", BinSelector::only(0)}};
    Rng rng(12);
    int early = 0;
    for (int i = 0; i < 2000; ++i) {
        auto r = detect_sample(bell, d, DetectorModel{}, rng);
        ASSERT_EQ(r.conditioned.size(), 1u);
        if (r.pattern.at("early") == 1) {
            ++early;
            ASSERT_EQ(r.conditioned.amplitude(one("b", P::H)), Amplitude(1.0));
        } else {
            ASSERT_NEAR(std::abs(r.conditioned.amplitude(FockConfig({{Mode("a", P::V, 1), 1}, {Mode("b", P::V), 1}}))),
                        1.0, 1e-12);
        }
    }
    ASSERT_NEAR(early / 2000.0, 0.5, 0.04);
}

TEST(components, herald_fidelity) {
    const ClickPattern fusion{{"D3", 1}, {"D4", 0}, {"D5", 1}, {"D6", 0}};
    ASSERT_DOUBLE_EQ(herald_fidelity(fusion, DetectorModel{}), 1.0);
    ASSERT_NEAR(herald_fidelity(fusion, DetectorModel{0.9, 0.0}), 0.81, 1e-15);
    // Empty detectors must stay dark: (1 - d)^2 for two of them.
    ASSERT_NEAR(herald_fidelity({{"D1", 0}, {"D2", 0}}, DetectorModel{0.5, 0.01}), 0.99 * 0.99, 1e-15);
}
