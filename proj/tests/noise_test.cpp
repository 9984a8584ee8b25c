// Copyright 2026 The qec832 Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "qec832/noise.hpp"

namespace qec832 {
namespace {

ExperimentSpec spec_of(const std::string& id) { return ExperimentSpec::parse(id); }

TEST(NoiseModel, RejectsRatesOutsideUnitInterval) {
    EXPECT_THROW((NoiseModel{-0.1, 0, 0, 0}).validate(), std::invalid_argument);
    EXPECT_THROW((NoiseModel{0, 1.5, 0, 0}).validate(), std::invalid_argument);
    EXPECT_THROW((NoiseModel{0, 0, std::numeric_limits<double>::quiet_NaN(), 0}).validate(), std::invalid_argument);
    EXPECT_NO_THROW((NoiseModel{0, 0, 1, 1}).validate());
}

TEST(Sampler, NoiselessShotsAreAlwaysAcceptedAndMatchIdeal) {
    for (const auto* id : {"GHZ+CZ12.CCZ@X/encoded", "PLUS3+CCZ@Z/encoded", "PLUS3+CZ13@X/bare"}) {
        auto spec = spec_of(id);
        auto r = run_experiment(spec, NoiseModel{}, 4000, 7);
        EXPECT_EQ(r.accepted, 4000u) << id;
        ASSERT_TRUE(r.tvd.has_value());
        EXPECT_LT(*r.tvd, 0.05) << id;
        auto ideal = ideal_distribution(spec);
        for (const auto& [bits, n] : r.counts) {
            EXPECT_GT(ideal(bits), 0.0) << id << " " << bits;
        }
    }
}

// A full flip of the data register is the stabilizer X^8 in the Z basis and
// leaves every weight-4 X decoder unchanged in the X basis.
TEST(Sampler, CertainMeasurementFlipsOnDataAreHarmless) {
    for (const auto* id : {"GHZ+I@Z/encoded", "GHZ+CZ12@X/encoded"}) {
        auto r = run_experiment(spec_of(id), NoiseModel{0, 0, 1, 0}, 500, 3);
        EXPECT_EQ(r.accepted, 500u) << id;
    }
    auto bare = run_experiment(spec_of("PLUS3+I@X/bare"), NoiseModel{0, 0, 1, 0}, 200, 3);
    EXPECT_EQ(bare.accepted, 200u);
    EXPECT_EQ(bare.counts.at("111"), 200u);
}

TEST(Sampler, FlippedFlagsRejectEveryShot) {
    auto r = run_experiment(spec_of("PLUS3+I@X/encoded"), NoiseModel{0, 0, 1, 0}, 300, 5);
    EXPECT_EQ(r.accepted, 0u);
    EXPECT_EQ(r.rejected_flag, 300u);
    EXPECT_FALSE(r.tvd.has_value());
    EXPECT_TRUE(r.to_json()["tvd"].is_null());
}

TEST(Sampler, InjectedHookFaultIsCaughtByFlag) {
    auto spec = spec_of("PLUS3+I@X/encoded");
    auto c = experiment_circuit(spec);
    ShotSampler sampler(c, NoiseModel{}, readout_rule(spec));
    std::size_t loc = 0;
    while (!(c[loc].kind == GateKind::CNOT && c[loc].qubits[0] == 7 && c[loc].qubits[1] == 1)) {
        ++loc;
    }
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        auto s = sampler.evaluate({InjectedFault{loc, PauliOperator::z_on(c.width(), {1, 7}), false}}, 0, rng);
        EXPECT_FALSE(s.accepted);
        EXPECT_EQ(s.reason, RejectReason::Flag);
    }
}

// Only measurement noise on the GHZ Z-basis readout: a flip pattern passes iff
// it is even on every face, i.e. weight 0, one of 14 weight-4 words, or weight 8.
TEST(Sampler, MeasurementOnlyAcceptanceMatchesCodeword) {
    const double p = 0.2;
    const double q = 1 - p;
    const double exact = std::pow(q, 8) + 14 * std::pow(p, 4) * std::pow(q, 4) + std::pow(p, 8);
    const std::size_t shots = 20000;
    auto r = run_experiment(spec_of("GHZ+I@Z/encoded"), NoiseModel{0, 0, p, 0}, shots, 99);
    double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(shots));
    EXPECT_NEAR(r.acceptance_rate, exact, 4 * sigma);
    EXPECT_EQ(r.rejected_flag, 0u);
}

TEST(Sampler, PreparationFlipRateMatchesSingleQubitOracle) {
    // Bare PLUS3 in X: each of the three PrepZ flips is an X error that the H
    // turns into a Z, flipping one output bit.
    const double p = 0.1;
    auto r = run_experiment(spec_of("PLUS3+I@X/bare"), NoiseModel{0, 0, 0, p}, 20000, 4);
    double clean = std::pow(1 - p, 3);
    EXPECT_NEAR(static_cast<double>(r.counts.at("000")) / 20000.0, clean, 4 * std::sqrt(clean * (1 - clean) / 20000));
}

TEST(Runner, DeterministicAndWorkerIndependent) {
    auto spec = spec_of("PLUS3+CZ12.CCZ@Z/encoded");
    NoiseModel noise{0.001, 0.01, 0.01, 0.001};
    auto a = run_experiment(spec, noise, 3000, 1234);
    auto b = run_experiment(spec, noise, 3000, 1234);
    auto c = run_experiment(spec, noise, 3000, 1234, RunOptions{3, 0});
    auto d = run_experiment(spec, noise, 3000, 1235);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.counts, c.counts);
    EXPECT_EQ(a.rejected_flag, c.rejected_flag);
    EXPECT_EQ(a.rejected_parity, c.rejected_parity);
    EXPECT_NE(a.counts, d.counts);
    EXPECT_EQ(a.accepted + a.rejected_flag + a.rejected_parity, 3000u);
}

TEST(Runner, RejectsZeroShots) {
    EXPECT_THROW(run_experiment(spec_of("GHZ+I@Z/encoded"), NoiseModel{}, 0, 1), std::invalid_argument);
}

TEST(Runner, BootstrapIntervalBracketsPointEstimate) {
    auto r = run_experiment(spec_of("GHZ+I@X/encoded"), NoiseModel{0, 0.01, 0.01, 0}, 2000, 8, RunOptions{1, 500});
    ASSERT_TRUE(r.tvd && r.ci);
    EXPECT_LE(r.ci->low, r.ci->high);
    EXPECT_LE(r.ci->low, *r.tvd + 1e-12);
    EXPECT_GE(r.ci->high, 0.0);
}

TEST(FirstOrder, Anchors) {
    auto ghz = experiment_circuit(spec_of("GHZ+I@Z/encoded"));
    auto plus = experiment_circuit(spec_of("PLUS3+I@X/encoded"));
    EXPECT_NEAR(first_order_acceptance(ghz, 0.01), 0.86, 1e-12);
    EXPECT_NEAR(first_order_acceptance(plus, 0.01), 0.69, 1e-12);
    EXPECT_DOUBLE_EQ(first_order_acceptance(ghz, 0), 1.0);
    EXPECT_DOUBLE_EQ(first_order_acceptance(plus, 0.5), 0.0);
    EXPECT_THROW(first_order_acceptance(ghz, 2), std::invalid_argument);
}

TEST(Bootstrap, QuantileIsLinearInterpolation) {
    std::vector<double> v{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0), 1);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 1), 4);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0 / 3), 2);
}

double fraction_of(const std::map<std::string, std::size_t>& c, const std::string& key) {
    std::size_t total = 0;
    for (const auto& [k, v] : c) {
        total += v;
    }
    auto it = c.find(key);
    return it == c.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

TEST(Bootstrap, DegenerateSampleGivesPointInterval) {
    Rng rng(1);
    auto ci = bootstrap_interval({{"000", 250}}, [](const auto& c) { return fraction_of(c, "000"); }, 200, rng);
    EXPECT_DOUBLE_EQ(ci.low, 1.0);
    EXPECT_DOUBLE_EQ(ci.high, 1.0);
    EXPECT_THROW(bootstrap_interval({}, [](const auto&) { return 0.0; }, 200, rng), std::invalid_argument);
    EXPECT_THROW(bootstrap_interval({{"0", 1}}, [](const auto&) { return 0.0; }, 10, rng), std::invalid_argument);
}

TEST(Bootstrap, CoverageOfBinomialProportion) {
    const double p = 0.3;
    const long n = 400;
    Rng rng(2024);
    std::binomial_distribution<long> draw(n, p);
    int covered = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        long k = draw(rng);
        std::map<std::string, std::size_t> counts{{"1", static_cast<std::size_t>(k)},
                                                  {"0", static_cast<std::size_t>(n - k)}};
        auto ci = bootstrap_interval(counts, [](const auto& c) { return fraction_of(c, "1"); }, 400, rng);
        covered += ci.low <= p && p <= ci.high;
    }
    EXPECT_GE(covered, 178);  // 95% nominal, binomial sd about 3
    EXPECT_LE(covered, 199);
}

TEST(Bootstrap, StableUnderMoreResamples) {
    std::map<std::string, std::size_t> counts{{"00", 120}, {"01", 380}, {"10", 260}, {"11", 240}};
    auto stat = [](const auto& c) { return fraction_of(c, "01"); };
    Rng a(5), b(6);
    auto ci1 = bootstrap_interval(counts, stat, 2000, a);
    auto ci2 = bootstrap_interval(counts, stat, 4000, b);
    EXPECT_NEAR(ci1.low, ci2.low, 0.01);
    EXPECT_NEAR(ci1.high, ci2.high, 0.01);
    double half = 1.96 * std::sqrt(0.38 * 0.62 / 1000);
    EXPECT_NEAR(ci1.high - ci1.low, 2 * half, 0.01);
}

}  // namespace
}  // namespace qec832
