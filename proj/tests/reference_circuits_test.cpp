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

#include "oracles.hpp"
#include "qec832/reference_circuits.hpp"

namespace qec832 {
namespace {

using oracle::cd;

TEST(GateSubset, TableOrderAndNames) {
    std::vector<std::string> names;
    for (auto g : GateSubset::all()) {
        names.push_back(g.name(""));
    }
    std::vector<std::string> expected = {"I",          "CZ12",         "CZ13",           "CZ12CZ13",
                                         "CZ23",       "CZ12CZ23",     "CZ13CZ23",       "CZ12CZ13CZ23",
                                         "CCZ",        "CZ12CCZ",      "CZ13CCZ",        "CZ12CZ13CCZ",
                                         "CZ23CCZ",    "CZ12CZ23CCZ",  "CZ13CZ23CCZ",    "CZ12CZ13CZ23CCZ"};
    EXPECT_EQ(names, expected);
    EXPECT_EQ(GateSubset::parse("{}"), GateSubset{});
    EXPECT_EQ(GateSubset::parse(""), GateSubset{});
    EXPECT_EQ(GateSubset::parse("CCZ.CZ12").name(), "CZ12.CCZ");
    EXPECT_THROW(GateSubset::parse("CZ14"), std::invalid_argument);
}

TEST(ExperimentSpec, IdRoundTrip) {
    for (auto st : {TargetState::GHZ, TargetState::Plus3}) {
        for (auto g : GateSubset::all()) {
            for (auto b : {Basis::X, Basis::Z}) {
                for (auto e : {Encoding::Bare, Encoding::Encoded}) {
                    for (auto m : {CczMode::Native, CczMode::Compiled}) {
                        ExperimentSpec s{st, g, b, e, m};
                        auto back = ExperimentSpec::parse(s.id());
                        EXPECT_EQ(back.id(), s.id());
                        if (e == Encoding::Bare) {
                            EXPECT_EQ(back, s);
                        }
                    }
                }
            }
        }
    }
    EXPECT_EQ(ExperimentSpec::parse("GHZ+CZ12.CCZ@X/encoded").id(), "GHZ+CZ12.CCZ@X/encoded");
    EXPECT_EQ(ExperimentSpec::parse("PLUS3+{}@Z/bare:compiled").id(), "PLUS3+I@Z/bare:compiled");
    for (const char* bad : {"GHZ", "GHZ+I@Q/bare", "W+I@X/bare", "GHZ+I@X/raw", "GHZ@X+I/bare"}) {
        EXPECT_THROW(ExperimentSpec::parse(bad), std::invalid_argument) << bad;
    }
}

TEST(ReadoutRule, ZBasisFacesAndDecoding) {
    auto r = readout_rule(ExperimentSpec::parse("GHZ+I@Z/encoded"));
    EXPECT_TRUE(r.accepts(parse_bits("11110000")));
    EXPECT_EQ(r.decode_string(parse_bits("11110000")), "100");
    EXPECT_FALSE(r.accepts(parse_bits("10000000")));
    EXPECT_FALSE(r.accepts(parse_bits("11000000")));
    EXPECT_TRUE(r.accepts(parse_bits("11111111")));
    EXPECT_EQ(r.decode_string(parse_bits("11111111")), "000");
}

TEST(ReadoutRule, XBasisParityAndDecoding) {
    auto r = readout_rule(ExperimentSpec::parse("GHZ+I@X/encoded"));
    EXPECT_TRUE(r.accepts(parse_bits("10000001")));
    EXPECT_EQ(r.decode_string(parse_bits("10000001")), "111");
    EXPECT_FALSE(r.accepts(parse_bits("10000000")));
    EXPECT_EQ(r.decode_string(parse_bits("11000000")), "001");
    EXPECT_EQ(r.decode_string(parse_bits("11110000")), "000");
}

TEST(ReadoutRule, FlagsMustReadZero) {
    auto r = readout_rule(ExperimentSpec::parse("PLUS3+I@X/encoded"));
    EXPECT_TRUE(r.accepts(parse_bits("00000000000")));
    EXPECT_FALSE(r.accepts(parse_bits("00000000100")));
    EXPECT_FALSE(r.flags_ok(parse_bits("00000000001")));
    EXPECT_TRUE(r.checks_ok(parse_bits("00000000001")));
    EXPECT_THROW(parse_bits("0102"), std::invalid_argument);
}

TEST(ReadoutRule, BareIsIdentityDecode) {
    auto r = readout_rule(ExperimentSpec::parse("PLUS3+I@Z/bare"));
    EXPECT_TRUE(r.accepts(parse_bits("101")));
    EXPECT_EQ(r.decode_string(parse_bits("101")), "101");
}

// Logical diagonal phase of basis state x (bit i = logical qubit i+1).
TEST(Transversality, PhasePatternsImplementLogicalDiagonalGates) {
    for (auto g : GateSubset::all()) {
        auto layer = phase_pattern_circuit(logical_phase_vector(g));
        for (std::size_t x = 0; x < 8; ++x) {
            StateVector image = oracle::encoded_basis_state(x);
            for (const auto& gate : layer) {
                image.apply(gate);
            }
            for (std::size_t y = 0; y < 8; ++y) {
                cd amp = oracle::encoded_basis_state(y).inner(image);
                cd expected = x == y ? oracle::logical_phase(g, x) : 0.0;
                EXPECT_LT(std::abs(amp - expected), 1e-10) << g.name() << " x=" << x << " y=" << y;
            }
        }
    }
}

TEST(Transversality, SinglePatternsAreLegal) {
    EXPECT_FALSE(logical_phase_vector(GateSubset::of({LogicalGate::CCZ})).is_identity());
    auto v = logical_phase_vector(GateSubset::of({LogicalGate::CZ23, LogicalGate::CCZ}));
    EXPECT_EQ(v.k, (std::array<std::uint8_t, 8>{3, 5, 5, 3, 7, 1, 1, 7}));
}

TEST(EncodedPrep, GhzCircuitPreparesEncodedGhz) {
    auto s = simulate(ghz_prep_encoded());
    EXPECT_TRUE(equal_up_to_global_phase(s, oracle::encoded_ghz(), 1e-12));
}

TEST(EncodedPrep, Plus3CircuitPreparesEncodedPlus3WithFlagsInPlus) {
    auto s = simulate(plus3_prep_encoded());
    auto psi = oracle::encoded_plus3();
    std::vector<cd> amps(std::size_t{1} << 11);
    for (std::size_t f = 0; f < 8; ++f) {
        for (std::size_t i = 0; i < 256; ++i) {
            amps[i + 256 * f] = psi[i] / std::sqrt(8.0);
        }
    }
    EXPECT_TRUE(equal_up_to_global_phase(s, StateVector(11, amps), 1e-12));
}

TEST(EncodedPrep, GateCounts) {
    EXPECT_EQ(count_locations(plus3_prep_encoded()).n_g, 20u);
    EXPECT_EQ(count_locations(ghz_prep_encoded()).n_g, 6u);
    auto ablated = ablate_flag(plus3_prep_encoded(), kFlagA0);
    EXPECT_EQ(ablated.size(), plus3_prep_encoded().size() - 2);
}

TEST(IdealDistribution, CczOnPlus3InXBasis) {
    auto d = ideal_distribution(ExperimentSpec::parse("PLUS3+CCZ@X/encoded"));
    EXPECT_NEAR(d("000"), 9.0 / 16, 1e-12);
    for (const char* k : {"001", "010", "011", "100", "101", "110", "111"}) {
        EXPECT_NEAR(d(k), 1.0 / 16, 1e-12) << k;
    }
}

TEST(IdealDistribution, CczOnGhzInXBasisIsOddParityUniform) {
    auto d = ideal_distribution(ExperimentSpec::parse("GHZ+CCZ@X/encoded"));
    EXPECT_EQ(d.probabilities.size(), 4u);
    for (const char* k : {"001", "010", "100", "111"}) {
        EXPECT_NEAR(d(k), 0.25, 1e-12) << k;
    }
}

TEST(IdealDistribution, CompiledBareMatchesNative) {
    for (auto st : {TargetState::GHZ, TargetState::Plus3}) {
        for (auto g : GateSubset::all()) {
            for (auto b : {Basis::X, Basis::Z}) {
                ExperimentSpec native{st, g, b, Encoding::Bare, CczMode::Native};
                ExperimentSpec compiled{st, g, b, Encoding::Bare, CczMode::Compiled};
                auto dn = run_exact(bare_circuit(native)).distribution;
                auto dc = run_exact(bare_circuit(compiled)).distribution;
                EXPECT_LT(tvd(dn, dc), 1e-12) << compiled.id();
            }
        }
    }
}

// Exact decoded distribution of an encoded cell: every noiseless outcome is
// accepted and decodes to the bare ideal.
TEST(IdealDistribution, EncodedCellsDecodeExactlyToIdeal) {
    for (auto st : {TargetState::GHZ, TargetState::Plus3}) {
        for (auto g : GateSubset::all()) {
            for (auto b : {Basis::X, Basis::Z}) {
                ExperimentSpec spec{st, g, b, Encoding::Encoded, CczMode::Native};
                auto c = experiment_circuit(spec);
                auto rule = readout_rule(spec);
                auto probs = outcome_probabilities(c, simulate(c));
                std::map<std::string, double> decoded;
                double accepted = 0;
                for (std::size_t i = 0; i < probs.size(); ++i) {
                    if (probs[i] < 1e-15) {
                        continue;
                    }
                    auto o = static_cast<QubitMask>(i);
                    if (rule.accepts(o)) {
                        accepted += probs[i];
                        decoded[rule.decode_string(o)] += probs[i];
                    }
                }
                EXPECT_NEAR(accepted, 1.0, 1e-12) << spec.id();
                OutcomeDistribution d{b, 3, decoded};
                EXPECT_LT(tvd(d, ideal_distribution(spec)), 1e-12) << spec.id();
            }
        }
    }
}

}  // namespace
}  // namespace qec832
