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

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "qec832/verifier.hpp"

namespace qec832 {
namespace {

std::size_t expected_fault_count(const Circuit& c) {
    std::size_t n = 0;
    for (const auto& g : c.gates()) {
        n += g.is_prep() || g.is_measurement() ? 1 : (std::size_t{1} << (2 * g.arity())) - 1;
    }
    return n;
}

TEST(FaultSites, GhzWithReadout) {
    auto c = with_readout(ghz_prep_encoded(), Basis::Z);
    auto sites = enumerate_fault_sites(c);
    EXPECT_EQ(sites.size(), 22u);
    EXPECT_EQ(sites.size(), count_locations(c).total);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        EXPECT_EQ(sites[i].location, i);
    }
    EXPECT_EQ(sites[0].faults.front(), PauliOperator::single(8, 0, 'Z'));  // PrepX flip
    EXPECT_EQ(sites[2].faults.front(), PauliOperator::single(8, 2, 'X'));  // PrepZ flip
    EXPECT_EQ(sites[8].faults.size(), 15u);
    EXPECT_TRUE(sites[21].before);
    EXPECT_TRUE(enumerate_fault_sites(Circuit(2, QubitRole::Data)).empty());
}

TEST(FaultSites, TwoQubitFaultSetIsAllFifteenPaulis) {
    auto ps = all_paulis_on(4, {1, 3});
    ASSERT_EQ(ps.size(), 15u);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        EXPECT_EQ(ps[i].support() & ~mask_of({1, 3}), 0u);
        EXPECT_FALSE(ps[i].is_identity_up_to_phase());
        for (std::size_t j = 0; j < i; ++j) {
            EXPECT_NE(ps[i], ps[j]);
        }
    }
}

class ReferenceCircuits : public ::testing::TestWithParam<std::pair<TargetState, Basis>> {};

TEST_P(ReferenceCircuits, PassAndAreComplete) {
    auto [state, basis] = GetParam();
    auto fc = reference_case(state, basis);
    auto start = std::chrono::steady_clock::now();
    auto r = verify_fault_tolerance(fc);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_TRUE(r.precondition_ok) << r.diagnostic;
    EXPECT_TRUE(r.passed()) << r.summary();
    EXPECT_EQ(r.site_count, r.location_total);
    EXPECT_EQ(r.outcomes.size(), expected_fault_count(verification_circuit(fc)));
    EXPECT_LT(seconds, 1.0);
}

TEST_P(ReferenceCircuits, BasisConsistentRejections) {
    auto [state, basis] = GetParam();
    auto fc = reference_case(state, basis);
    auto r = verify_fault_tolerance(fc);
    auto code = code_832();
    const auto& checks = basis == Basis::Z ? code.z_stabilizers.generators : code.x_stabilizers.generators;
    for (const auto& o : r.outcomes) {
        if (o.verdict != Verdict::RejectedByPostselection || !o.residual) {
            continue;
        }
        QubitMask visible = (basis == Basis::Z ? o.residual->x_mask() : o.residual->z_mask()) & 0xFF;
        bool fires = false;
        for (const auto& s : checks) {
            fires = fires || (popcount(visible & s.support()) & 1);
        }
        EXPECT_TRUE(fires) << o.injected.str();
    }
}

// Full-statevector oracle on random outcomes: rejected faults have zero
// acceptance probability, trivial survivors fix the target state, logical
// survivors do not.
TEST_P(ReferenceCircuits, AgreesWithStatevectorOracle) {
    auto [state, basis] = GetParam();
    auto fc = reference_case(state, basis);
    auto r = verify_fault_tolerance(fc);
    auto full = verification_circuit(fc);
    auto ideal = detail::decode_probabilities(outcome_probabilities(full, simulate(full)), fc.rule).logical;
    auto psi = state == TargetState::GHZ ? oracle::encoded_ghz() : oracle::encoded_plus3();
    std::mt19937_64 rng(state == TargetState::GHZ ? 17 : 23);
    for (int i = 0; i < 50; ++i) {
        const auto& o = r.outcomes[rng() % r.outcomes.size()];
        auto sv = statevector_verdict(full, fc, o.location, o.injected, o.before, ideal);
        EXPECT_EQ(sv.verdict, o.verdict) << o.location << " " << o.injected.str();
        if (o.verdict == Verdict::RejectedByFlag || o.verdict == Verdict::RejectedByPostselection) {
            EXPECT_LT(sv.acceptance_probability, 1e-12);
        }
        if (o.survivor) {
            auto image = oracle::apply_by_letters(psi, *o.survivor);
            auto overlap = psi.inner(image);
            if (o.verdict == Verdict::AcceptedTrivial) {
                EXPECT_NEAR(std::abs(overlap - oracle::cd(1, 0)), 0, 1e-9);
            } else if (o.verdict == Verdict::AcceptedLogical) {
                EXPECT_GT(std::abs(overlap - oracle::cd(1, 0)), 1e-6);
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(All, ReferenceCircuits,
                         ::testing::Values(std::pair{TargetState::GHZ, Basis::X}, std::pair{TargetState::GHZ, Basis::Z},
                                           std::pair{TargetState::Plus3, Basis::X},
                                           std::pair{TargetState::Plus3, Basis::Z}));

TEST(Verifier, GhzWeightFourResidualsAreTrivial) {
    for (auto b : {Basis::X, Basis::Z}) {
        auto r = verify_fault_tolerance(reference_case(TargetState::GHZ, b));
        for (auto target : {PauliOperator::x_on(8, {0, 3, 5, 6}), PauliOperator::x_on(8, {1, 2, 4, 7})}) {
            bool found = false;
            for (const auto& o : r.outcomes) {
                if (o.residual && o.residual->unsigned_form() == target) {
                    found = true;
                    EXPECT_EQ(o.verdict, Verdict::AcceptedTrivial);
                }
            }
            EXPECT_TRUE(found) << target.str();
        }
    }
}

TEST(Verifier, FlagCatchesZZOnCnot71) {
    auto fc = reference_case(TargetState::Plus3, Basis::X);
    auto r = verify_fault_tolerance(fc);
    std::size_t loc = 0;
    while (!(fc.prep[loc].kind == GateKind::CNOT && fc.prep[loc].qubits[0] == 7 && fc.prep[loc].qubits[1] == 1)) {
        ++loc;
    }
    auto zz = PauliOperator::z_on(11, {1, 7});
    bool found = false;
    for (const auto& o : r.outcomes) {
        if (o.location == loc && o.injected == zz) {
            found = true;
            EXPECT_EQ(o.verdict, Verdict::RejectedByFlag);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Verifier, FlagAblationFailsWithZ1Z7) {
    auto fc = reference_case(TargetState::Plus3, Basis::X);
    fc.prep = ablate_flag(fc.prep, kFlagA0);
    auto r = verify_fault_tolerance(fc);
    EXPECT_FALSE(r.passed());
    auto z1z7 = PauliOperator::z_on(8, {1, 7});
    bool found = false;
    for (const auto* f : r.failures()) {
        found = found || (f->survivor && *f->survivor == z1z7);
    }
    EXPECT_TRUE(found);
}

TEST(Verifier, PreconditionFailureSkipsClassification) {
    auto fc = reference_case(TargetState::GHZ, Basis::Z);
    fc.target = target_state_group(code_832(), TargetState::Plus3);
    auto r = verify_fault_tolerance(fc);
    EXPECT_FALSE(r.precondition_ok);
    EXPECT_FALSE(r.passed());
    EXPECT_TRUE(r.outcomes.empty());
    EXPECT_FALSE(r.diagnostic.empty());
}

TEST(Verifier, PhaseLayerCasesAgreeWithStatevector) {
    std::mt19937_64 rng(31);
    for (auto st : {TargetState::GHZ, TargetState::Plus3}) {
        for (auto b : {Basis::X, Basis::Z}) {
            for (auto g : {GateSubset::of({LogicalGate::CZ12}), GateSubset::of({LogicalGate::CCZ})}) {
                auto fc = reference_case(st, b);
                fc.layer = phase_pattern_circuit(logical_phase_vector(g));
                auto r = verify_fault_tolerance(fc);
                ASSERT_TRUE(r.precondition_ok);
                auto full = verification_circuit(fc);
                auto ideal = detail::decode_probabilities(outcome_probabilities(full, simulate(full)), fc.rule).logical;
                for (int i = 0; i < 50; ++i) {
                    const auto& o = r.outcomes[rng() % r.outcomes.size()];
                    auto sv = statevector_verdict(full, fc, o.location, o.injected, o.before, ideal);
                    EXPECT_EQ(sv.verdict, o.verdict) << fc.name << " " << g.name() << " @" << o.location << " "
                                                     << o.injected.str();
                }
            }
        }
    }
}

// With a readout in the Z basis the diagonal layer commutes with the
// measurement, so the preparation's guarantees carry over.
TEST(Verifier, ZBasisPhaseLayersPreserveFaultTolerance) {
    for (auto st : {TargetState::GHZ, TargetState::Plus3}) {
        for (auto g : GateSubset::all()) {
            auto fc = reference_case(st, Basis::Z);
            fc.layer = phase_pattern_circuit(logical_phase_vector(g));
            EXPECT_TRUE(verify_fault_tolerance(fc).passed()) << to_string(st) << " " << g.name();
        }
    }
}

// Weight-2 and weight-3 X errors from the |+++> preparation are caught only by
// Z checks. In the X basis a phase layer turns them into undetected Z logicals.
TEST(Verifier, Plus3XBasisPhaseLayerExposesPreparationXErrors) {
    auto fc = reference_case(TargetState::Plus3, Basis::X);
    fc.layer = phase_pattern_circuit(logical_phase_vector(GateSubset::of({LogicalGate::CZ12})));
    auto r = verify_fault_tolerance(fc);
    EXPECT_FALSE(r.passed());
    for (const auto* f : r.failures()) {
        EXPECT_LT(f->location, fc.prep.size());
        EXPECT_NE(propagate_fault(fc.prep, f->location, f->injected, !f->before).x_mask() & 0xFF, 0u);
    }
}

TEST(Witness, ControlXAndTargetZLists) {
    auto code = code_832();
    auto prep = plus3_prep_encoded();
    auto x = propagation_witness(prep, code, 0, 'X');
    ASSERT_EQ(x.size(), 3u);
    EXPECT_EQ(x[0].rendered, "X0 X3");
    EXPECT_EQ(x[0].annotation, "detectable");
    EXPECT_EQ(x[1].rendered, "X0 X2 X3");
    EXPECT_EQ(x[1].annotation, "detectable");
    EXPECT_EQ(x[2].rendered, "X0 X1 X2 X3");
    EXPECT_EQ(x[2].annotation, "Xbar1");

    auto z = propagation_witness(prep, code, 1, 'Z');
    std::map<std::string, std::string> got;
    for (const auto& l : z) {
        got[l.rendered] = l.annotation;
    }
    std::map<std::string, std::string> expected = {
        {"Z1 Za0", "detectable"},          {"Z1 Z7 Za0", "detectable"}, {"Z1 Z6 Z7", "detectable"},
        {"Z1 Z6 Z7 Za0", "detectable"},    {"Z0 Z1 Z6 Z7", "stabilizer"},
    };
    EXPECT_EQ(got, expected);
}

TEST(Witness, ReportMentionsAblationFailure) {
    auto text = witness_report();
    EXPECT_NE(text.find("without flag a0: FAIL"), std::string::npos);
    EXPECT_NE(text.find("-> Z1 Z7 = Zbar1 Zbar2"), std::string::npos);
}

TEST(FtReport, JsonCarriesCountsAndRows) {
    auto r = verify_fault_tolerance(reference_case(TargetState::GHZ, Basis::Z));
    auto j = r.to_json();
    EXPECT_EQ(j["passed"], true);
    EXPECT_EQ(j["outcomes"].size(), r.outcomes.size());
    EXPECT_EQ(j["counts"]["AcceptedLogical"], 0);
    EXPECT_EQ(j["sites"], 22);
}

}  // namespace
}  // namespace qec832
