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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qec832/circuit.hpp"
#include "qec832/code.hpp"
#include "qec832/reference_circuits.hpp"
#include "qec832/statevector.hpp"

namespace qec832 {

/// One circuit location together with every single fault it can suffer.
struct FaultSite {
    std::size_t location = 0;
    Gate gate;
    bool before = false;  // measurement flips act just before the gate
    std::vector<PauliOperator> faults;
};

/// All non-identity Paulis on `qubits`, in base-4 order with qubits[0] least significant.
inline std::vector<PauliOperator> all_paulis_on(std::size_t width, const std::vector<std::size_t>& qubits) {
    std::vector<PauliOperator> out;
    std::size_t n = std::size_t{1} << (2 * qubits.size());
    for (std::size_t code = 1; code < n; ++code) {
        QubitMask x = 0;
        QubitMask z = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            std::size_t d = (code >> (2 * j)) & 3;  // 1 = X, 2 = Y, 3 = Z
            QubitMask bit = QubitMask{1} << qubits[j];
            if (d == 1 || d == 2) {
                x |= bit;
            }
            if (d == 2 || d == 3) {
                z |= bit;
            }
        }
        out.emplace_back(width, x, z, static_cast<std::uint8_t>(popcount(x & z)));
    }
    return out;
}

inline std::vector<FaultSite> enumerate_fault_sites(const Circuit& c) {
    std::vector<FaultSite> sites;
    sites.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Gate& g = c[i];
        FaultSite s{i, g, false, {}};
        std::size_t q = g.qubits[0];
        switch (g.kind) {
            case GateKind::PrepZ:
                s.faults.push_back(PauliOperator::single(c.width(), q, 'X'));
                break;
            case GateKind::PrepX:
                s.faults.push_back(PauliOperator::single(c.width(), q, 'Z'));
                break;
            case GateKind::MeasureZ:
                s.before = true;
                s.faults.push_back(PauliOperator::single(c.width(), q, 'X'));
                break;
            case GateKind::MeasureX:
                s.before = true;
                s.faults.push_back(PauliOperator::single(c.width(), q, 'Z'));
                break;
            default: {
                std::vector<std::size_t> qs(g.qubits.begin(), g.qubits.begin() + static_cast<long>(g.arity()));
                s.faults = all_paulis_on(c.width(), qs);
            }
        }
        sites.push_back(std::move(s));
    }
    return sites;
}

enum class Verdict { RejectedByFlag, RejectedByPostselection, AcceptedTrivial, AcceptedLogical };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::RejectedByFlag:
            return "RejectedByFlag";
        case Verdict::RejectedByPostselection:
            return "RejectedByPostselection";
        case Verdict::AcceptedTrivial:
            return "AcceptedTrivial";
        case Verdict::AcceptedLogical:
            return "AcceptedLogical";
    }
    return "?";
}

struct FaultOutcome {
    std::size_t location = 0;
    bool before = false;
    PauliOperator injected;
    std::optional<PauliOperator> residual;  // empty when classified by statevector
    std::optional<PauliOperator> survivor;  // data part visible to the readout
    Verdict verdict = Verdict::AcceptedTrivial;
    std::optional<PauliOperator> logical;   // logical action of an accepted survivor
    double acceptance_probability = 1.0;
    bool by_statevector = false;
};

/// Circuit under test: preparation, optional transversal layer, readout rule.
struct FtCase {
    std::string name;
    Circuit prep;
    TargetStateGroup target;
    ReadoutRule rule;
    std::vector<Gate> layer;
};

inline FtCase reference_case(TargetState state, Basis basis) {
    ExperimentSpec spec{state, {}, basis, Encoding::Encoded, CczMode::Native};
    return FtCase{std::string(state == TargetState::GHZ ? "ghz_prep_encoded" : "plus3_prep_encoded") + "@" +
                      to_string(basis),
                  encoded_prep(state), target_state_group(code_832(), state), readout_rule(spec), {}};
}

struct FtReport {
    std::string name;
    Basis basis = Basis::Z;
    bool precondition_ok = false;
    std::string diagnostic;
    std::size_t site_count = 0;
    std::size_t location_total = 0;
    std::vector<FaultOutcome> outcomes;
    std::vector<std::string> gate_names;  // per location, for rendering

    std::size_t count(Verdict v) const {
        return static_cast<std::size_t>(
            std::count_if(outcomes.begin(), outcomes.end(), [&](const FaultOutcome& o) { return o.verdict == v; }));
    }

    bool passed() const { return precondition_ok && count(Verdict::AcceptedLogical) == 0; }

    std::vector<const FaultOutcome*> failures() const {
        std::vector<const FaultOutcome*> out;
        for (const auto& o : outcomes) {
            if (o.verdict == Verdict::AcceptedLogical) {
                out.push_back(&o);
            }
        }
        return out;
    }

    std::string summary() const {
        std::ostringstream s;
        s << name << ": " << (passed() ? "PASS" : "FAIL");
        if (!precondition_ok) {
            s << " (precondition: " << diagnostic << ")";
            return s.str();
        }
        s << " sites=" << site_count << " faults=" << outcomes.size();
        for (auto v : {Verdict::RejectedByFlag, Verdict::RejectedByPostselection, Verdict::AcceptedTrivial,
                       Verdict::AcceptedLogical}) {
            s << ' ' << to_string(v) << '=' << count(v);
        }
        return s.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["basis"] = to_string(basis);
        j["passed"] = passed();
        j["precondition_ok"] = precondition_ok;
        if (!diagnostic.empty()) {
            j["diagnostic"] = diagnostic;
        }
        j["sites"] = site_count;
        j["faults"] = outcomes.size();
        nlohmann::json counts = nlohmann::json::object();
        for (auto v : {Verdict::RejectedByFlag, Verdict::RejectedByPostselection, Verdict::AcceptedTrivial,
                       Verdict::AcceptedLogical}) {
            counts[to_string(v)] = count(v);
        }
        j["counts"] = counts;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& o : outcomes) {
            nlohmann::json r;
            r["location"] = o.location;
            r["gate"] = o.location < gate_names.size() ? gate_names[o.location] : "";
            r["before"] = o.before;
            r["fault"] = o.injected.str();
            r["residual"] = o.residual ? nlohmann::json(o.residual->str()) : nlohmann::json();
            r["verdict"] = to_string(o.verdict);
            if (o.logical) {
                r["logical"] = logical_label(*o.logical);
            }
            if (o.by_statevector) {
                r["statevector"] = true;
                r["acceptance_probability"] = o.acceptance_probability;
            }
            rows.push_back(std::move(r));
        }
        j["outcomes"] = std::move(rows);
        return j;
    }
};

namespace detail {

/// Decoded logical distribution conditioned on acceptance, plus the acceptance
/// and flag-pass probabilities, from full outcome probabilities.
struct DecodedOutcome {
    double flag_ok = 0;
    double accepted = 0;
    std::map<QubitMask, double> logical;
};

inline DecodedOutcome decode_probabilities(const std::vector<double>& probs, const ReadoutRule& rule) {
    DecodedOutcome d;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        auto o = static_cast<QubitMask>(i);
        if (probs[i] <= 0 || !rule.flags_ok(o)) {
            continue;
        }
        d.flag_ok += probs[i];
        if (rule.checks_ok(o)) {
            d.accepted += probs[i];
            d.logical[rule.decode(o)] += probs[i];
        }
    }
    if (d.accepted > 0) {
        for (auto& [k, v] : d.logical) {
            v /= d.accepted;
        }
    }
    return d;
}

inline double decoded_tvd(const std::map<QubitMask, double>& a, const std::map<QubitMask, double>& b) {
    double s = 0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        s += std::abs(v - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : b) {
        if (!a.contains(k)) {
            s += v;
        }
    }
    return 0.5 * s;
}

inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr double kDistributionTolerance = 1e-9;

}  // namespace detail

/// Full verification circuit: prep, layer, transversal readout of the data qubits.
inline Circuit verification_circuit(const FtCase& fc) {
    Circuit c = fc.prep;
    c.append(fc.layer);
    return with_readout(std::move(c), fc.rule.basis);
}

/// Classifies one fault by exact simulation of the whole circuit.
inline FaultOutcome statevector_verdict(const Circuit& full, const FtCase& fc, std::size_t location,
                                        const PauliOperator& fault, bool before,
                                        const std::map<QubitMask, double>& ideal) {
    FaultOutcome o{location, before, fault, std::nullopt, std::nullopt, Verdict::AcceptedTrivial, std::nullopt, 1.0,
                   true};
    std::array<InjectedFault, 1> inj{InjectedFault{location, fault, before}};
    auto probs = outcome_probabilities(full, simulate(full, inj));
    auto d = detail::decode_probabilities(probs, fc.rule);
    o.acceptance_probability = d.accepted;
    if (d.flag_ok < detail::kProbabilityFloor) {
        o.verdict = Verdict::RejectedByFlag;
    } else if (d.accepted < detail::kProbabilityFloor) {
        o.verdict = Verdict::RejectedByPostselection;
    } else if (detail::decoded_tvd(d.logical, ideal) < detail::kDistributionTolerance) {
        o.verdict = Verdict::AcceptedTrivial;
    } else {
        o.verdict = Verdict::AcceptedLogical;
    }
    return o;
}

/// Classifies a propagated residual against the readout and the target state.
inline FaultOutcome pauli_verdict(const Circuit& full, const FtCase& fc, std::size_t location,
                                  const PauliOperator& fault, bool before, const PauliOperator& residual) {
    FaultOutcome o{location, before, fault, residual, std::nullopt, Verdict::AcceptedTrivial, std::nullopt, 1.0,
                   false};
    QubitMask mz = full.measured_qubits() & ~full.x_measured_qubits();
    QubitMask mx = full.x_measured_qubits();
    QubitMask flips = (residual.x_mask() & mz) | (residual.z_mask() & mx);
    if (!fc.rule.flags_ok(flips)) {
        o.verdict = Verdict::RejectedByFlag;
        o.acceptance_probability = 0;
        return o;
    }
    if (!fc.rule.checks_ok(flips)) {
        o.verdict = Verdict::RejectedByPostselection;
        o.acceptance_probability = 0;
        return o;
    }
    const std::size_t n = fc.target.code.n;
    QubitMask data = fc.rule.data_qubits;
    PauliOperator survivor = fc.rule.basis == Basis::Z ? PauliOperator(n, residual.x_mask() & data, 0)
                                                       : PauliOperator(n, 0, residual.z_mask() & data);
    o.survivor = survivor;
    switch (classify_residual(survivor, fc.target)) {
        case ResidualClass::TrivialOnTarget:
            o.verdict = Verdict::AcceptedTrivial;
            break;
        case ResidualClass::LogicalOnTarget:
            o.verdict = Verdict::AcceptedLogical;
            break;
        case ResidualClass::DetectableByCode:
            o.verdict = Verdict::RejectedByPostselection;
            o.acceptance_probability = 0;
            return o;
    }
    o.logical = logical_action(survivor, fc.target.code);
    return o;
}

/// Exhaustive single-fault verification of `fc`.
///
/// A fault is pushed through the rest of the circuit as a Pauli when every
/// later gate is Clifford. Otherwise it is classified by exact simulation.
inline FtReport verify_fault_tolerance(const FtCase& fc) {
    FtReport report;
    report.name = fc.name;
    report.basis = fc.rule.basis;

    Circuit full = verification_circuit(fc);
    for (const auto& g : full.gates()) {
        report.gate_names.push_back(g.str());
    }
    try {
        full.validate();
    } catch (const std::exception& e) {
        report.diagnostic = e.what();
        return report;
    }
    if (full.width() > kMaxSimulatedQubits) {
        report.diagnostic = "circuit too wide for the statevector precondition check";
        return report;
    }

    // The prepared state must be stabilized by every generator of the target group.
    StateVector prepared = simulate(fc.prep);
    for (const auto& g : fc.target.state_stabilizers.generators) {
        StateVector image = prepared;
        image.apply_pauli(g.widened(fc.prep.width()));
        double overlap = prepared.inner(image).real();
        if (std::abs(overlap - 1.0) > 1e-9) {
            report.diagnostic = "prepared state is not stabilized by " + g.str();
            return report;
        }
    }
    auto ideal = detail::decode_probabilities(outcome_probabilities(full, simulate(full)), fc.rule);
    if (std::abs(ideal.accepted - 1.0) > 1e-9) {
        report.diagnostic = "noiseless run is rejected with probability " + std::to_string(1.0 - ideal.accepted);
        return report;
    }
    report.precondition_ok = true;

    // Index of the last gate that cannot be crossed as a Pauli. The target group
    // describes the state only up to the end of the preparation, so faults that
    // still have to pass a layer gate go through the statevector as well.
    std::optional<std::size_t> last_non_clifford;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (!full[i].is_clifford()) {
            last_non_clifford = i;
        }
    }
    if (!fc.layer.empty()) {
        std::size_t layer_end = fc.prep.size() + fc.layer.size() - 1;
        last_non_clifford = std::max(last_non_clifford.value_or(0), layer_end);
    }

    auto sites = enumerate_fault_sites(full);
    report.site_count = sites.size();
    report.location_total = count_locations(full).total;
    for (const auto& site : sites) {
        std::size_t first = site.before ? site.location : site.location + 1;
        bool needs_statevector = last_non_clifford && first <= *last_non_clifford;
        for (const auto& fault : site.faults) {
            if (!needs_statevector) {
                try {
                    PauliOperator r = propagate_fault(full, site.location, fault, !site.before);
                    report.outcomes.push_back(pauli_verdict(full, fc, site.location, fault, site.before, r));
                    continue;
                } catch (const UnsupportedPropagation&) {
                }
            }
            report.outcomes.push_back(
                statevector_verdict(full, fc, site.location, fault, site.before, ideal.logical));
        }
    }
    return report;
}

/// Renders a Pauli with flag qubits named a0, a1, ... e.g. `Z1 Z7 Za0`.
inline std::string render_with_flags(const PauliOperator& p, const Circuit& c) {
    std::string out;
    std::size_t flag_index = 0;
    for (std::size_t q = 0; q < p.width(); ++q) {
        bool flag = q < c.width() && c.role(q) == QubitRole::Flag;
        std::string name = flag ? "a" + std::to_string(flag_index) : std::to_string(q);
        if (flag) {
            ++flag_index;
        }
        char s = p.symbol(q);
        if (s == 'I') {
            continue;
        }
        if (!out.empty()) {
            out.push_back(' ');
        }
        out.push_back(s);
        out += name;
    }
    return out.empty() ? "I" : out;
}

/// `detectable`, `stabilizer`, or the logical label of a prep-circuit residual.
inline std::string annotate_residual(const PauliOperator& residual, const Circuit& prep, const CssCode& code) {
    QubitMask flags = prep.qubits_with_role(QubitRole::Flag) & prep.x_measured_qubits();
    if (residual.z_mask() & flags) {
        return "detectable";
    }
    PauliOperator data = residual.truncated(code.n);
    PauliGroup stabs = code.stabilizers();
    if (any_set(syndrome(data, stabs))) {
        return "detectable";
    }
    if (in_group(data.unsigned_form(), stabs) != Membership::NotMember) {
        return "stabilizer";
    }
    return logical_label(logical_action(data, code));
}

struct WitnessLine {
    std::size_t location = 0;
    std::string gate;
    PauliOperator residual;
    std::string rendered;
    std::string annotation;
};

/// Single `pauli` faults on `qubit` at its preparation and after each
/// multi-qubit gate touching it, pushed to the end of `prep`. Residuals of
/// weight >= 2 are listed from the latest fault to the earliest.
inline std::vector<WitnessLine> propagation_witness(const Circuit& prep, const CssCode& code, std::size_t qubit,
                                                    char pauli) {
    std::vector<WitnessLine> lines;
    PauliOperator fault = PauliOperator::single(prep.width(), qubit, pauli);
    for (std::size_t i = 0; i < prep.size(); ++i) {
        const Gate& g = prep[i];
        if (!((g.qubit_mask() >> qubit) & 1) || !(g.is_prep() || g.is_multi_qubit())) {
            continue;
        }
        PauliOperator r = propagate_fault(prep, i, fault, true).unsigned_form();
        if (r.weight() < 2) {
            continue;
        }
        bool seen = std::any_of(lines.begin(), lines.end(), [&](const WitnessLine& l) { return l.residual == r; });
        if (!seen) {
            lines.push_back(WitnessLine{i, g.str(), r, render_with_flags(r, prep), annotate_residual(r, prep, code)});
        }
    }
    std::reverse(lines.begin(), lines.end());
    return lines;
}

inline std::string format_witness(const std::string& title, const std::vector<WitnessLine>& lines) {
    std::ostringstream out;
    out << title << '\n';
    for (const auto& l : lines) {
        out << "  " << l.rendered << "  [" << l.annotation << "]  after location " << l.location << " (" << l.gate
            << ")\n";
    }
    return out.str();
}

/// Witness lists for both reference circuits and the flag ablation.
inline std::string witness_report() {
    CssCode code = code_832();
    Circuit plus3 = plus3_prep_encoded();
    Circuit ghz = ghz_prep_encoded();
    std::ostringstream out;
    out << format_witness("plus3_prep_encoded: X faults on control 0", propagation_witness(plus3, code, 0, 'X'));
    out << format_witness("plus3_prep_encoded: Z faults on target 1", propagation_witness(plus3, code, 1, 'Z'));
    out << format_witness("ghz_prep_encoded: X faults on pivot 0", propagation_witness(ghz, code, 0, 'X'));
    out << format_witness("ghz_prep_encoded: X faults on pivot 1", propagation_witness(ghz, code, 1, 'X'));

    FtCase ablated = reference_case(TargetState::Plus3, Basis::X);
    ablated.name = "plus3_prep_encoded@X without flag a0";
    ablated.prep = ablate_flag(ablated.prep, kFlagA0);
    FtReport r = verify_fault_tolerance(ablated);
    out << r.summary() << '\n';
    for (const auto* f : r.failures()) {
        out << "  AcceptedLogical: fault " << render_with_flags(f->injected, ablated.prep) << " after location "
            << f->location << " -> " << (f->survivor ? render_with_flags(*f->survivor, ablated.prep) : "?") << " = "
            << (f->logical ? logical_label(*f->logical) : "?") << '\n';
    }
    return out.str();
}

}  // namespace qec832
