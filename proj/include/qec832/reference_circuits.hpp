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

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qec832/circuit.hpp"
#include "qec832/code.hpp"
#include "qec832/statevector.hpp"

namespace qec832 {

enum class LogicalGate : std::uint8_t { CZ12 = 0, CZ13 = 1, CZ23 = 2, CCZ = 3 };

inline constexpr std::array<const char*, 4> kLogicalGateNames = {"CZ12", "CZ13", "CZ23", "CCZ"};

/// A product of logical diagonal gates, one bit per LogicalGate.
/// Index order 0..15 matches the row order of the post-selection tables.
struct GateSubset {
    std::uint8_t bits = 0;

    static GateSubset of(std::initializer_list<LogicalGate> gates) {
        GateSubset s;
        for (auto g : gates) {
            s.bits |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(g));
        }
        return s;
    }

    static std::vector<GateSubset> all() {
        std::vector<GateSubset> out;
        for (std::uint8_t b = 0; b < 16; ++b) {
            out.push_back(GateSubset{b});
        }
        return out;
    }

    bool contains(LogicalGate g) const { return (bits >> static_cast<unsigned>(g)) & 1u; }
    bool is_clifford() const { return !contains(LogicalGate::CCZ); }

    /// `CZ12.CCZ`, or `I` for the empty product.
    std::string name(std::string_view sep = ".") const {
        std::string out;
        for (unsigned i = 0; i < 4; ++i) {
            if ((bits >> i) & 1u) {
                if (!out.empty()) {
                    out += sep;
                }
                out += kLogicalGateNames[i];
            }
        }
        return out.empty() ? "I" : out;
    }

    static GateSubset parse(std::string_view s) {
        GateSubset out;
        if (s.empty() || s == "I" || s == "{}") {
            return out;
        }
        std::size_t pos = 0;
        while (pos <= s.size()) {
            std::size_t dot = s.find('.', pos);
            std::string_view tok = s.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
            bool found = false;
            for (unsigned i = 0; i < 4; ++i) {
                if (tok == kLogicalGateNames[i]) {
                    out.bits |= static_cast<std::uint8_t>(1u << i);
                    found = true;
                }
            }
            if (!found) {
                throw std::invalid_argument("unknown logical gate '" + std::string(tok) + "'");
            }
            if (dot == std::string_view::npos) {
                break;
            }
            pos = dot + 1;
        }
        return out;
    }

    bool operator==(const GateSubset&) const = default;
};

enum class Encoding { Bare, Encoded };
enum class CczMode { Native, Compiled };

inline const char* to_string(Encoding e) { return e == Encoding::Bare ? "bare" : "encoded"; }
inline const char* to_string(CczMode m) { return m == CczMode::Native ? "native" : "compiled"; }

inline Encoding parse_encoding(std::string_view s) {
    if (s == "bare") {
        return Encoding::Bare;
    }
    if (s == "encoded") {
        return Encoding::Encoded;
    }
    throw std::invalid_argument("unknown encoding: " + std::string(s));
}

inline CczMode parse_ccz_mode(std::string_view s) {
    if (s == "native") {
        return CczMode::Native;
    }
    if (s == "compiled") {
        return CczMode::Compiled;
    }
    throw std::invalid_argument("unknown ccz mode: " + std::string(s));
}

/// One cell of the experiment matrix: preparation, gate product, readout basis, encoding.
struct ExperimentSpec {
    TargetState state = TargetState::GHZ;
    GateSubset gates;
    Basis basis = Basis::Z;
    Encoding encoding = Encoding::Encoded;
    CczMode ccz_mode = CczMode::Native;

    /// Canonical id such as `GHZ+CZ12.CCZ@X/encoded`. Bare cells with a
    /// compiled CCZ carry a `:compiled` suffix; encoded cells never do.
    std::string id() const {
        std::string s = std::string(to_string(state)) + "+" + gates.name() + "@" + to_string(basis) + "/" +
                        to_string(encoding);
        if (encoding == Encoding::Bare && ccz_mode == CczMode::Compiled) {
            s += ":compiled";
        }
        return s;
    }

    static ExperimentSpec parse(std::string_view s) {
        auto plus = s.find('+');
        auto at = s.find('@');
        auto slash = s.find('/');
        if (plus == std::string_view::npos || at == std::string_view::npos || slash == std::string_view::npos ||
            !(plus < at && at < slash)) {
            throw std::invalid_argument("malformed experiment spec '" + std::string(s) +
                                        "', expected STATE+GATES@BASIS/ENCODING");
        }
        ExperimentSpec spec;
        spec.state = parse_target_state(s.substr(0, plus));
        spec.gates = GateSubset::parse(s.substr(plus + 1, at - plus - 1));
        spec.basis = parse_basis(s.substr(at + 1, slash - at - 1));
        std::string enc(s.substr(slash + 1));
        if (auto colon = enc.find(':'); colon != std::string::npos) {
            spec.ccz_mode = parse_ccz_mode(std::string_view(enc).substr(colon + 1));
            enc.resize(colon);
        }
        spec.encoding = parse_encoding(enc);
        return spec;
    }

    bool operator==(const ExperimentSpec&) const = default;
};

inline constexpr std::size_t kCodeQubits = 8;

/// Encoded GHZ preparation: two identical |+>-pivoted fan-outs over the
/// bipartition {0,3,5,6} and {1,2,4,7} of the cube.
inline Circuit ghz_prep_encoded() {
    Circuit c(kCodeQubits, QubitRole::Data);
    for (std::size_t q = 0; q < kCodeQubits; ++q) {
        c.append(q == 0 || q == 1 ? Gate::prep_x(q) : Gate::prep_z(q));
    }
    c.append({Gate::cnot(0, 3), Gate::cnot(1, 2), Gate::cnot(0, 5), Gate::cnot(1, 4), Gate::cnot(0, 6),
              Gate::cnot(1, 7)});
    return c;
}

inline constexpr std::size_t kFlagA0 = 8;
inline constexpr std::size_t kFlagA1 = 9;
inline constexpr std::size_t kFlagA2 = 10;

/// Encoded |+++> preparation with three flag qubits a0, a1, a2 (qubits 8-10).
///
/// Pivots 0, 5, 6, 7 start in |+> and fan out onto 1-4, one target at a time.
/// Each flag is a |+> control hitting its target twice, bracketing the CNOTs
/// whose Z faults would otherwise leave a weight-2 logical (Z1Z7, Z2Z7, Z3Z6,
/// Z4Z6). Flags are read out in the X basis and must report +1.
inline Circuit plus3_prep_encoded() {
    std::vector<QubitRole> roles(kCodeQubits, QubitRole::Data);
    roles.insert(roles.end(), 3, QubitRole::Flag);
    Circuit c(roles);
    for (std::size_t q = 0; q < c.width(); ++q) {
        bool pivot = q == 0 || q >= 5;
        c.append(pivot ? Gate::prep_x(q) : Gate::prep_z(q));
    }
    c.append({Gate::cnot(0, 1), Gate::cnot(kFlagA0, 1), Gate::cnot(6, 1), Gate::cnot(7, 1), Gate::cnot(kFlagA0, 1)});
    c.append({Gate::cnot(0, 2), Gate::cnot(kFlagA1, 2), Gate::cnot(5, 2), Gate::cnot(7, 2), Gate::cnot(kFlagA1, 2)});
    c.append({Gate::cnot(0, 3), Gate::cnot(kFlagA2, 3), Gate::cnot(5, 3), Gate::cnot(6, 3), Gate::cnot(kFlagA2, 3)});
    c.append({Gate::cnot(5, 4), Gate::cnot(kFlagA2, 4), Gate::cnot(7, 4), Gate::cnot(6, 4), Gate::cnot(kFlagA2, 4)});
    for (std::size_t f : {kFlagA0, kFlagA1, kFlagA2}) {
        c.append(Gate::measure_x(f));
    }
    return c;
}

/// `prep` with every CNOT controlled by `flag` removed.
inline Circuit ablate_flag(const Circuit& prep, std::size_t flag) {
    Circuit out(prep.roles());
    for (const auto& g : prep.gates()) {
        if (g.kind == GateKind::CNOT && g.qubits[0] == flag) {
            continue;
        }
        out.append(g);
    }
    return out;
}

inline Circuit encoded_prep(TargetState s) {
    return s == TargetState::GHZ ? ghz_prep_encoded() : plus3_prep_encoded();
}

/// Appends a transversal readout of the data (or bare) qubits in `basis`.
inline Circuit with_readout(Circuit c, Basis basis) {
    QubitMask readout = c.qubits_with_role(QubitRole::Data) | c.qubits_with_role(QubitRole::Bare);
    for (std::size_t q = 0; q < c.width(); ++q) {
        if ((readout >> q) & 1) {
            c.append(basis == Basis::X ? Gate::measure_x(q) : Gate::measure_z(q));
        }
    }
    return c;
}

inline PhaseVector phase_vector(LogicalGate g) {
    switch (g) {
        case LogicalGate::CZ12:
            return {2, 0, 6, 0, 6, 0, 2, 0};
        case LogicalGate::CZ13:
            return {2, 6, 0, 0, 6, 2, 0, 0};
        case LogicalGate::CZ23:
            return {2, 6, 6, 2, 0, 0, 0, 0};
        case LogicalGate::CCZ:
            return {1, 7, 7, 1, 7, 1, 1, 7};
    }
    throw std::invalid_argument("unknown logical gate");
}

/// Transversal T-power pattern implementing a product of logical gates.
inline PhaseVector logical_phase_vector(GateSubset subset) {
    PhaseVector v;
    for (unsigned i = 0; i < 4; ++i) {
        if ((subset.bits >> i) & 1u) {
            v = v + phase_vector(static_cast<LogicalGate>(i));
        }
    }
    return v;
}

/// CCZ on (a, b, c) as 6 CNOTs and 7 T powers.
inline std::vector<Gate> compiled_ccz(std::size_t a, std::size_t b, std::size_t c) {
    return {
        Gate::cnot(b, c), Gate::t_dag(c), Gate::cnot(a, c), Gate::t(c),    Gate::cnot(b, c),
        Gate::t_dag(c),   Gate::cnot(a, c), Gate::t(b),     Gate::t(c),    Gate::cnot(a, b),
        Gate::t(a),       Gate::t_dag(b),   Gate::cnot(a, b),
    };
}

/// Unencoded three-qubit version of an experiment cell.
inline Circuit bare_circuit(const ExperimentSpec& spec) {
    if (spec.encoding != Encoding::Bare) {
        throw std::invalid_argument("bare_circuit requires a bare spec");
    }
    Circuit c(3, QubitRole::Bare);
    for (std::size_t q = 0; q < 3; ++q) {
        c.append(Gate::prep_z(q));
    }
    if (spec.state == TargetState::GHZ) {
        c.append({Gate::h(0), Gate::cnot(0, 1), Gate::cnot(0, 2)});
    } else {
        c.append({Gate::h(0), Gate::h(1), Gate::h(2)});
    }
    if (spec.gates.contains(LogicalGate::CZ12)) {
        c.append(Gate::cz(0, 1));
    }
    if (spec.gates.contains(LogicalGate::CZ13)) {
        c.append(Gate::cz(0, 2));
    }
    if (spec.gates.contains(LogicalGate::CZ23)) {
        c.append(Gate::cz(1, 2));
    }
    if (spec.gates.contains(LogicalGate::CCZ)) {
        if (spec.ccz_mode == CczMode::Compiled) {
            c.append(compiled_ccz(0, 1, 2));
        } else {
            c.append(Gate::ccz(0, 1, 2));
        }
    }
    return with_readout(std::move(c), spec.basis);
}

/// Encoded preparation, transversal phase layer and transversal readout.
inline Circuit encoded_circuit(const ExperimentSpec& spec) {
    Circuit c = encoded_prep(spec.state);
    c.append(phase_pattern_circuit(logical_phase_vector(spec.gates)));
    return with_readout(std::move(c), spec.basis);
}

inline Circuit experiment_circuit(const ExperimentSpec& spec) {
    return spec.encoding == Encoding::Bare ? bare_circuit(spec) : encoded_circuit(spec);
}

/// Post-selection and decoding of one shot's measured bits.
///
/// Outcomes are masks with bit q holding qubit q's result (1 = -1 eigenvalue).
struct ReadoutRule {
    Basis basis = Basis::Z;
    QubitMask data_qubits = 0;
    std::vector<QubitMask> checks;    // parities that must be even
    std::vector<QubitMask> decoders;  // logical bit i = parity over decoders[i]
    QubitMask flag_qubits = 0;        // X-basis flags that must read +1

    bool flags_ok(QubitMask outcome) const { return (outcome & flag_qubits) == 0; }

    bool checks_ok(QubitMask outcome) const {
        for (auto m : checks) {
            if (popcount(outcome & m) & 1) {
                return false;
            }
        }
        return true;
    }

    bool accepts(QubitMask outcome) const { return flags_ok(outcome) && checks_ok(outcome); }

    QubitMask decode(QubitMask outcome) const {
        QubitMask logical = 0;
        for (std::size_t i = 0; i < decoders.size(); ++i) {
            if (popcount(outcome & decoders[i]) & 1) {
                logical |= QubitMask{1} << i;
            }
        }
        return logical;
    }

    std::string decode_string(QubitMask outcome) const {
        return bits_to_string(decode(outcome), (QubitMask{1} << decoders.size()) - 1, decoders.size());
    }
};

/// Parses a bitstring with qubit 0 leftmost into an outcome mask.
inline QubitMask parse_bits(std::string_view bits) {
    QubitMask m = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            m |= QubitMask{1} << q;
        } else if (bits[q] != '0') {
            throw std::invalid_argument("bitstring may only contain 0 and 1: " + std::string(bits));
        }
    }
    return m;
}

/// Readout for an encoded code block: accept iff every stabilizer measurable
/// in `basis` has even parity; decode via the logical operators of that type.
inline ReadoutRule encoded_readout_rule(const CssCode& code, Basis basis, QubitMask flag_qubits = 0) {
    ReadoutRule r;
    r.basis = basis;
    r.data_qubits = (QubitMask{1} << code.n) - 1;
    const auto& stabs = basis == Basis::X ? code.x_stabilizers.generators : code.z_stabilizers.generators;
    for (const auto& s : stabs) {
        r.checks.push_back(s.support());
    }
    for (const auto& l : basis == Basis::X ? code.logical_x : code.logical_z) {
        r.decoders.push_back(l.support());
    }
    r.flag_qubits = flag_qubits;
    return r;
}

inline ReadoutRule bare_readout_rule(Basis basis) {
    ReadoutRule r;
    r.basis = basis;
    r.data_qubits = 0b111;
    r.decoders = {0b001, 0b010, 0b100};
    return r;
}

inline ReadoutRule readout_rule(const ExperimentSpec& spec) {
    if (spec.encoding == Encoding::Bare) {
        return bare_readout_rule(spec.basis);
    }
    QubitMask flags = spec.state == TargetState::Plus3 ? mask_of({kFlagA0, kFlagA1, kFlagA2}) : 0;
    return encoded_readout_rule(code_832(), spec.basis, flags);
}

/// Exact logical output distribution of a cell under zero noise.
inline OutcomeDistribution ideal_distribution(ExperimentSpec spec) {
    spec.encoding = Encoding::Bare;
    spec.ccz_mode = CczMode::Native;
    return run_exact(bare_circuit(spec)).distribution;
}

}  // namespace qec832
