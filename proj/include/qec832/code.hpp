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

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qec832/pauli.hpp"

namespace qec832 {

struct CssCode {
    std::size_t n = 0;
    std::size_t k = 0;
    PauliGroup x_stabilizers;
    PauliGroup z_stabilizers;
    std::vector<PauliOperator> logical_x;
    std::vector<PauliOperator> logical_z;

    PauliGroup stabilizers() const {
        PauliGroup all(n, {});
        for (const auto& g : x_stabilizers.generators) {
            all.add(g);
        }
        for (const auto& g : z_stabilizers.generators) {
            all.add(g);
        }
        return all;
    }
};

/// The [[8,3,2]] color code on the vertices of a cube.
///
/// Stabilizers are the global X and four Z faces; logical X operators live on
/// faces and logical Z operators on edges, all containing vertex 0.
inline CssCode code_832() {
    CssCode c;
    c.n = 8;
    c.k = 3;
    c.x_stabilizers = PauliGroup(8, {PauliOperator::from_string("+XXXXXXXX")});
    c.z_stabilizers = PauliGroup(8, {
                                        PauliOperator::from_string("+ZZZZIIII"),
                                        PauliOperator::from_string("+IIIIZZZZ"),
                                        PauliOperator::from_string("+ZZIIZZII"),
                                        PauliOperator::from_string("+ZIZIZIZI"),
                                    });
    c.logical_x = {
        PauliOperator::x_on(8, {0, 1, 2, 3}),
        PauliOperator::x_on(8, {0, 1, 4, 5}),
        PauliOperator::x_on(8, {0, 2, 4, 6}),
    };
    c.logical_z = {
        PauliOperator::z_on(8, {0, 4}),
        PauliOperator::z_on(8, {0, 2}),
        PauliOperator::z_on(8, {0, 1}),
    };
    return c;
}

struct ValidationReport {
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

inline ValidationReport validate_code(const CssCode& c) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };

    auto check_width = [&](const PauliOperator& p, const char* what) {
        if (p.width() != c.n) {
            fail(std::string(what) + " " + p.str() + " has width " + std::to_string(p.width()) + ", expected " +
                 std::to_string(c.n));
            return false;
        }
        return true;
    };

    std::vector<PauliOperator> stabs;
    for (const auto& g : c.x_stabilizers.generators) {
        if (!g.is_x_type()) {
            fail("X stabilizer " + g.str() + " is not X-type");
        }
        if (check_width(g, "stabilizer")) {
            stabs.push_back(g);
        }
    }
    for (const auto& g : c.z_stabilizers.generators) {
        if (!g.is_z_type()) {
            fail("Z stabilizer " + g.str() + " is not Z-type");
        }
        if (check_width(g, "stabilizer")) {
            stabs.push_back(g);
        }
    }
    std::vector<PauliOperator> lx;
    std::vector<PauliOperator> lz;
    for (const auto& l : c.logical_x) {
        if (check_width(l, "logical X")) {
            lx.push_back(l);
        }
    }
    for (const auto& l : c.logical_z) {
        if (check_width(l, "logical Z")) {
            lz.push_back(l);
        }
    }
    if (!report.ok()) {
        return report;
    }

    for (std::size_t i = 0; i < stabs.size(); ++i) {
        for (std::size_t j = i + 1; j < stabs.size(); ++j) {
            if (!commutes(stabs[i], stabs[j])) {
                fail("stabilizers " + stabs[i].str() + " and " + stabs[j].str() + " anticommute");
            }
        }
    }
    PauliGroup group(c.n, stabs);
    std::size_t rank = group_rank(group);
    if (rank != stabs.size()) {
        fail("stabilizer generators are dependent (rank " + std::to_string(rank) + " of " +
             std::to_string(stabs.size()) + ")");
    }
    if (c.logical_x.size() != c.k || c.logical_z.size() != c.k) {
        fail("expected " + std::to_string(c.k) + " logical X and Z operators");
    }
    if (rank + c.k != c.n) {
        fail("n - rank(S) = " + std::to_string(c.n - std::min(rank, c.n)) + " does not match k = " +
             std::to_string(c.k));
    }
    for (const auto* logicals : {&lx, &lz}) {
        for (const auto& l : *logicals) {
            for (const auto& s : stabs) {
                if (!commutes(l, s)) {
                    fail("logical " + l.str() + " anticommutes with stabilizer " + s.str());
                }
            }
            if (in_group(l, group) != Membership::NotMember || in_group(l.negated(), group) != Membership::NotMember) {
                fail("logical " + l.str() + " lies in the stabilizer group");
            }
        }
    }
    for (std::size_t i = 0; i < lx.size(); ++i) {
        for (std::size_t j = 0; j < lz.size(); ++j) {
            bool anti = !commutes(lx[i], lz[j]);
            if (anti != (i == j)) {
                fail("logical X" + std::to_string(i + 1) + " and Z" + std::to_string(j + 1) +
                     (anti ? " anticommute" : " commute"));
            }
        }
    }
    for (const auto* logicals : {&lx, &lz}) {
        for (std::size_t i = 0; i < logicals->size(); ++i) {
            for (std::size_t j = i + 1; j < logicals->size(); ++j) {
                if (!commutes((*logicals)[i], (*logicals)[j])) {
                    fail("logicals " + (*logicals)[i].str() + " and " + (*logicals)[j].str() + " anticommute");
                }
            }
        }
    }
    return report;
}

/// Writes the code as Pauli strings under XSTAB / ZSTAB / LOGX / LOGZ headers.
inline std::string to_text(const CssCode& c) {
    std::ostringstream out;
    auto section = [&](const char* header, const std::vector<PauliOperator>& ops) {
        out << header << '\n';
        for (const auto& p : ops) {
            out << p.str() << '\n';
        }
    };
    section("XSTAB", c.x_stabilizers.generators);
    section("ZSTAB", c.z_stabilizers.generators);
    section("LOGX", c.logical_x);
    section("LOGZ", c.logical_z);
    return out.str();
}

inline CssCode code_from_text(std::string_view text) {
    CssCode c;
    std::vector<PauliOperator>* current = nullptr;
    std::vector<PauliOperator> xs;
    std::vector<PauliOperator> zs;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto last = line.find_last_not_of(" \t\r");
        std::string token = line.substr(first, last - first + 1);
        if (token == "XSTAB") {
            current = &xs;
        } else if (token == "ZSTAB") {
            current = &zs;
        } else if (token == "LOGX") {
            current = &c.logical_x;
        } else if (token == "LOGZ") {
            current = &c.logical_z;
        } else if (current == nullptr) {
            throw std::invalid_argument("Pauli string before any section header: " + token);
        } else {
            current->push_back(PauliOperator::from_string(token));
        }
    }
    std::size_t n = 0;
    for (const auto* v : {&xs, &zs, &c.logical_x, &c.logical_z}) {
        for (const auto& p : *v) {
            if (n == 0) {
                n = p.width();
            } else if (p.width() != n) {
                throw std::invalid_argument("inconsistent Pauli widths in code text");
            }
        }
    }
    if (n == 0) {
        throw std::invalid_argument("code text contains no operators");
    }
    c.n = n;
    c.k = c.logical_x.size();
    c.x_stabilizers = PauliGroup(n, xs);
    c.z_stabilizers = PauliGroup(n, zs);
    return c;
}

enum class TargetState { GHZ, Plus3 };

inline const char* to_string(TargetState s) { return s == TargetState::GHZ ? "GHZ" : "PLUS3"; }

inline TargetState parse_target_state(std::string_view s) {
    if (s == "GHZ" || s == "ghz") {
        return TargetState::GHZ;
    }
    if (s == "PLUS3" || s == "plus3" || s == "+++") {
        return TargetState::Plus3;
    }
    throw std::invalid_argument("unsupported target state: " + std::string(s));
}

/// Code stabilizers extended by signed logical operators fixing one encoded state.
struct TargetStateGroup {
    CssCode code;
    TargetState state;
    PauliGroup state_stabilizers;
};

inline TargetStateGroup target_state_group(const CssCode& c, TargetState state) {
    if (c.k != 3) {
        throw std::invalid_argument("target states are defined for three logical qubits");
    }
    PauliGroup g = c.stabilizers();
    switch (state) {
        case TargetState::GHZ:
            g.add(c.logical_x[0] * c.logical_x[1] * c.logical_x[2]);
            g.add(c.logical_z[0] * c.logical_z[1]);
            g.add(c.logical_z[1] * c.logical_z[2]);
            break;
        case TargetState::Plus3:
            for (const auto& l : c.logical_x) {
                g.add(l);
            }
            break;
        default:
            throw std::invalid_argument("unsupported target state");
    }
    return TargetStateGroup{c, state, std::move(g)};
}

enum class ResidualClass { TrivialOnTarget, DetectableByCode, LogicalOnTarget };

inline const char* to_string(ResidualClass r) {
    switch (r) {
        case ResidualClass::TrivialOnTarget:
            return "TrivialOnTarget";
        case ResidualClass::DetectableByCode:
            return "DetectableByCode";
        case ResidualClass::LogicalOnTarget:
            return "LogicalOnTarget";
    }
    return "?";
}

/// Classifies a data-qubit Pauli by its action on the target state.
/// The sign of `e` matters: only +1 members of the state group are trivial.
inline ResidualClass classify_residual(const PauliOperator& e, const TargetStateGroup& t) {
    if (e.width() != t.code.n) {
        throw std::invalid_argument("residual must act on exactly the " + std::to_string(t.code.n) +
                                    " data qubits, got width " + std::to_string(e.width()));
    }
    if (any_set(syndrome(e, t.code.stabilizers()))) {
        return ResidualClass::DetectableByCode;
    }
    return in_group(e, t.state_stabilizers) == Membership::PlusMember ? ResidualClass::TrivialOnTarget
                                                                      : ResidualClass::LogicalOnTarget;
}

/// Logical Pauli equivalent of `e` modulo stabilizers, as a k-qubit operator.
/// `e` must commute with every stabilizer. The sign is not tracked.
inline PauliOperator logical_action(const PauliOperator& e, const CssCode& c) {
    QubitMask x = 0;
    QubitMask z = 0;
    for (std::size_t i = 0; i < c.k; ++i) {
        if (!commutes(e, c.logical_z[i])) {
            x |= QubitMask{1} << i;
        }
        if (!commutes(e, c.logical_x[i])) {
            z |= QubitMask{1} << i;
        }
    }
    return PauliOperator(c.k, x, z, static_cast<std::uint8_t>(popcount(x & z)));
}

/// Renders a logical operator as e.g. `Xbar1 Xbar2 Xbar3`.
inline std::string logical_label(const PauliOperator& logical) {
    std::string out;
    for (std::size_t i = 0; i < logical.width(); ++i) {
        char s = logical.symbol(i);
        if (s == 'I') {
            continue;
        }
        if (!out.empty()) {
            out.push_back(' ');
        }
        out.push_back(s);
        out += "bar" + std::to_string(i + 1);
    }
    return out.empty() ? "I" : out;
}

}  // namespace qec832
