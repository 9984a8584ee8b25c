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
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qec832/pauli.hpp"

namespace qec832 {

enum class Basis { X, Z };

inline const char* to_string(Basis b) { return b == Basis::X ? "X" : "Z"; }

inline Basis parse_basis(std::string_view s) {
    if (s == "X" || s == "x") {
        return Basis::X;
    }
    if (s == "Z" || s == "z") {
        return Basis::Z;
    }
    throw std::invalid_argument("unknown basis: " + std::string(s));
}

enum class GateKind : std::uint8_t {
    PrepZ,
    PrepX,
    H,
    PauliX,
    PauliZ,
    PhaseT,  // diag(1, e^{i pi k / 4})
    CNOT,
    CZ,
    CCZ,
    MeasureZ,
    MeasureX,
};

struct Gate {
    GateKind kind;
    std::array<std::uint8_t, 3> qubits{};
    std::uint8_t exponent = 0;

    static Gate prep_z(std::size_t q) { return {GateKind::PrepZ, {u8(q)}}; }
    static Gate prep_x(std::size_t q) { return {GateKind::PrepX, {u8(q)}}; }
    static Gate h(std::size_t q) { return {GateKind::H, {u8(q)}}; }
    static Gate x(std::size_t q) { return {GateKind::PauliX, {u8(q)}}; }
    static Gate z(std::size_t q) { return {GateKind::PauliZ, {u8(q)}}; }
    static Gate t_pow(std::size_t q, int k) {
        return {GateKind::PhaseT, {u8(q)}, static_cast<std::uint8_t>(((k % 8) + 8) % 8)};
    }
    static Gate t(std::size_t q) { return t_pow(q, 1); }
    static Gate t_dag(std::size_t q) { return t_pow(q, 7); }
    static Gate s(std::size_t q) { return t_pow(q, 2); }
    static Gate s_dag(std::size_t q) { return t_pow(q, 6); }
    static Gate cnot(std::size_t control, std::size_t target) { return {GateKind::CNOT, {u8(control), u8(target)}}; }
    static Gate cz(std::size_t a, std::size_t b) { return {GateKind::CZ, {u8(a), u8(b)}}; }
    static Gate ccz(std::size_t a, std::size_t b, std::size_t c) { return {GateKind::CCZ, {u8(a), u8(b), u8(c)}}; }
    static Gate measure_z(std::size_t q) { return {GateKind::MeasureZ, {u8(q)}}; }
    static Gate measure_x(std::size_t q) { return {GateKind::MeasureX, {u8(q)}}; }

    std::size_t arity() const {
        switch (kind) {
            case GateKind::CNOT:
            case GateKind::CZ:
                return 2;
            case GateKind::CCZ:
                return 3;
            default:
                return 1;
        }
    }

    bool is_prep() const { return kind == GateKind::PrepZ || kind == GateKind::PrepX; }
    bool is_measurement() const { return kind == GateKind::MeasureZ || kind == GateKind::MeasureX; }
    bool is_multi_qubit() const { return arity() >= 2; }
    bool is_unitary() const { return !is_prep() && !is_measurement(); }

    bool is_clifford() const {
        if (kind == GateKind::CCZ) {
            return false;
        }
        if (kind == GateKind::PhaseT) {
            return exponent % 2 == 0;
        }
        return true;
    }

    QubitMask qubit_mask() const {
        QubitMask m = 0;
        for (std::size_t i = 0; i < arity(); ++i) {
            m |= QubitMask{1} << qubits[i];
        }
        return m;
    }

    std::string str() const {
        std::string out = name();
        for (std::size_t i = 0; i < arity(); ++i) {
            out += ' ';
            out += std::to_string(qubits[i]);
        }
        if (kind == GateKind::PhaseT) {
            out += ' ';
            out += std::to_string(exponent);
        }
        return out;
    }

    const char* name() const {
        switch (kind) {
            case GateKind::PrepZ:
                return "PREPZ";
            case GateKind::PrepX:
                return "PREPX";
            case GateKind::H:
                return "H";
            case GateKind::PauliX:
                return "X";
            case GateKind::PauliZ:
                return "Z";
            case GateKind::PhaseT:
                return "TPOW";
            case GateKind::CNOT:
                return "CNOT";
            case GateKind::CZ:
                return "CZ";
            case GateKind::CCZ:
                return "CCZ";
            case GateKind::MeasureZ:
                return "MZ";
            case GateKind::MeasureX:
                return "MX";
        }
        return "?";
    }

    bool operator==(const Gate&) const = default;

   private:
    static std::uint8_t u8(std::size_t q) { return static_cast<std::uint8_t>(q); }
};

enum class QubitRole : std::uint8_t { Data, Flag, Bare };

inline char role_char(QubitRole r) {
    switch (r) {
        case QubitRole::Data:
            return 'd';
        case QubitRole::Flag:
            return 'f';
        case QubitRole::Bare:
            return 'b';
    }
    return '?';
}

/// Ordered gate list over a fixed register. Every gate, preparation and
/// measurement is one fault location, numbered by its index in `gates()`.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(std::vector<QubitRole> roles) : roles_(std::move(roles)) {
        if (roles_.empty() || roles_.size() > kMaxQubits) {
            throw std::invalid_argument("circuit width must be in 1.." + std::to_string(kMaxQubits));
        }
    }
    Circuit(std::size_t width, QubitRole role) : Circuit(std::vector<QubitRole>(width, role)) {}

    std::size_t width() const { return roles_.size(); }
    const std::vector<QubitRole>& roles() const { return roles_; }
    QubitRole role(std::size_t q) const { return roles_.at(q); }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    const Gate& operator[](std::size_t i) const { return gates_[i]; }

    QubitMask qubits_with_role(QubitRole r) const {
        QubitMask m = 0;
        for (std::size_t q = 0; q < roles_.size(); ++q) {
            if (roles_[q] == r) {
                m |= QubitMask{1} << q;
            }
        }
        return m;
    }

    Circuit& append(const Gate& g) {
        for (std::size_t i = 0; i < g.arity(); ++i) {
            if (g.qubits[i] >= width()) {
                throw std::invalid_argument("gate " + g.str() + " addresses a qubit outside width " +
                                            std::to_string(width()));
            }
            for (std::size_t j = i + 1; j < g.arity(); ++j) {
                if (g.qubits[i] == g.qubits[j]) {
                    throw std::invalid_argument("gate " + g.str() + " repeats a qubit");
                }
            }
        }
        gates_.push_back(g);
        return *this;
    }

    Circuit& append(const std::vector<Gate>& gs) {
        for (const auto& g : gs) {
            append(g);
        }
        return *this;
    }

    Circuit without_gate(std::size_t index) const {
        Circuit c = *this;
        c.gates_.erase(c.gates_.begin() + static_cast<std::ptrdiff_t>(index));
        return c;
    }

    /// Checks that each used qubit is prepared exactly once before use and
    /// measured at most once, with nothing acting on it afterwards.
    void validate() const {
        enum class State { Fresh, Live, Measured };
        std::vector<State> state(width(), State::Fresh);
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            const Gate& g = gates_[i];
            for (std::size_t k = 0; k < g.arity(); ++k) {
                std::size_t q = g.qubits[k];
                auto where = " at location " + std::to_string(i) + " (" + g.str() + ")";
                if (g.is_prep()) {
                    if (state[q] != State::Fresh) {
                        throw std::invalid_argument("qubit " + std::to_string(q) + " prepared twice" + where);
                    }
                    state[q] = State::Live;
                } else if (state[q] == State::Fresh) {
                    throw std::invalid_argument("qubit " + std::to_string(q) + " used before preparation" + where);
                } else if (state[q] == State::Measured) {
                    throw std::invalid_argument("qubit " + std::to_string(q) + " used after measurement" + where);
                } else if (g.is_measurement()) {
                    state[q] = State::Measured;
                }
            }
        }
    }

    QubitMask measured_qubits() const {
        QubitMask m = 0;
        for (const auto& g : gates_) {
            if (g.is_measurement()) {
                m |= g.qubit_mask();
            }
        }
        return m;
    }

    QubitMask x_measured_qubits() const {
        QubitMask m = 0;
        for (const auto& g : gates_) {
            if (g.kind == GateKind::MeasureX) {
                m |= g.qubit_mask();
            }
        }
        return m;
    }

    std::string to_text() const {
        std::ostringstream out;
        out << "ROLES";
        for (auto r : roles_) {
            out << ' ' << role_char(r);
        }
        out << '\n';
        for (const auto& g : gates_) {
            out << g.str() << '\n';
        }
        return out.str();
    }

    static Circuit from_text(std::string_view text);

    bool operator==(const Circuit&) const = default;

   private:
    std::vector<QubitRole> roles_;
    std::vector<Gate> gates_;
};

inline Circuit Circuit::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<Circuit> c;
    auto err = [&](const std::string& msg) {
        return std::invalid_argument("circuit text line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream words(line);
        std::string op;
        if (!(words >> op)) {
            continue;
        }
        if (op == "ROLES") {
            if (c) {
                throw err("duplicate ROLES header");
            }
            std::vector<QubitRole> roles;
            std::string r;
            while (words >> r) {
                if (r == "d") {
                    roles.push_back(QubitRole::Data);
                } else if (r == "f") {
                    roles.push_back(QubitRole::Flag);
                } else if (r == "b") {
                    roles.push_back(QubitRole::Bare);
                } else {
                    throw err("unknown qubit role '" + r + "'");
                }
            }
            c.emplace(std::move(roles));
            continue;
        }
        if (!c) {
            throw err("gate before ROLES header");
        }
        std::vector<long> args;
        long v;
        while (words >> v) {
            if (v < 0) {
                throw err("negative argument");
            }
            args.push_back(v);
        }
        if (!words.eof()) {
            throw err("non-numeric argument");
        }
        auto need = [&](std::size_t n) {
            if (args.size() != n) {
                throw err(op + " expects " + std::to_string(n) + " arguments");
            }
        };
        auto q = [&](std::size_t i) { return static_cast<std::size_t>(args[i]); };
        try {
            if (op == "PREPZ") {
                need(1), c->append(Gate::prep_z(q(0)));
            } else if (op == "PREPX") {
                need(1), c->append(Gate::prep_x(q(0)));
            } else if (op == "H") {
                need(1), c->append(Gate::h(q(0)));
            } else if (op == "X") {
                need(1), c->append(Gate::x(q(0)));
            } else if (op == "Z") {
                need(1), c->append(Gate::z(q(0)));
            } else if (op == "TPOW") {
                need(2), c->append(Gate::t_pow(q(0), static_cast<int>(args[1])));
            } else if (op == "CNOT") {
                need(2), c->append(Gate::cnot(q(0), q(1)));
            } else if (op == "CZ") {
                need(2), c->append(Gate::cz(q(0), q(1)));
            } else if (op == "CCZ") {
                need(3), c->append(Gate::ccz(q(0), q(1), q(2)));
            } else if (op == "MZ") {
                need(1), c->append(Gate::measure_z(q(0)));
            } else if (op == "MX") {
                need(1), c->append(Gate::measure_x(q(0)));
            } else {
                throw err("unknown gate '" + op + "'");
            }
        } catch (const std::invalid_argument& e) {
            if (std::string_view(e.what()).starts_with("circuit text line")) {
                throw;
            }
            throw err(e.what());
        }
    }
    if (!c) {
        throw std::invalid_argument("circuit text has no ROLES header");
    }
    return *c;
}

/// Exponents (mod 8) of a depth-one layer of T powers on the 8 code qubits.
struct PhaseVector {
    std::array<std::uint8_t, 8> k{};

    PhaseVector() = default;
    PhaseVector(std::initializer_list<int> ks) {
        if (ks.size() != 8) {
            throw std::invalid_argument("PhaseVector needs 8 exponents");
        }
        std::size_t i = 0;
        for (int v : ks) {
            k[i++] = static_cast<std::uint8_t>(((v % 8) + 8) % 8);
        }
    }

    bool is_identity() const {
        for (auto v : k) {
            if (v != 0) {
                return false;
            }
        }
        return true;
    }

    PhaseVector operator+(const PhaseVector& o) const {
        PhaseVector r;
        for (std::size_t i = 0; i < 8; ++i) {
            r.k[i] = static_cast<std::uint8_t>((k[i] + o.k[i]) % 8);
        }
        return r;
    }

    bool operator==(const PhaseVector&) const = default;
};

/// One TPOW per qubit with a nonzero exponent.
inline std::vector<Gate> phase_pattern_circuit(const PhaseVector& v) {
    std::vector<Gate> out;
    for (std::size_t q = 0; q < v.k.size(); ++q) {
        if (v.k[q] != 0) {
            out.push_back(Gate::t_pow(q, v.k[q]));
        }
    }
    return out;
}

enum class CczCountPolicy { Native, Compiled };

struct LocationCounts {
    std::size_t n_g = 0;  // multi-qubit gates
    std::size_t n_m = 0;  // measurements
    std::size_t total = 0;

    bool operator==(const LocationCounts&) const = default;
};

// A compiled CCZ is 6 CNOTs and 7 single-qubit T powers.
inline constexpr std::size_t kCompiledCczCnots = 6;
inline constexpr std::size_t kCompiledCczPhases = 7;

inline LocationCounts count_locations(const Circuit& c, CczCountPolicy policy = CczCountPolicy::Native) {
    LocationCounts counts;
    for (const auto& g : c.gates()) {
        if (g.kind == GateKind::CCZ && policy == CczCountPolicy::Compiled) {
            counts.n_g += kCompiledCczCnots;
            counts.total += kCompiledCczCnots + kCompiledCczPhases;
            continue;
        }
        if (g.is_multi_qubit()) {
            ++counts.n_g;
        } else if (g.is_measurement()) {
            ++counts.n_m;
        }
        ++counts.total;
    }
    return counts;
}

/// Raised when a fault cannot be pushed through a non-Clifford gate as a Pauli.
class UnsupportedPropagation : public std::runtime_error {
   public:
    UnsupportedPropagation(std::size_t location, const std::string& what)
        : std::runtime_error(what), location_(location) {}
    std::size_t location() const { return location_; }

   private:
    std::size_t location_;
};

namespace detail {

/// U X_q U^dagger and U Z_q U^dagger for a Clifford gate, or nullopt when the
/// image is not a Pauli (odd T powers on X, CCZ on X).
inline std::optional<PauliOperator> conjugate_generator(const Gate& g, std::size_t width, std::size_t q, bool is_x) {
    auto X = [&](std::size_t a) { return PauliOperator::single(width, a, 'X'); };
    auto Z = [&](std::size_t a) { return PauliOperator::single(width, a, 'Z'); };
    const auto& qs = g.qubits;
    switch (g.kind) {
        case GateKind::H:
            return is_x ? Z(q) : X(q);
        case GateKind::PauliX:
            return is_x ? X(q) : Z(q).negated();
        case GateKind::PauliZ:
            return is_x ? X(q).negated() : Z(q);
        case GateKind::PhaseT: {
            if (!is_x) {
                return Z(q);
            }
            if (g.exponent % 2 != 0) {
                return std::nullopt;
            }
            // S^m X S^-m: X, iXZ (=Y), -X, -iXZ (=-Y).
            auto m = static_cast<std::uint8_t>(g.exponent / 2);
            QubitMask b = QubitMask{1} << q;
            QubitMask z = (m % 2 == 1) ? b : 0;
            return PauliOperator(width, b, z, m);
        }
        case GateKind::CNOT: {
            std::size_t c = qs[0];
            std::size_t t = qs[1];
            if (is_x) {
                return q == c ? X(c) * X(t) : X(q);
            }
            return q == t ? Z(c) * Z(t) : Z(q);
        }
        case GateKind::CZ: {
            if (!is_x) {
                return Z(q);
            }
            std::size_t other = q == qs[0] ? qs[1] : qs[0];
            return X(q) * Z(other);
        }
        case GateKind::CCZ:
            if (!is_x) {
                return Z(q);
            }
            return std::nullopt;
        default:
            return is_x ? X(q) : Z(q);
    }
}

/// Conjugates `p` through gate `g` in place.
inline void conjugate_through(PauliOperator& p, const Gate& g, std::size_t location) {
    QubitMask touched = g.qubit_mask();
    if ((p.support() & touched) == 0) {
        return;
    }
    if (g.is_measurement()) {
        return;
    }
    if (g.is_prep()) {
        throw std::invalid_argument("fault reaches a qubit before its preparation at location " +
                                    std::to_string(location));
    }
    std::size_t w = p.width();
    // p = i^k prod_q X_q^{x_q} prod_q Z_q^{z_q}; conjugate factor by factor.
    PauliOperator out(w, p.x_mask() & ~touched, 0, p.phase());
    for (std::size_t q = 0; q < w; ++q) {
        if (((p.x_mask() >> q) & 1) && ((touched >> q) & 1)) {
            auto img = conjugate_generator(g, w, q, true);
            if (!img) {
                throw UnsupportedPropagation(location, "X component on qubit " + std::to_string(q) +
                                                           " cannot pass non-Clifford gate " + g.str() +
                                                           " at location " + std::to_string(location));
            }
            out = out * *img;
        }
    }
    for (std::size_t q = 0; q < w; ++q) {
        if (!((p.z_mask() >> q) & 1)) {
            continue;
        }
        if ((touched >> q) & 1) {
            auto img = conjugate_generator(g, w, q, false);
            out = out * *img;
        } else {
            out = out * PauliOperator(w, 0, QubitMask{1} << q);
        }
    }
    p = out;
}

}  // namespace detail

/// Pushes a Pauli fault at `site` to the end of the circuit by Clifford conjugation.
///
/// With `start_after` the fault occurs just after the gate at `site`, otherwise
/// just before it. Measurements leave the operator unchanged, so the result is
/// the error seen by the terminal readout, flag qubits included.
inline PauliOperator propagate_fault(const Circuit& c, std::size_t site, const PauliOperator& fault, bool start_after) {
    if (fault.width() != c.width()) {
        throw std::invalid_argument("fault width does not match circuit width");
    }
    if (site >= c.size()) {
        throw std::invalid_argument("fault site " + std::to_string(site) + " out of range");
    }
    if ((fault.support() & ~c[site].qubit_mask()) != 0) {
        throw std::invalid_argument("fault " + fault.str() + " is not supported on the qubits of location " +
                                    std::to_string(site));
    }
    PauliOperator p = fault;
    for (std::size_t i = start_after ? site + 1 : site; i < c.size(); ++i) {
        detail::conjugate_through(p, c[i], i);
    }
    return p;
}

}  // namespace qec832
