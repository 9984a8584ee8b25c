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
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qec832/circuit.hpp"
#include "qec832/pauli.hpp"
#include "qec832/random.hpp"

namespace qec832 {

inline constexpr std::size_t kMaxSimulatedQubits = 14;

using Amplitude = std::complex<double>;

/// Dense amplitudes; bit q of an index is the computational value of qubit q.
class StateVector {
   public:
    explicit StateVector(std::size_t width) : width_(width) {
        if (width == 0 || width > kMaxSimulatedQubits) {
            throw std::invalid_argument("state width must be in 1.." + std::to_string(kMaxSimulatedQubits));
        }
        amps_.assign(std::size_t{1} << width, Amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    StateVector(std::size_t width, std::vector<Amplitude> amps) : width_(width), amps_(std::move(amps)) {
        if (width == 0 || width > kMaxSimulatedQubits || amps_.size() != (std::size_t{1} << width)) {
            throw std::invalid_argument("amplitude count does not match state width");
        }
    }

    std::size_t width() const { return width_; }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    Amplitude operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const {
        double s = 0;
        for (const auto& a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    /// <this|other>
    Amplitude inner(const StateVector& other) const {
        if (other.width_ != width_) {
            throw std::invalid_argument("inner product width mismatch");
        }
        Amplitude s = 0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            s += std::conj(amps_[i]) * other.amps_[i];
        }
        return s;
    }

    void scale(Amplitude factor) {
        for (auto& a : amps_) {
            a *= factor;
        }
    }

    void apply_h(std::size_t q) {
        const std::size_t bit = std::size_t{1} << q;
        const double r = std::numbers::sqrt2 / 2;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) {
                continue;
            }
            Amplitude a = amps_[i];
            Amplitude b = amps_[i | bit];
            amps_[i] = r * (a + b);
            amps_[i | bit] = r * (a - b);
        }
    }

    void apply_x(std::size_t q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (!(i & bit)) {
                std::swap(amps_[i], amps_[i | bit]);
            }
        }
    }

    /// diag(1, e^{i pi k / 4}) on qubit q.
    void apply_phase(std::size_t q, int k) {
        const std::size_t bit = std::size_t{1} << q;
        Amplitude w = eighth_root(k);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) {
                amps_[i] *= w;
            }
        }
    }

    void apply_cnot(std::size_t c, std::size_t t) {
        const std::size_t cb = std::size_t{1} << c;
        const std::size_t tb = std::size_t{1} << t;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if ((i & cb) && !(i & tb)) {
                std::swap(amps_[i], amps_[i | tb]);
            }
        }
    }

    /// Negates every amplitude whose index contains all bits of `mask` (CZ, CCZ).
    void apply_controlled_phase_flip(std::size_t mask) {
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if ((i & mask) == mask) {
                amps_[i] = -amps_[i];
            }
        }
    }

    void apply(const Gate& g) {
        const auto& q = g.qubits;
        switch (g.kind) {
            case GateKind::PrepZ:
                break;
            case GateKind::PrepX:
            case GateKind::H:
                apply_h(q[0]);
                break;
            case GateKind::PauliX:
                apply_x(q[0]);
                break;
            case GateKind::PauliZ:
                apply_phase(q[0], 4);
                break;
            case GateKind::PhaseT:
                apply_phase(q[0], g.exponent);
                break;
            case GateKind::CNOT:
                apply_cnot(q[0], q[1]);
                break;
            case GateKind::CZ:
            case GateKind::CCZ:
                apply_controlled_phase_flip(g.qubit_mask());
                break;
            case GateKind::MeasureZ:
            case GateKind::MeasureX:
                throw std::invalid_argument("measurements are not unitary");
        }
    }

    /// Applies i^k X^x Z^z (Z block first).
    void apply_pauli(const PauliOperator& p) {
        if (p.width() != width_) {
            throw std::invalid_argument("Pauli width does not match state width");
        }
        static constexpr Amplitude kPowersOfI[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        std::vector<Amplitude> out(amps_.size());
        const std::size_t x = p.x_mask();
        const std::size_t z = p.z_mask();
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            int k = p.phase() + 2 * std::popcount(static_cast<QubitMask>(i & z));
            out[i ^ x] = kPowersOfI[k & 3] * amps_[i];
        }
        amps_ = std::move(out);
    }

    /// Probabilities of computational-basis outcomes indexed like the amplitudes.
    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            p[i] = std::norm(amps_[i]);
        }
        return p;
    }

   private:
    static Amplitude eighth_root(int k) {
        k = ((k % 8) + 8) % 8;
        const double r = std::numbers::sqrt2 / 2;
        static const Amplitude kRoots[] = {{1, 0}, {r, r}, {0, 1}, {-r, r}, {-1, 0}, {-r, -r}, {0, -1}, {r, -r}};
        return kRoots[k];
    }

    std::size_t width_;
    std::vector<Amplitude> amps_;
};

/// True iff |<a|b>| >= 1 - tol.
inline bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol = 1e-10) {
    if (a.width() != b.width()) {
        throw std::invalid_argument("equal_up_to_global_phase width mismatch");
    }
    return std::abs(a.inner(b)) >= 1.0 - tol;
}

/// Measured-outcome distribution. Keys are bitstrings over the measured
/// qubits in increasing index order, qubit 0 leftmost.
struct OutcomeDistribution {
    Basis basis = Basis::Z;
    std::size_t width = 0;
    std::map<std::string, double> probabilities;

    double operator()(const std::string& key) const {
        auto it = probabilities.find(key);
        return it == probabilities.end() ? 0.0 : it->second;
    }

    double total() const {
        double s = 0;
        for (const auto& [k, v] : probabilities) {
            s += v;
        }
        return s;
    }

    /// `bitstring,probability` rows in lexicographic order.
    std::string to_csv() const {
        std::ostringstream out;
        out.precision(17);
        for (const auto& [k, v] : probabilities) {
            out << k << ',' << v << '\n';
        }
        return out.str();
    }

    static OutcomeDistribution from_counts(Basis basis, std::size_t width, const std::map<std::string, std::size_t>& counts) {
        OutcomeDistribution d{basis, width, {}};
        std::size_t total = 0;
        for (const auto& [k, v] : counts) {
            total += v;
        }
        if (total == 0) {
            return d;
        }
        for (const auto& [k, v] : counts) {
            if (v > 0) {
                d.probabilities[k] = static_cast<double>(v) / static_cast<double>(total);
            }
        }
        return d;
    }
};

/// Renders the bits of `value` selected by `mask`, lowest qubit first.
inline std::string bits_to_string(QubitMask value, QubitMask mask, std::size_t width) {
    std::string s;
    for (std::size_t q = 0; q < width; ++q) {
        if ((mask >> q) & 1) {
            s.push_back(((value >> q) & 1) ? '1' : '0');
        }
    }
    return s;
}

/// Total variation distance, 1/2 sum |p(x) - q(x)|.
inline double tvd(const OutcomeDistribution& p, const OutcomeDistribution& q) {
    if (p.basis != q.basis || p.width != q.width) {
        throw std::invalid_argument("tvd requires distributions over the same basis and width");
    }
    double s = 0;
    for (const auto& [k, v] : p.probabilities) {
        s += std::abs(v - q(k));
    }
    for (const auto& [k, v] : q.probabilities) {
        if (!p.probabilities.contains(k)) {
            s += std::abs(v);
        }
    }
    return 0.5 * s;
}

struct InjectedFault {
    std::size_t location = 0;
    PauliOperator pauli;
    bool before = false;  // otherwise just after the gate
};

/// Runs the unitary part of `c` (preparations included), applying each
/// injected Pauli next to its location. Measurements are skipped.
inline StateVector simulate(const Circuit& c, std::span<const InjectedFault> faults = {}) {
    StateVector s(c.width());
    auto inject = [&](std::size_t loc, bool before) {
        for (const auto& f : faults) {
            if (f.location == loc && f.before == before) {
                s.apply_pauli(f.pauli);
            }
        }
    };
    for (std::size_t i = 0; i < c.size(); ++i) {
        inject(i, true);
        if (!c[i].is_measurement()) {
            s.apply(c[i]);
        }
        inject(i, false);
    }
    return s;
}

/// Outcome probabilities over all qubits after rotating MX qubits to the Z basis.
inline std::vector<double> outcome_probabilities(const Circuit& c, StateVector pre_measurement) {
    QubitMask mx = c.x_measured_qubits();
    for (std::size_t q = 0; q < c.width(); ++q) {
        if ((mx >> q) & 1) {
            pre_measurement.apply_h(q);
        }
    }
    return pre_measurement.probabilities();
}

struct ExactRun {
    StateVector state;  // before any measurement
    OutcomeDistribution distribution;
};

/// Basis reported for a circuit's readout: that of its data (or bare) measurements.
inline Basis readout_basis(const Circuit& c) {
    QubitMask non_flag = ~c.qubits_with_role(QubitRole::Flag);
    QubitMask measured = c.measured_qubits() & non_flag;
    return (c.x_measured_qubits() & measured) != 0 ? Basis::X : Basis::Z;
}

/// Marginal distribution on the measured qubits from full outcome probabilities.
inline OutcomeDistribution marginal_distribution(const Circuit& c, const std::vector<double>& probs) {
    QubitMask measured = c.measured_qubits();
    OutcomeDistribution d{readout_basis(c), static_cast<std::size_t>(popcount(measured)), {}};
    std::map<QubitMask, double> acc;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0) {
            acc[static_cast<QubitMask>(i) & measured] += probs[i];
        }
    }
    for (const auto& [k, v] : acc) {
        if (v > 1e-15) {
            d.probabilities[bits_to_string(k, measured, c.width())] = v;
        }
    }
    return d;
}

inline ExactRun run_exact(const Circuit& c) {
    if (c.width() > kMaxSimulatedQubits) {
        throw std::invalid_argument("circuit too wide for exact simulation");
    }
    c.validate();
    StateVector s = simulate(c);
    auto probs = outcome_probabilities(c, s);
    return ExactRun{std::move(s), marginal_distribution(c, probs)};
}

/// `shots` i.i.d. draws from `d`.
inline std::vector<std::string> sample(const OutcomeDistribution& d, Rng& rng, std::size_t shots) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be positive");
    }
    if (d.probabilities.empty()) {
        throw std::invalid_argument("cannot sample an empty distribution");
    }
    std::vector<const std::string*> keys;
    std::vector<double> cdf;
    double acc = 0;
    for (const auto& [k, v] : d.probabilities) {
        acc += v;
        keys.push_back(&k);
        cdf.push_back(acc);
    }
    std::vector<std::string> out;
    out.reserve(shots);
    for (std::size_t i = 0; i < shots; ++i) {
        double u = uniform01(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), keys.size() - 1);
        out.push_back(*keys[idx]);
    }
    return out;
}

}  // namespace qec832
