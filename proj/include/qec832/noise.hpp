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
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qec832/circuit.hpp"
#include "qec832/random.hpp"
#include "qec832/reference_circuits.hpp"
#include "qec832/statevector.hpp"
#include "qec832/verifier.hpp"

namespace qec832 {

/// Stochastic Pauli noise around ideal operations.
struct NoiseModel {
    double p1 = 0;  // single-qubit gates
    double p2 = 0;  // multi-qubit gates
    double pm = 0;  // measurement flips
    double pp = 0;  // preparation flips

    void validate() const {
        for (auto [name, p] : {std::pair{"p1", p1}, std::pair{"p2", p2}, std::pair{"pm", pm}, std::pair{"pp", pp}}) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
            }
        }
    }

    bool noiseless() const { return p1 == 0 && p2 == 0 && pm == 0 && pp == 0; }

    double rate_for(const Gate& g) const {
        if (g.is_prep()) {
            return pp;
        }
        if (g.is_measurement()) {
            return pm;
        }
        return g.is_multi_qubit() ? p2 : p1;
    }

    bool operator==(const NoiseModel&) const = default;
};

enum class RejectReason { None, Flag, Parity };

inline const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::None:
            return "none";
        case RejectReason::Flag:
            return "flag";
        case RejectReason::Parity:
            return "parity";
    }
    return "?";
}

struct ShotOutcome {
    bool accepted = false;
    RejectReason reason = RejectReason::None;
    QubitMask raw = 0;      // measured bits after classical flips
    QubitMask logical = 0;  // decoded logical bits, valid when accepted
};

/// Draws and evaluates shots of one circuit under one noise model.
///
/// Gate faults are injected into an exact simulation; measurement faults flip
/// the sampled bit. Outcome distributions are cached per fault configuration,
/// so a sampler is not thread-safe; use one per worker.
class ShotSampler {
   public:
    ShotSampler(Circuit circuit, NoiseModel noise, ReadoutRule rule)
        : circuit_(std::move(circuit)), noise_(noise), rule_(std::move(rule)) {
        noise_.validate();
        circuit_.validate();
        if (circuit_.width() > kMaxSimulatedQubits) {
            throw std::invalid_argument("circuit too wide for shot simulation");
        }
        for (const auto& g : circuit_.gates()) {
            std::vector<std::size_t> qs(g.qubits.begin(), g.qubits.begin() + static_cast<long>(g.arity()));
            fault_tables_.push_back(all_paulis_on(circuit_.width(), qs));
        }
    }

    const Circuit& circuit() const { return circuit_; }
    const ReadoutRule& rule() const { return rule_; }

    /// One noisy shot.
    ShotOutcome sample_shot(Rng& rng) {
        std::vector<InjectedFault> faults;
        QubitMask flips = 0;
        if (!noise_.noiseless()) {
            for (std::size_t i = 0; i < circuit_.size(); ++i) {
                const Gate& g = circuit_[i];
                double p = noise_.rate_for(g);
                if (p <= 0 || uniform01(rng) >= p) {
                    continue;
                }
                std::size_t q = g.qubits[0];
                if (g.is_measurement()) {
                    flips |= QubitMask{1} << q;
                } else if (g.kind == GateKind::PrepZ) {
                    faults.push_back({i, PauliOperator::single(circuit_.width(), q, 'X'), false});
                } else if (g.kind == GateKind::PrepX) {
                    faults.push_back({i, PauliOperator::single(circuit_.width(), q, 'Z'), false});
                } else {
                    const auto& table = fault_tables_[i];
                    faults.push_back({i, table[uniform_below(rng, table.size())], false});
                }
            }
        }
        return evaluate(faults, flips, rng);
    }

    /// Samples the readout of the circuit with the given faults applied.
    ShotOutcome evaluate(const std::vector<InjectedFault>& faults, QubitMask measurement_flips, Rng& rng) {
        const Cdf& cdf = cdf_for(faults);
        double u = uniform01(rng) * cdf.cumulative.back();
        auto it = std::upper_bound(cdf.cumulative.begin(), cdf.cumulative.end(), u);
        std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.cumulative.begin()),
                                                cdf.outcomes.size() - 1);
        ShotOutcome s;
        s.raw = (cdf.outcomes[idx] ^ measurement_flips) & circuit_.measured_qubits();
        if (!rule_.flags_ok(s.raw)) {
            s.reason = RejectReason::Flag;
        } else if (!rule_.checks_ok(s.raw)) {
            s.reason = RejectReason::Parity;
        } else {
            s.accepted = true;
            s.logical = rule_.decode(s.raw);
        }
        return s;
    }

   private:
    struct Cdf {
        std::vector<double> cumulative;
        std::vector<QubitMask> outcomes;
    };

    static constexpr std::size_t kMaxCacheEntries = 8192;

    const Cdf& cdf_for(const std::vector<InjectedFault>& faults) {
        std::vector<std::uint64_t> key;
        key.reserve(faults.size());
        for (const auto& f : faults) {
            key.push_back((std::uint64_t{f.location} << 40) | (std::uint64_t{f.pauli.x_mask()} << 20) |
                          f.pauli.z_mask());
        }
        if (auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
        if (cache_.size() >= kMaxCacheEntries) {
            cache_.clear();
        }
        auto probs = outcome_probabilities(circuit_, simulate(circuit_, faults));
        Cdf cdf;
        double acc = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 1e-15) {
                acc += probs[i];
                cdf.cumulative.push_back(acc);
                cdf.outcomes.push_back(static_cast<QubitMask>(i));
            }
        }
        return cache_.emplace(std::move(key), std::move(cdf)).first->second;
    }

    Circuit circuit_;
    NoiseModel noise_;
    ReadoutRule rule_;
    std::vector<std::vector<PauliOperator>> fault_tables_;
    std::map<std::vector<std::uint64_t>, Cdf> cache_;
};

struct Interval {
    double low = 0;
    double high = 0;
};

/// Linear-interpolated quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of empty data");
    }
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Percentile (2.5%, 97.5%) bootstrap interval of `statistic` over multinomial
/// resamples of `counts`. Each resample is drawn by sequential binomial splitting.
template <class Statistic>
Interval bootstrap_interval(const std::map<std::string, std::size_t>& counts, Statistic statistic,
                            std::size_t resamples, Rng& rng) {
    if (resamples < 100) {
        throw std::invalid_argument("bootstrap needs at least 100 resamples");
    }
    std::size_t total = 0;
    for (const auto& [k, v] : counts) {
        total += v;
    }
    if (total == 0) {
        throw std::invalid_argument("bootstrap of an empty sample");
    }
    std::vector<double> stats;
    stats.reserve(resamples);
    std::map<std::string, std::size_t> resampled;
    for (std::size_t r = 0; r < resamples; ++r) {
        long remaining = static_cast<long>(total);
        std::size_t mass_left = total;
        resampled.clear();
        for (const auto& [k, v] : counts) {
            if (remaining == 0) {
                break;
            }
            long draw = remaining;
            if (v < mass_left) {
                std::binomial_distribution<long> bin(remaining, static_cast<double>(v) / static_cast<double>(mass_left));
                draw = bin(rng);
            }
            mass_left -= v;
            remaining -= draw;
            if (draw > 0) {
                resampled[k] = static_cast<std::size_t>(draw);
            }
        }
        stats.push_back(statistic(resampled));
    }
    std::sort(stats.begin(), stats.end());
    return Interval{quantile_sorted(stats, 0.025), quantile_sorted(stats, 0.975)};
}

/// 1 - p (n_m + n_g), clamped at 0.
inline double first_order_acceptance(const Circuit& c, double p, CczCountPolicy policy = CczCountPolicy::Native) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("rate must lie in [0, 1]");
    }
    auto n = count_locations(c, policy);
    return std::max(0.0, 1.0 - p * static_cast<double>(n.n_m + n.n_g));
}

struct ExperimentResult {
    ExperimentSpec spec;
    std::string spec_id;
    NoiseModel noise;
    std::uint64_t seed = 0;
    std::size_t shots = 0;
    std::size_t accepted = 0;
    std::size_t rejected_flag = 0;
    std::size_t rejected_parity = 0;
    double acceptance_rate = 0;
    std::map<std::string, std::size_t> counts;  // decoded logical bitstrings of accepted shots
    OutcomeDistribution distribution;
    std::optional<double> tvd;  // empty when no shot was accepted
    std::optional<Interval> ci;
    std::string error;          // non-empty when the cell failed to run

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["spec"] = spec_id;
        j["shots"] = shots;
        j["accepted"] = accepted;
        j["rejected_flag"] = rejected_flag;
        j["rejected_parity"] = rejected_parity;
        j["acceptance_rate"] = acceptance_rate;
        j["distribution"] = distribution.probabilities;
        j["tvd"] = tvd ? nlohmann::json(*tvd) : nlohmann::json();
        j["ci_low"] = ci ? nlohmann::json(ci->low) : nlohmann::json();
        j["ci_high"] = ci ? nlohmann::json(ci->high) : nlohmann::json();
        j["seed"] = seed;
        j["noise"] = {{"p1", noise.p1}, {"p2", noise.p2}, {"pm", noise.pm}, {"pp", noise.pp}};
        if (!error.empty()) {
            j["error"] = error;
        }
        return j;
    }
};

struct RunOptions {
    std::size_t workers = 1;
    std::size_t bootstrap_resamples = 0;  // 0 skips the interval
};

namespace detail {

struct ShotTally {
    std::size_t accepted = 0;
    std::size_t rejected_flag = 0;
    std::size_t rejected_parity = 0;
    std::map<QubitMask, std::size_t> logical;

    void merge(const ShotTally& o) {
        accepted += o.accepted;
        rejected_flag += o.rejected_flag;
        rejected_parity += o.rejected_parity;
        for (const auto& [k, v] : o.logical) {
            logical[k] += v;
        }
    }
};

inline ShotTally run_shots(ShotSampler& sampler, std::uint64_t seed, const std::string& id, std::size_t begin,
                           std::size_t end) {
    ShotTally t;
    for (std::size_t i = begin; i < end; ++i) {
        Rng rng(shot_seed(seed, id, i));
        ShotOutcome s = sampler.sample_shot(rng);
        if (s.accepted) {
            ++t.accepted;
            ++t.logical[s.logical];
        } else if (s.reason == RejectReason::Flag) {
            ++t.rejected_flag;
        } else {
            ++t.rejected_parity;
        }
    }
    return t;
}

}  // namespace detail

/// Runs `shots` independent shots of one cell. Shot i is seeded from
/// (seed, spec id, i) alone, so results do not depend on the worker count.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, const NoiseModel& noise, std::size_t shots,
                                       std::uint64_t seed, const RunOptions& options = {}) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    noise.validate();
    ExperimentResult r;
    r.spec = spec;
    r.spec_id = spec.id();
    r.noise = noise;
    r.seed = seed;
    r.shots = shots;

    Circuit circuit = experiment_circuit(spec);
    ReadoutRule rule = readout_rule(spec);
    std::size_t workers = std::clamp<std::size_t>(options.workers, 1, shots);

    detail::ShotTally tally;
    if (workers == 1) {
        ShotSampler sampler(circuit, noise, rule);
        tally = detail::run_shots(sampler, seed, r.spec_id, 0, shots);
    } else {
        std::vector<detail::ShotTally> parts(workers);
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t begin = shots * w / workers;
            std::size_t end = shots * (w + 1) / workers;
            threads.emplace_back([&, w, begin, end] {
                ShotSampler sampler(circuit, noise, rule);
                parts[w] = detail::run_shots(sampler, seed, r.spec_id, begin, end);
            });
        }
        for (auto& t : threads) {
            t.join();
        }
        for (const auto& p : parts) {
            tally.merge(p);
        }
    }

    r.accepted = tally.accepted;
    r.rejected_flag = tally.rejected_flag;
    r.rejected_parity = tally.rejected_parity;
    r.acceptance_rate = static_cast<double>(r.accepted) / static_cast<double>(shots);
    const std::size_t k = rule.decoders.size();
    for (const auto& [bits, n] : tally.logical) {
        r.counts[bits_to_string(bits, (QubitMask{1} << k) - 1, k)] = n;
    }
    r.distribution = OutcomeDistribution::from_counts(spec.basis, k, r.counts);
    if (r.accepted > 0) {
        OutcomeDistribution ideal = ideal_distribution(spec);
        r.tvd = tvd(r.distribution, ideal);
        if (options.bootstrap_resamples > 0) {
            Rng rng(shot_seed(seed, r.spec_id + "#bootstrap", 0));
            auto stat = [&](const std::map<std::string, std::size_t>& c) {
                return tvd(OutcomeDistribution::from_counts(spec.basis, k, c), ideal);
            };
            r.ci = bootstrap_interval(r.counts, stat, options.bootstrap_resamples, rng);
        }
    }
    return r;
}

}  // namespace qec832
