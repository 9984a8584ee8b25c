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

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qec832/noise.hpp"
#include "qec832/reference_circuits.hpp"
#include "qec832/verifier.hpp"

namespace qec832 {

/// Raised for malformed configuration text or values.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto comma = s.find(',', pos);
        std::string item = trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (!item.empty()) {
            out.push_back(std::move(item));
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace detail

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// One sweep over the experiment matrix.
struct MatrixConfig {
    std::vector<TargetState> states{TargetState::GHZ, TargetState::Plus3};
    std::vector<GateSubset> subsets = GateSubset::all();
    std::vector<Basis> bases{Basis::X, Basis::Z};
    std::vector<Encoding> encodings{Encoding::Bare, Encoding::Encoded};
    NoiseModel noise;
    std::size_t shots = 1024;
    std::uint64_t seed = 1;
    CczMode ccz_mode = CczMode::Native;
    std::string out_dir = "out";
    std::size_t workers = 1;
    std::size_t bootstrap_resamples = 1000;

    std::size_t cell_count() const { return states.size() * subsets.size() * bases.size() * encodings.size(); }

    /// Cells in state, subset, basis, encoding order.
    std::vector<ExperimentSpec> cells() const {
        std::vector<ExperimentSpec> out;
        out.reserve(cell_count());
        for (auto st : states) {
            for (auto g : subsets) {
                for (auto b : bases) {
                    for (auto e : encodings) {
                        out.push_back(ExperimentSpec{st, g, b, e, ccz_mode});
                    }
                }
            }
        }
        return out;
    }

    void validate() const {
        if (states.empty() || subsets.empty() || bases.empty() || encodings.empty()) {
            throw ConfigError("every matrix axis needs at least one value");
        }
        if (shots == 0) {
            throw ConfigError("shots must be at least 1");
        }
        if (workers == 0) {
            throw ConfigError("workers must be at least 1");
        }
        if (bootstrap_resamples != 0 && bootstrap_resamples < 100) {
            throw ConfigError("bootstrap needs 0 (off) or at least 100 resamples");
        }
        try {
            noise.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    /// Sets one option from its textual form. List values are comma-separated.
    void set(std::string_view key, std::string_view value) {
        using detail::parse_number;
        using detail::split_list;
        try {
            if (key == "states") {
                states.clear();
                for (const auto& s : split_list(value)) {
                    states.push_back(parse_target_state(s));
                }
            } else if (key == "gates" || key == "subsets") {
                subsets.clear();
                for (const auto& s : split_list(value)) {
                    if (s == "all") {
                        auto all = GateSubset::all();
                        subsets.insert(subsets.end(), all.begin(), all.end());
                    } else {
                        subsets.push_back(GateSubset::parse(s));
                    }
                }
            } else if (key == "bases") {
                bases.clear();
                for (const auto& s : split_list(value)) {
                    bases.push_back(parse_basis(s));
                }
            } else if (key == "encodings") {
                encodings.clear();
                for (const auto& s : split_list(value)) {
                    encodings.push_back(parse_encoding(s));
                }
            } else if (key == "p1") {
                noise.p1 = parse_number<double>(key, value);
            } else if (key == "p2") {
                noise.p2 = parse_number<double>(key, value);
            } else if (key == "pm") {
                noise.pm = parse_number<double>(key, value);
            } else if (key == "pp") {
                noise.pp = parse_number<double>(key, value);
            } else if (key == "shots") {
                shots = parse_number<std::size_t>(key, value);
            } else if (key == "seed") {
                seed = parse_number<std::uint64_t>(key, value);
            } else if (key == "ccz_mode" || key == "ccz-mode") {
                ccz_mode = parse_ccz_mode(value);
            } else if (key == "out") {
                out_dir = std::string(value);
            } else if (key == "workers") {
                workers = parse_number<std::size_t>(key, value);
            } else if (key == "bootstrap") {
                bootstrap_resamples = parse_number<std::size_t>(key, value);
            } else {
                throw ConfigError("unknown config key '" + std::string(key) + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(key) + ": " + e.what());
        }
    }

    /// Applies `key = value` lines on top of the current values.
    void merge_text(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.resize(hash);
            }
            std::string t = detail::trim(line);
            if (t.empty()) {
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            }
            try {
                set(detail::trim(std::string_view(t).substr(0, eq)), detail::trim(std::string_view(t).substr(eq + 1)));
            } catch (const ConfigError& e) {
                throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
            }
        }
    }

    static MatrixConfig parse(std::string_view text) {
        MatrixConfig c;
        c.merge_text(text);
        return c;
    }

    std::string to_text() const {
        auto join = [](const auto& items, auto fmt) {
            std::string s;
            for (const auto& i : items) {
                if (!s.empty()) {
                    s += ",";
                }
                s += fmt(i);
            }
            return s;
        };
        std::ostringstream out;
        out << "states = " << join(states, [](TargetState s) { return std::string(to_string(s)); }) << '\n';
        out << "gates = " << join(subsets, [](GateSubset g) { return g.name(); }) << '\n';
        out << "bases = " << join(bases, [](Basis b) { return std::string(to_string(b)); }) << '\n';
        out << "encodings = " << join(encodings, [](Encoding e) { return std::string(to_string(e)); }) << '\n';
        out << "p1 = " << format_double(noise.p1) << '\n';
        out << "p2 = " << format_double(noise.p2) << '\n';
        out << "pm = " << format_double(noise.pm) << '\n';
        out << "pp = " << format_double(noise.pp) << '\n';
        out << "shots = " << shots << '\n';
        out << "seed = " << seed << '\n';
        out << "ccz_mode = " << to_string(ccz_mode) << '\n';
        out << "bootstrap = " << bootstrap_resamples << '\n';
        return out.str();
    }
};

inline MatrixConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return MatrixConfig::parse(buf.str());
}

/// Runs every cell, up to `cfg.workers` at a time. A failing cell records its
/// error and the sweep continues. Results come back in cell order.
inline std::vector<ExperimentResult> run_matrix(const MatrixConfig& cfg) {
    cfg.validate();
    auto cells = cfg.cells();
    std::vector<ExperimentResult> results(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                results[i] = run_experiment(cells[i], cfg.noise, cfg.shots, cfg.seed,
                                            RunOptions{1, cfg.bootstrap_resamples});
            } catch (const std::exception& e) {
                results[i].spec = cells[i];
                results[i].spec_id = cells[i].id();
                results[i].noise = cfg.noise;
                results[i].seed = cfg.seed;
                results[i].shots = cfg.shots;
                results[i].error = e.what();
            }
        }
    };
    std::size_t workers = std::min(cfg.workers, cells.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return results;
}

inline nlohmann::json results_to_json(const std::vector<ExperimentResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json j = r.to_json();
        j["counts"] = r.counts;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::vector<ExperimentResult> results_from_json(const nlohmann::json& arr) {
    std::vector<ExperimentResult> out;
    for (const auto& j : arr) {
        ExperimentResult r;
        r.spec_id = j.at("spec").get<std::string>();
        r.spec = ExperimentSpec::parse(r.spec_id);
        r.shots = j.at("shots").get<std::size_t>();
        r.accepted = j.at("accepted").get<std::size_t>();
        r.rejected_flag = j.value("rejected_flag", std::size_t{0});
        r.rejected_parity = j.value("rejected_parity", std::size_t{0});
        r.acceptance_rate = j.at("acceptance_rate").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("noise")) {
            const auto& n = j["noise"];
            r.noise = NoiseModel{n.value("p1", 0.0), n.value("p2", 0.0), n.value("pm", 0.0), n.value("pp", 0.0)};
        }
        if (j.contains("counts")) {
            r.counts = j["counts"].get<std::map<std::string, std::size_t>>();
        }
        r.distribution = OutcomeDistribution::from_counts(r.spec.basis, 3, r.counts);
        if (j.contains("distribution") && r.counts.empty()) {
            r.distribution.probabilities = j["distribution"].get<std::map<std::string, double>>();
        }
        if (!j.at("tvd").is_null()) {
            r.tvd = j["tvd"].get<double>();
        }
        if (!j.at("ci_low").is_null() && !j.at("ci_high").is_null()) {
            r.ci = Interval{j["ci_low"].get<double>(), j["ci_high"].get<double>()};
        }
        r.error = j.value("error", std::string{});
        out.push_back(std::move(r));
    }
    return out;
}

namespace detail {

inline std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write to " + path.string() + " failed");
    }
}

}  // namespace detail

/// Interval midpoint, falling back to the point estimate without an interval.
inline std::optional<double> tvd_midpoint(const ExperimentResult& r) {
    if (r.ci) {
        return 0.5 * (r.ci->low + r.ci->high);
    }
    return r.tvd;
}

inline std::string cells_csv(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    out << "spec,state,gate,basis,encoding,ccz_mode,shots,accepted,rejected_flag,rejected_parity,acceptance_rate,"
           "tvd,ci_low,ci_high,seed,error\n";
    for (const auto& r : results) {
        out << r.spec_id << ',' << to_string(r.spec.state) << ',' << r.spec.gates.name("") << ','
            << to_string(r.spec.basis) << ',' << to_string(r.spec.encoding) << ',' << to_string(r.spec.ccz_mode)
            << ',' << r.shots << ',' << r.accepted << ',' << r.rejected_flag << ',' << r.rejected_parity << ','
            << format_double(r.acceptance_rate) << ',' << detail::opt(r.tvd) << ','
            << detail::opt(r.ci ? std::optional<double>(r.ci->low) : std::nullopt) << ','
            << detail::opt(r.ci ? std::optional<double>(r.ci->high) : std::nullopt) << ',' << r.seed << ','
            << (r.error.empty() ? "" : "\"" + r.error + "\"") << '\n';
    }
    return out.str();
}

/// Encoded-cell acceptance rates grouped by state with an average row per group.
inline std::string acceptance_csv(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    out << "state,gate,basis,acceptance\n";
    for (auto st : {TargetState::Plus3, TargetState::GHZ}) {
        double sum = 0;
        std::size_t n = 0;
        for (auto b : {Basis::X, Basis::Z}) {
            for (const auto& r : results) {
                if (r.spec.state != st || r.spec.basis != b || r.spec.encoding != Encoding::Encoded ||
                    !r.error.empty()) {
                    continue;
                }
                out << to_string(st) << ',' << r.spec.gates.name("") << ',' << to_string(b) << ','
                    << format_double(r.acceptance_rate) << '\n';
                sum += r.acceptance_rate;
                ++n;
            }
        }
        if (n > 0) {
            out << to_string(st) << ",average,," << format_double(sum / static_cast<double>(n)) << '\n';
        }
    }
    return out.str();
}

/// Encoded against bare tvd per state, basis and gate subset.
inline std::string comparison_csv(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    out << "state,basis,gate,bare_tvd,bare_ci_low,bare_ci_high,bare_mid,encoded_tvd,encoded_ci_low,encoded_ci_high,"
           "encoded_mid,better\n";
    for (const auto& enc : results) {
        if (enc.spec.encoding != Encoding::Encoded) {
            continue;
        }
        for (const auto& bare : results) {
            if (bare.spec.encoding != Encoding::Bare || bare.spec.state != enc.spec.state ||
                bare.spec.basis != enc.spec.basis || bare.spec.gates != enc.spec.gates) {
                continue;
            }
            auto bm = tvd_midpoint(bare);
            auto em = tvd_midpoint(enc);
            std::string better;
            if (bm && em) {
                better = *em < *bm ? "encoded" : (*bm < *em ? "bare" : "tie");
            }
            auto lo = [](const ExperimentResult& r) { return r.ci ? std::optional<double>(r.ci->low) : std::nullopt; };
            auto hi = [](const ExperimentResult& r) { return r.ci ? std::optional<double>(r.ci->high) : std::nullopt; };
            out << to_string(enc.spec.state) << ',' << to_string(enc.spec.basis) << ',' << enc.spec.gates.name("")
                << ',' << detail::opt(bare.tvd) << ',' << detail::opt(lo(bare)) << ',' << detail::opt(hi(bare)) << ','
                << detail::opt(bm) << ',' << detail::opt(enc.tvd) << ',' << detail::opt(lo(enc)) << ','
                << detail::opt(hi(enc)) << ',' << detail::opt(em) << ',' << better << '\n';
        }
    }
    return out.str();
}

/// Verification of both reference preparations in both bases.
inline std::vector<FtReport> reference_reports() {
    std::vector<FtReport> out;
    for (auto st : {TargetState::GHZ, TargetState::Plus3}) {
        for (auto b : {Basis::X, Basis::Z}) {
            out.push_back(verify_fault_tolerance(reference_case(st, b)));
        }
    }
    return out;
}

/// Writes cells.csv, results.json, acceptance.csv, comparison.csv,
/// ft_summary.txt, ft_reports.json and witness.txt into `dir`.
inline void emit_report(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir) {
    if (results.empty()) {
        throw std::invalid_argument("no results to report");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    detail::write_file(dir / "cells.csv", cells_csv(results));
    detail::write_file(dir / "results.json", results_to_json(results).dump(2) + "\n");
    detail::write_file(dir / "acceptance.csv", acceptance_csv(results));
    detail::write_file(dir / "comparison.csv", comparison_csv(results));

    auto reports = reference_reports();
    std::string summary;
    nlohmann::json ft = nlohmann::json::array();
    for (const auto& r : reports) {
        summary += r.summary() + "\n";
        ft.push_back(r.to_json());
    }
    detail::write_file(dir / "ft_summary.txt", summary);
    detail::write_file(dir / "ft_reports.json", ft.dump(2) + "\n");
    detail::write_file(dir / "witness.txt", witness_report());
}

inline std::vector<ExperimentResult> load_results(const std::filesystem::path& dir) {
    std::ifstream in(dir / "results.json");
    if (!in) {
        throw std::runtime_error("cannot read " + (dir / "results.json").string());
    }
    try {
        return results_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error((dir / "results.json").string() + ": " + e.what());
    }
}

}  // namespace qec832
