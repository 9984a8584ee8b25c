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

// Command-line front end: verify, ideal, simulate, sweep, report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qec832/qec832.hpp"

namespace {

using namespace qec832;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitInvalidConfig = 2;

struct CommonFlags {
    std::string config;
    std::string states, gates, bases, encodings, seed, shots, p1, p2, pm, pp, ccz_mode, out, workers, bootstrap;
    std::vector<std::pair<const char*, CLI::Option*>> set;

    void attach(CLI::App& app) {
        app.add_option("--config", config, "key = value config file");
        set = {
            {"states", app.add_option("--states", states, "comma-separated target states")},
            {"gates", app.add_option("--gates", gates, "comma-separated gate subsets, or all")},
            {"bases", app.add_option("--bases", bases, "comma-separated readout bases")},
            {"encodings", app.add_option("--encodings", encodings, "comma-separated encodings")},
            {"seed", app.add_option("--seed", seed, "master seed")},
            {"shots", app.add_option("--shots", shots, "shots per cell")},
            {"p1", app.add_option("--p1", p1, "single-qubit gate error rate")},
            {"p2", app.add_option("--p2", p2, "two-qubit gate error rate")},
            {"pm", app.add_option("--pm", pm, "measurement flip rate")},
            {"pp", app.add_option("--pp", pp, "preparation flip rate")},
            {"ccz_mode", app.add_option("--ccz-mode", ccz_mode, "native|compiled")},
            {"out", app.add_option("--out", out, "output directory")},
            {"workers", app.add_option("--workers", workers, "parallel workers")},
            {"bootstrap", app.add_option("--bootstrap", bootstrap, "bootstrap resamples, 0 to skip")},
        };
    }

    const std::string& value_of(const std::string& key) const {
        static const std::map<std::string, std::string CommonFlags::*> fields = {
            {"seed", &CommonFlags::seed}, {"shots", &CommonFlags::shots},       {"p1", &CommonFlags::p1},
            {"p2", &CommonFlags::p2},     {"pm", &CommonFlags::pm},             {"pp", &CommonFlags::pp},
            {"out", &CommonFlags::out},   {"ccz_mode", &CommonFlags::ccz_mode}, {"workers", &CommonFlags::workers},
            {"bootstrap", &CommonFlags::bootstrap}, {"states", &CommonFlags::states},
            {"gates", &CommonFlags::gates},         {"bases", &CommonFlags::bases},
            {"encodings", &CommonFlags::encodings},
        };
        return this->*fields.at(key);
    }

    bool given(const std::string& key) const {
        for (const auto& [k, opt] : set) {
            if (k == key) {
                return opt->count() > 0;
            }
        }
        return false;
    }

    MatrixConfig build() const {
        MatrixConfig cfg;
        if (!config.empty()) {
            cfg = load_config(config);
        }
        for (const auto& [key, opt] : set) {
            if (opt->count() > 0) {
                cfg.set(key, value_of(key));
            }
        }
        cfg.validate();
        return cfg;
    }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
}

int cmd_verify(const std::string& circuit_path, const std::string& state, const std::string& basis, bool witness,
               const std::string& out_dir) {
    std::vector<FtReport> reports;
    if (circuit_path.empty()) {
        reports = reference_reports();
    } else {
        std::ifstream in(circuit_path);
        if (!in) {
            throw ConfigError("cannot read circuit file " + circuit_path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        Circuit prep = Circuit::from_text(buf.str());
        CssCode code = code_832();
        TargetState st = parse_target_state(state);
        QubitMask flags = prep.qubits_with_role(QubitRole::Flag);
        std::vector<Basis> bases;
        if (basis.empty()) {
            bases = {Basis::X, Basis::Z};
        } else {
            bases = {parse_basis(basis)};
        }
        for (auto b : bases) {
            FtCase fc{circuit_path + "@" + to_string(b), prep, target_state_group(code, st),
                      encoded_readout_rule(code, b, flags), {}};
            reports.push_back(verify_fault_tolerance(fc));
        }
    }
    bool ok = true;
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : reports) {
        std::cout << r.summary() << '\n';
        for (const auto* f : r.failures()) {
            std::cout << "  AcceptedLogical at location " << f->location << ": fault " << f->injected.sparse_str();
            if (f->survivor) {
                std::cout << " -> " << f->survivor->sparse_str();
            }
            if (f->logical) {
                std::cout << " = " << logical_label(*f->logical);
            }
            std::cout << '\n';
        }
        ok = ok && r.passed();
        all.push_back(r.to_json());
    }
    std::string witness_text;
    if (witness) {
        witness_text = witness_report();
        std::cout << witness_text;
    }
    if (!out_dir.empty()) {
        write_text(std::filesystem::path(out_dir) / "ft_reports.json", all.dump(2) + "\n");
        if (witness) {
            write_text(std::filesystem::path(out_dir) / "witness.txt", witness_text);
        }
    }
    return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_ideal(const std::string& spec_text, const std::string& out_dir) {
    std::vector<ExperimentSpec> specs;
    if (!spec_text.empty()) {
        specs.push_back(ExperimentSpec::parse(spec_text));
    } else {
        for (auto st : {TargetState::GHZ, TargetState::Plus3}) {
            for (auto g : GateSubset::all()) {
                for (auto b : {Basis::X, Basis::Z}) {
                    specs.push_back(ExperimentSpec{st, g, b, Encoding::Encoded, CczMode::Native});
                }
            }
        }
    }
    std::ostringstream csv;
    csv << "spec,bitstring,probability\n";
    for (const auto& s : specs) {
        for (const auto& [bits, p] : ideal_distribution(s).probabilities) {
            csv << s.id() << ',' << bits << ',' << format_double(p) << '\n';
        }
    }
    std::cout << csv.str();
    if (!out_dir.empty()) {
        write_text(std::filesystem::path(out_dir) / "ideal.csv", csv.str());
    }
    return kExitOk;
}

int cmd_simulate(const std::string& spec_text, const CommonFlags& flags) {
    MatrixConfig cfg = flags.build();
    ExperimentSpec spec = ExperimentSpec::parse(spec_text);
    if (spec_text.find(':') == std::string::npos) {
        spec.ccz_mode = cfg.ccz_mode;
    }
    ExperimentResult r =
        run_experiment(spec, cfg.noise, cfg.shots, cfg.seed, RunOptions{cfg.workers, cfg.bootstrap_resamples});
    nlohmann::json j = r.to_json();
    j["counts"] = r.counts;
    j["first_order_acceptance"] = first_order_acceptance(experiment_circuit(spec), std::max(cfg.noise.p2, cfg.noise.pm));
    std::cout << j.dump(2) << '\n';
    if (flags.given("out")) {
        write_text(std::filesystem::path(cfg.out_dir) / "result.json", j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_sweep(const CommonFlags& flags) {
    MatrixConfig cfg = flags.build();
    auto results = run_matrix(cfg);
    emit_report(results, cfg.out_dir);
    write_text(std::filesystem::path(cfg.out_dir) / "config.txt", cfg.to_text());
    std::size_t failed = 0;
    for (const auto& r : results) {
        if (!r.error.empty()) {
            ++failed;
            std::cerr << r.spec_id << ": " << r.error << '\n';
        }
    }
    std::cout << "ran " << results.size() << " cells (" << failed << " failed), wrote " << cfg.out_dir << '\n';
    return kExitOk;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir) {
    auto results = load_results(in_dir);
    emit_report(results, out_dir.empty() ? in_dir : out_dir);
    std::cout << acceptance_csv(results);
    for (const auto& r : reference_reports()) {
        std::cout << r.summary() << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qec832: fault-tolerance verification and noisy simulation for the [[8,3,2]] color code"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "exhaustive single-fault verification of the preparation circuits");
    std::string circuit_path, state = "PLUS3", basis, verify_out;
    bool witness = false;
    verify->add_option("--circuit", circuit_path, "verify a circuit file instead of the reference circuits");
    verify->add_option("--state", state, "target state for --circuit (GHZ or PLUS3)");
    verify->add_option("--basis", basis, "readout basis for --circuit (default both)");
    verify->add_flag("--witness", witness, "print propagated error lists and the flag ablation");
    verify->add_option("--out", verify_out, "write ft_reports.json here");

    auto* ideal = app.add_subcommand("ideal", "exact logical output distributions");
    std::string ideal_spec, ideal_out;
    ideal->add_option("--spec", ideal_spec, "one spec such as PLUS3+CCZ@X/encoded (default all)");
    ideal->add_option("--out", ideal_out, "write ideal.csv here");

    auto* simulate = app.add_subcommand("simulate", "noisy Monte Carlo of one spec");
    std::string sim_spec;
    CommonFlags sim_flags;
    simulate->add_option("spec", sim_spec, "spec such as GHZ+CZ12.CCZ@X/encoded")->required();
    sim_flags.attach(*simulate);

    auto* sweep = app.add_subcommand("sweep", "run the experiment matrix and write reports");
    CommonFlags sweep_flags;
    sweep_flags.attach(*sweep);

    auto* report = app.add_subcommand("report", "rebuild tables from a sweep's results.json");
    std::string report_in, report_out;
    report->add_option("--in", report_in, "directory holding results.json")->required();
    report->add_option("--out", report_out, "output directory (default --in)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    }

    try {
        if (*verify) {
            return cmd_verify(circuit_path, state, basis, witness, verify_out);
        }
        if (*ideal) {
            return cmd_ideal(ideal_spec, ideal_out);
        }
        if (*simulate) {
            return cmd_simulate(sim_spec, sim_flags);
        }
        if (*sweep) {
            return cmd_sweep(sweep_flags);
        }
        if (*report) {
            return cmd_report(report_in, report_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
    return kExitOk;
}
