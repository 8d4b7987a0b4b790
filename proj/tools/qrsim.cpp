// Copyright 2026 The qrsim Authors
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

// qrsim: qudit repeater-chain simulator.
//
//   qrsim run       [--config f] [--d D] [--n N] [--mode local|deferred] ...
//   qrsim enumerate [same flags]
//   qrsim selftest
//
// Exit codes: 0 success, 1 validation or I/O error, 2 resource limit,
// 3 self-test failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrsim/sim/config.hpp"
#include "qrsim/sim/report.hpp"
#include "qrsim/sim/selftest.hpp"

namespace {

using qrsim::sim::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitResource = 2;
constexpr int kExitSelftest = 3;

struct Flags {
    std::optional<std::string> config;
    std::optional<int> d;
    std::optional<int> n;
    std::optional<std::string> mode;
    std::optional<std::string> noise;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> state;
    std::optional<std::uint64_t> max_paths;
    std::optional<std::string> out;
    std::optional<std::string> history;
    bool track_entanglement = false;
};

void add_experiment_flags(CLI::App *cmd, Flags &f) {
    cmd->add_option("--config", f.config, "JSON configuration file");
    cmd->add_option("--d", f.d, "Qudit dimension (2-16)");
    cmd->add_option("--n", f.n, "Number of repeaters");
    cmd->add_option("--mode", f.mode, "Correction strategy: local or deferred");
    cmd->add_option("--noise", f.noise, "Dephasing probabilities p0,p1,...,p(d-1)");
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials");
    cmd->add_option("--state", f.state, "basis:<j> | uniform | random | re,im,re,im,...");
    cmd->add_option("--max-paths", f.max_paths, "Enumeration budget");
    cmd->add_option("--out", f.out, "Write the report here instead of stdout");
    cmd->add_option("--history", f.history, "Write trial 0's transmission history as CSV");
    cmd->add_flag("--track-entanglement", f.track_entanglement, "Report Bob's pre-measurement entropy per hop");
}

/// Command-line flags override the configuration file key by key.
qrsim::sim::ExperimentConfig resolve(const Flags &f) {
    json doc = f.config ? qrsim::sim::load_config_file(*f.config) : json::object();
    if (!doc.is_object()) throw qrsim::ValidationError("configuration must be a JSON object", "config");
    if (f.d) doc["d"] = *f.d;
    if (f.n) doc["n"] = *f.n;
    if (f.mode) doc["mode"] = *f.mode;
    if (f.noise) doc["noise"] = {{"probs", qrsim::sim::detail::parse_real_list(*f.noise, "noise.probs")}};
    if (f.seed) doc["seed"] = *f.seed;
    if (f.trials) doc["trials"] = *f.trials;
    if (f.state) doc["state"] = *f.state;
    if (f.max_paths) doc["max_paths"] = *f.max_paths;
    if (f.out) doc["out"] = *f.out;
    if (f.history) doc["history"] = *f.history;
    if (f.track_entanglement) doc["track_entanglement"] = true;
    return qrsim::sim::parse_config(doc);
}

void emit(const std::string &text, const std::optional<std::string> &path) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out || !(out << text)) throw std::ios_base::failure("cannot write '" + *path + "'");
}

int do_run(const Flags &flags) {
    const auto cfg = resolve(flags);
    const auto report = qrsim::sim::cmd_run(cfg);
    if (cfg.history_path) {
        std::ofstream csv(*cfg.history_path, std::ios::binary);
        if (!csv) throw std::ios_base::failure("cannot write '" + *cfg.history_path + "'");
        qrsim::sim::write_history_csv(csv, report.trials.front().result.history);
    }
    emit(qrsim::sim::render(qrsim::sim::to_json(report)), cfg.out_path);
    return kExitOk;
}

int do_enumerate(const Flags &flags) {
    const auto cfg = resolve(flags);
    emit(qrsim::sim::render(qrsim::sim::to_json(qrsim::sim::cmd_enumerate(cfg))), cfg.out_path);
    return kExitOk;
}

int do_selftest(bool corrupt_hadamard) {
    qrsim::sim::SelftestOptions options;
    options.corrupt_hadamard_normalization = corrupt_hadamard;
    const auto results = qrsim::sim::run_selftest(options);
    const bool ok = qrsim::sim::print_selftest(std::cout, results);
    if (!ok) {
        std::cerr << "failed checks:";
        for (const auto &r : results) {
            if (!r.passed) std::cerr << ' ' << r.name;
        }
        std::cerr << '\n';
    }
    return ok ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Qudit teleportation repeater-chain simulator"};
    app.require_subcommand(1);

    Flags run_flags;
    Flags enum_flags;
    bool corrupt_hadamard = false;
    auto *run = app.add_subcommand("run", "Monte Carlo chain runs");
    add_experiment_flags(run, run_flags);
    auto *enumerate = app.add_subcommand("enumerate", "Exact enumeration of all measurement branches");
    add_experiment_flags(enumerate, enum_flags);
    auto *selftest = app.add_subcommand("selftest", "Run the built-in verification suite");
    selftest->add_flag("--corrupt-hadamard", corrupt_hadamard, "Negative control: unnormalized Fourier gate")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*run) return do_run(run_flags);
        if (*enumerate) return do_enumerate(enum_flags);
        return do_selftest(corrupt_hadamard);
    } catch (const qrsim::ResourceError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
