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

/// Monte Carlo and exhaustive experiment drivers and their JSON reports.
///
/// Run report:
///
///     {"kind": "run", "config": {...},
///      "trials": [{"trial", "seed", "R", "b", "noise", "deferred_exponent",
///                  "fidelity", "final": [[re, im], ...]}, ...],
///      "aggregate": {"trials", "hops", "mean_fidelity", "min_fidelity",
///                    "max_fidelity", "outcome_histogram": [count per r]},
///      "history": {"path": <string|null>, "trial": 0}}
///
/// Enumeration report:
///
///     {"kind": "enumerate", "config": {...},
///      "paths": [{"R", "noise", "probability", "fidelity"}, ...],
///      "aggregate": {"paths", "probability_sum", "expected_fidelity",
///                    "min_fidelity"}}

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qrsim/repeater_chain.hpp"
#include "qrsim/sim/config.hpp"

namespace qrsim::sim {

struct TrialRecord {
    int trial;
    std::uint64_t seed;
    ChainResult result;
};

struct RunAggregate {
    double mean_fidelity = 0.0;
    double min_fidelity = 1.0;
    double max_fidelity = 0.0;
    std::vector<std::uint64_t> outcome_histogram;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<TrialRecord> trials;
    RunAggregate aggregate;
};

struct EnumerationReport {
    ExperimentConfig config;
    std::vector<BranchPath> paths;
    double probability_sum = 0.0;
    double expected_fidelity = 0.0;
    double min_fidelity = 1.0;
};

inline json amplitudes_to_json(const PureState &s) {
    json out = json::array();
    for (const auto &a : s.amplitudes()) out.push_back({a.real(), a.imag()});
    return out;
}

/// Runs `cfg.trials` independent chains. Trial i uses seed
/// trial_seed(cfg.chain.seed, i); records are kept in trial order whatever
/// order the workers finish in.
inline RunReport cmd_run(const ExperimentConfig &cfg, unsigned workers = 0) {
    cfg.chain.validate();
    const PureState psi0 = make_initial_state(cfg);
    const auto trials = static_cast<std::size_t>(cfg.trials);

    std::vector<std::optional<ChainResult>> results(trials);
    auto run_range = [&](std::size_t first, std::size_t step) {
        for (std::size_t i = first; i < trials; i += step) {
            ChainConfig chain = cfg.chain;
            chain.seed = trial_seed(cfg.chain.seed, i);
            results[i] = run_chain(chain, psi0);
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
    if (workers <= 1) {
        run_range(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_range, w, workers);
    }

    RunReport report{cfg, {}, {}};
    report.aggregate.outcome_histogram.assign(cfg.chain.d.size(), 0);
    double total = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const ChainResult &r = *results[i];
        total += r.fidelity_vs_initial;
        report.aggregate.min_fidelity = std::min(report.aggregate.min_fidelity, r.fidelity_vs_initial);
        report.aggregate.max_fidelity = std::max(report.aggregate.max_fidelity, r.fidelity_vs_initial);
        for (int a : r.results) ++report.aggregate.outcome_histogram[static_cast<std::size_t>(a)];
        report.trials.push_back({static_cast<int>(i), trial_seed(cfg.chain.seed, i), std::move(*results[i])});
    }
    report.aggregate.mean_fidelity = total / static_cast<double>(trials);
    return report;
}

inline json to_json(const RunReport &report) {
    json trials = json::array();
    for (const auto &t : report.trials) {
        json rec{{"trial", t.trial},
                 {"seed", t.seed},
                 {"R", t.result.results},
                 {"b", t.result.ancilla_results},
                 {"noise", t.result.noise},
                 {"deferred_exponent", t.result.deferred_exponent ? json(*t.result.deferred_exponent) : json(nullptr)},
                 {"fidelity", t.result.fidelity_vs_initial},
                 {"final", amplitudes_to_json(t.result.final)}};
        if (report.config.chain.track_entanglement) rec["hop_entropy"] = t.result.hop_entropy;
        trials.push_back(std::move(rec));
    }
    const auto &agg = report.aggregate;
    return json{{"kind", "run"},
                {"config", to_json(report.config)},
                {"trials", std::move(trials)},
                {"aggregate",
                 {{"trials", report.trials.size()},
                  {"hops", report.trials.size() * static_cast<std::size_t>(report.config.chain.n)},
                  {"mean_fidelity", agg.mean_fidelity},
                  {"min_fidelity", agg.min_fidelity},
                  {"max_fidelity", agg.max_fidelity},
                  {"outcome_histogram", agg.outcome_histogram}}},
                {"history",
                 {{"path", report.config.history_path ? json(*report.config.history_path) : json(nullptr)},
                  {"trial", 0}}}};
}

/// CSV dump of one trial's transmission history: hop, r, amplitude index,
/// re, im. Hop 0 is the initial state.
inline void write_history_csv(std::ostream &out, const TransmissionHistory &history) {
    out << "hop,r,index,re,im\n";
    out.precision(17);
    for (std::size_t hop = 0; hop < history.entries.size(); ++hop) {
        const auto &e = history.entries[hop];
        for (std::size_t j = 0; j < e.snapshot.size(); ++j) {
            out << hop << ',' << e.r << ',' << j << ',' << e.snapshot[j].real() << ',' << e.snapshot[j].imag() << '\n';
        }
    }
}

inline EnumerationReport cmd_enumerate(const ExperimentConfig &cfg) {
    const PureState psi0 = make_initial_state(cfg);
    EnumerationReport report{cfg, enumerate_branches(cfg.chain, psi0, cfg.max_paths)};
    for (const auto &p : report.paths) {
        report.probability_sum += p.probability;
        report.expected_fidelity += p.probability * p.fidelity;
        report.min_fidelity = std::min(report.min_fidelity, p.fidelity);
    }
    return report;
}

inline json to_json(const EnumerationReport &report) {
    json paths = json::array();
    for (const auto &p : report.paths) {
        paths.push_back({{"R", p.outcomes}, {"noise", p.noise}, {"probability", p.probability}, {"fidelity", p.fidelity}});
    }
    return json{{"kind", "enumerate"},
                {"config", to_json(report.config)},
                {"paths", std::move(paths)},
                {"aggregate",
                 {{"paths", report.paths.size()},
                  {"probability_sum", report.probability_sum},
                  {"expected_fidelity", report.expected_fidelity},
                  {"min_fidelity", report.min_fidelity}}}};
}

/// Serialized form written to stdout or --out.
inline std::string render(const json &doc) { return doc.dump(2) + "\n"; }

}  // namespace qrsim::sim
