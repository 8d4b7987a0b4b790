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

/// Experiment configuration: JSON document plus command-line overrides.
///
///     {
///       "d": 3, "n": 3, "mode": "deferred",
///       "noise": {"probs": [1, 0, 0]},
///       "seed": 0, "trials": 1,
///       "state": "basis:1" | "uniform" | "random" | [[re, im], ...],
///       "max_paths": 4096,
///       "track_entanglement": false,
///       "out": "report.json", "history": "history.csv"
///     }
///
/// Every key is optional. Unknown keys are rejected.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrsim/core.hpp"
#include "qrsim/random.hpp"
#include "qrsim/repeater_chain.hpp"

namespace qrsim::sim {

using json = nlohmann::json;

inline constexpr std::uint64_t kDefaultMaxPaths = 4096;

struct InitialState {
    enum class Kind { Basis, Uniform, Random, Explicit };
    Kind kind = Kind::Basis;
    int basis = 0;
    std::vector<Amplitude> amps;
};

struct ExperimentConfig {
    ChainConfig chain;
    InitialState state;
    int trials = 1;
    std::uint64_t max_paths = kDefaultMaxPaths;
    std::optional<std::string> out_path;
    std::optional<std::string> history_path;
};

namespace detail {

template <typename T>
T get_field(const json &doc, const char *key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ValidationError(std::string("wrong type: ") + e.what(), key);
    }
}

inline std::vector<double> parse_real_list(const std::string &text, const char *field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw ValidationError("'" + item + "' is not a number", field);
        }
    }
    if (out.empty()) throw ValidationError("empty list", field);
    return out;
}

inline InitialState parse_state(const json &node) {
    InitialState st;
    if (node.is_string()) {
        const auto text = node.get<std::string>();
        if (text == "uniform") {
            st.kind = InitialState::Kind::Uniform;
        } else if (text == "random") {
            st.kind = InitialState::Kind::Random;
        } else if (text.rfind("basis:", 0) == 0) {
            st.kind = InitialState::Kind::Basis;
            const auto digits = text.substr(6);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
                throw ValidationError("expected basis:<j> with j a non-negative integer", "state");
            }
            st.basis = std::stoi(digits);
        } else {
            // Flattened "re,im,re,im,..." list, as given on the command line.
            const auto reals = parse_real_list(text, "state");
            if (reals.size() % 2 != 0) throw ValidationError("amplitude list needs (re, im) pairs", "state");
            st.kind = InitialState::Kind::Explicit;
            for (std::size_t i = 0; i < reals.size(); i += 2) st.amps.emplace_back(reals[i], reals[i + 1]);
        }
        return st;
    }
    if (node.is_array()) {
        st.kind = InitialState::Kind::Explicit;
        for (const auto &pair : node) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
                throw ValidationError("amplitudes must be [re, im] pairs", "state");
            }
            st.amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        return st;
    }
    throw ValidationError("expected a string or a list of [re, im] pairs", "state");
}

}  // namespace detail

/// Validates a configuration document and fills in defaults: d = 3, n = 3,
/// deferred correction, noiseless channel, seed 0, one trial, |0⟩ input.
inline ExperimentConfig parse_config(const json &doc) {
    if (!doc.is_object()) throw ValidationError("configuration must be a JSON object");
    static const char *const kKnown[] = {"d",         "n",       "mode", "noise",   "seed",
                                         "trials",    "state",   "max_paths", "out", "history",
                                         "track_entanglement"};
    for (const auto &[key, value] : doc.items()) {
        if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
            throw ValidationError("unknown key", key);
        }
    }

    ExperimentConfig cfg;
    int d = 3;
    if (doc.contains("d")) d = detail::get_field<int>(doc, "d");
    try {
        cfg.chain.d = Dim(d);
    } catch (const DomainError &e) {
        throw ValidationError(e.what(), "d");
    }
    if (doc.contains("n")) cfg.chain.n = detail::get_field<int>(doc, "n");
    if (cfg.chain.n < 1) throw ValidationError("repeater count must be >= 1", "n");

    if (doc.contains("mode")) {
        const auto mode = detail::get_field<std::string>(doc, "mode");
        if (mode == "local") {
            cfg.chain.mode = CorrectionMode::LocalEachHop;
        } else if (mode == "deferred") {
            cfg.chain.mode = CorrectionMode::DeferredFinal;
        } else {
            throw ValidationError("expected 'local' or 'deferred'", "mode");
        }
    }

    cfg.chain.noise = NoiseSpec::noiseless(cfg.chain.d);
    if (doc.contains("noise")) {
        const auto &noise = doc.at("noise");
        if (!noise.is_object() || !noise.contains("probs")) throw ValidationError("expected {\"probs\": [...]}", "noise");
        try {
            cfg.chain.noise.probs = noise.at("probs").get<std::vector<double>>();
        } catch (const json::exception &) {
            throw ValidationError("expected a list of numbers", "noise.probs");
        }
    }
    cfg.chain.noise.validate(cfg.chain.d);

    if (doc.contains("seed")) {
        const auto &seed = doc.at("seed");
        if (!seed.is_number_integer()) throw ValidationError("expected an integer", "seed");
        cfg.chain.seed = seed.is_number_unsigned() ? seed.get<std::uint64_t>()
                                                   : static_cast<std::uint64_t>(seed.get<std::int64_t>());
    }
    if (doc.contains("trials")) cfg.trials = detail::get_field<int>(doc, "trials");
    if (cfg.trials < 1) throw ValidationError("trials must be >= 1", "trials");
    if (doc.contains("max_paths")) cfg.max_paths = detail::get_field<std::uint64_t>(doc, "max_paths");
    if (doc.contains("track_entanglement")) cfg.chain.track_entanglement = detail::get_field<bool>(doc, "track_entanglement");
    if (doc.contains("out")) cfg.out_path = detail::get_field<std::string>(doc, "out");
    if (doc.contains("history")) cfg.history_path = detail::get_field<std::string>(doc, "history");

    if (doc.contains("state")) cfg.state = detail::parse_state(doc.at("state"));
    if (cfg.state.kind == InitialState::Kind::Basis && cfg.state.basis >= d) {
        throw ValidationError("basis index outside [0, d)", "state");
    }
    if (cfg.state.kind == InitialState::Kind::Explicit) {
        if (cfg.state.amps.size() != static_cast<std::size_t>(d)) {
            throw ValidationError("expected " + std::to_string(d) + " amplitudes", "state");
        }
        try {
            (void)make_state(cfg.chain.d, cfg.state.amps);
        } catch (const ValidationError &e) {
            throw ValidationError(e.what(), "state");
        }
    }
    return cfg;
}

inline json load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open configuration file '" + path + "'", "config");
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what(), "config");
    }
}

/// The transmitted state ψ_0. "random" draws a Haar state from a stream
/// derived from the master seed, so every trial sees the same ψ_0.
inline PureState make_initial_state(const ExperimentConfig &cfg) {
    const Dim d = cfg.chain.d;
    switch (cfg.state.kind) {
    case InitialState::Kind::Basis: return basis_state(d, 1, BasisIndex{{cfg.state.basis}});
    case InitialState::Kind::Uniform: {
        const double a = 1.0 / std::sqrt(static_cast<double>(d.value()));
        return make_state(d, std::vector<Amplitude>(d.size(), Amplitude{a, 0.0}));
    }
    case InitialState::Kind::Random: {
        RandomSource rng(splitmix64(cfg.chain.seed ^ 0x5157A7E0ULL));
        return random_state(d, 1, rng);
    }
    case InitialState::Kind::Explicit: return make_state(d, cfg.state.amps);
    }
    throw DomainError("unknown initial state kind");
}

inline json state_to_json(const InitialState &st) {
    switch (st.kind) {
    case InitialState::Kind::Basis: return "basis:" + std::to_string(st.basis);
    case InitialState::Kind::Uniform: return "uniform";
    case InitialState::Kind::Random: return "random";
    case InitialState::Kind::Explicit: {
        json amps = json::array();
        for (const auto &a : st.amps) amps.push_back({a.real(), a.imag()});
        return amps;
    }
    }
    return nullptr;
}

/// Canonical echo of a configuration, as embedded in reports. Output paths
/// are left out so that reports do not depend on where they are written.
inline json to_json(const ExperimentConfig &cfg) {
    return json{{"d", cfg.chain.d.value()},
                {"n", cfg.chain.n},
                {"mode", to_string(cfg.chain.mode)},
                {"noise", {{"probs", cfg.chain.noise.probs}}},
                {"seed", cfg.chain.seed},
                {"trials", cfg.trials},
                {"state", state_to_json(cfg.state)},
                {"max_paths", cfg.max_paths},
                {"track_entanglement", cfg.chain.track_entanglement}};
}

}  // namespace qrsim::sim
