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

/// Built-in verification suite behind `qrsim selftest`.

#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qrsim/core.hpp"
#include "qrsim/gates.hpp"
#include "qrsim/random.hpp"
#include "qrsim/repeater_chain.hpp"
#include "qrsim/sim/config.hpp"
#include "qrsim/sim/report.hpp"
#include "qrsim/teleport.hpp"

namespace qrsim::sim {

struct SelftestOptions {
    /// Negative control: drop the 1/√d factor from the Fourier gate in the
    /// unitarity sweep.
    bool corrupt_hadamard_normalization = false;
};

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
    double seconds;
};

namespace detail {

inline double max_abs_diff(const PureState &x, const PureState &y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

inline std::string fmt_double(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

/// All forced (a, b) sequences for n hops.
inline std::vector<std::vector<ForcedOutcome>> all_forced_paths(int d, int n) {
    std::vector<std::vector<ForcedOutcome>> out{{}};
    for (int hop = 0; hop < n; ++hop) {
        std::vector<std::vector<ForcedOutcome>> next;
        for (const auto &prefix : out) {
            for (int a = 0; a < d; ++a) {
                for (int b = 0; b < d; ++b) {
                    auto path = prefix;
                    path.push_back({a, b});
                    next.push_back(std::move(path));
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

inline CheckResult check_cnot3_golden() {
    static constexpr int kEq8[9][9] = {
        {1, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 1, 0},
    };
    // Read row = output, column = input, the printed matrix sends |1,0> to
    // |1,2>, which is the inverse permutation. Report which one it matches so
    // a failure here is explained rather than hidden.
    const auto mismatches = [&](const GateMatrix &g) {
        int count = 0;
        for (int r = 0; r < 9; ++r) {
            for (int c = 0; c < 9; ++c) {
                if (g(r, c) != Amplitude(kEq8[r][c], 0.0)) ++count;
            }
        }
        return count;
    };
    const int forward = mismatches(cnot(Dim{3}));
    const int inverse = mismatches(cnot_dagger(Dim{3}));
    std::string detail = std::to_string(forward) + " mismatched entries";
    if (forward != 0 && inverse == 0) detail += "; printed matrix equals cnot_dagger(3)";
    return {"cnot3_golden", forward == 0, detail, 0.0};
}

inline CheckResult check_direct_sum_law() {
    int failures = 0;
    for (int dv = Dim::kMin; dv <= Dim::kMax; ++dv) {
        const Dim d{dv};
        const GateMatrix g = cnot(d);
        for (int a = 0; a < dv; ++a) {
            for (int b = 0; b < dv; ++b) {
                const int col = a * dv + b;
                const int expected_row = a * dv + (a + b) % dv;
                for (int row = 0; row < dv * dv; ++row) {
                    if (g(row, col) != Amplitude(row == expected_row ? 1.0 : 0.0, 0.0)) ++failures;
                }
            }
        }
    }
    return {"direct_sum_law", failures == 0, std::to_string(failures) + " wrong entries over d=2..16", 0.0};
}

inline CheckResult check_circuit_oracle(std::uint64_t seed) {
    RandomSource rng(seed);
    double worst = 0.0;
    for (int dv = 2; dv <= 5; ++dv) {
        for (int t = 0; t < 200; ++t) {
            const PureState psi = random_state(Dim{dv}, 1, rng);
            worst = std::max(worst, max_abs_diff(hop_circuit(prepare_hop(psi)), eq11_oracle(psi)));
        }
    }
    return {"circuit_oracle_equivalence", worst <= 1e-12, "max deviation " + fmt_double(worst), 0.0};
}

inline CheckResult check_exact_recovery(std::uint64_t seed) {
    RandomSource rng(seed);
    double worst = 0.0;
    double worst_fid = 1.0;
    for (int dv = 2; dv <= 8; ++dv) {
        for (int t = 0; t < 50; ++t) {
            const PureState psi = random_state(Dim{dv}, 1, rng);
            for (int a = 0; a < dv; ++a) {
                for (int b = 0; b < dv; ++b) {
                    const HopOutcome hop = teleport_hop(psi, CorrectionMode::LocalEachHop, ForcedOutcome{a, b});
                    worst = std::max(worst, max_abs_diff(psi, hop.bob_post));
                    worst_fid = std::min(worst_fid, fidelity(psi, hop.bob_post));
                }
            }
        }
    }
    return {"exact_recovery", worst <= 1e-12 && worst_fid >= 1.0 - 1e-12,
            "max deviation " + fmt_double(worst) + ", min fidelity 1-" + fmt_double(1.0 - worst_fid), 0.0};
}

inline CheckResult check_strategy_equivalence(std::uint64_t seed) {
    RandomSource rng(seed);
    double worst = 0.0;
    int bad_f = 0;
    for (int dv = 2; dv <= 5; ++dv) {
        const Dim d{dv};
        for (int n = 1; n <= 10; ++n) {
            for (int t = 0; t < 50; ++t) {
                const PureState psi = random_state(d, 1, rng);
                ForcedPath path;
                int sum = 0;
                for (int i = 0; i < n; ++i) {
                    const int a = static_cast<int>(rng.next() % static_cast<std::uint64_t>(dv));
                    const int b = static_cast<int>(rng.next() % static_cast<std::uint64_t>(dv));
                    path.hops.push_back({a, b});
                    sum += a;
                }
                ChainConfig cfg{d, n, CorrectionMode::LocalEachHop, NoiseSpec::noiseless(d), 0};
                const ChainResult local = run_chain(cfg, psi, path);
                cfg.mode = CorrectionMode::DeferredFinal;
                const ChainResult deferred = run_chain(cfg, psi, path);
                worst = std::max(worst, max_abs_diff(local.final, deferred.final));
                if (deferred.deferred_exponent != sum % dv) ++bad_f;
            }
        }
    }
    return {"strategy_equivalence", worst <= 1e-12 && bad_f == 0,
            "max deviation " + fmt_double(worst) + ", " + std::to_string(bad_f) + " wrong deferred exponents", 0.0};
}

inline CheckResult check_full_register(std::uint64_t seed) {
    RandomSource rng(seed);
    double worst = 0.0;
    double worst_entropy = 0.0;
    const std::pair<int, int> cases[] = {{2, 2}, {2, 3}, {3, 2}};
    for (auto [dv, n] : cases) {
        const Dim d{dv};
        const PureState psi = random_state(d, 1, rng);
        ChainConfig cfg{d, n, CorrectionMode::LocalEachHop, NoiseSpec::noiseless(d), 0};
        for (const auto &hops : all_forced_paths(dv, n)) {
            const FullRegisterTrace trace = full_register_trace(n, d, psi, hops);
            const ChainResult chain = run_chain(cfg, psi, ForcedPath{hops, {}});
            worst = std::max(worst, max_abs_diff(trace.final, chain.final));
            for (double h : trace.boundary_entropy) worst_entropy = std::max(worst_entropy, std::abs(h));
        }
    }
    return {"full_register_oracle", worst <= 1e-12 && worst_entropy <= 1e-10,
            "max deviation " + fmt_double(worst) + ", max cross-repeater entropy " + fmt_double(worst_entropy), 0.0};
}

inline CheckResult check_unitarity(const SelftestOptions &options) {
    int failures = 0;
    for (int dv = Dim::kMin; dv <= Dim::kMax; ++dv) {
        const Dim d{dv};
        GateMatrix h = hadamard(d);
        if (options.corrupt_hadamard_normalization) {
            h = GateMatrix(d, 1, h.matrix() * std::sqrt(static_cast<double>(dv)));
        }
        const GateMatrix gates[] = {pauli_z(d), pauli_x(d), h, hadamard_inverse(d), cnot(d), cnot_dagger(d)};
        for (const auto &g : gates) failures += is_unitary(g) ? 0 : 1;

        const auto close_to = [](const GateMatrix &x, const Eigen::MatrixXcd &y) {
            return (x.matrix() - y).cwiseAbs().maxCoeff() <= 1e-12;
        };
        const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dv, dv);
        if (!close_to(gate_power(pauli_z(d), dv), eye)) ++failures;
        if (!close_to(gate_power(pauli_x(d), dv), eye)) ++failures;
        if (!close_to(pauli_z(d) * pauli_x(d), root_of_unity(d, 1) * (pauli_x(d) * pauli_z(d)).matrix())) ++failures;
    }
    return {"unitarity_sweep", failures == 0, std::to_string(failures) + " failed gate checks over d=2..16", 0.0};
}

inline CheckResult check_noise_sanity() {
    int imperfect_paths = 0;
    for (int dv = 2; dv <= 4; ++dv) {
        const Dim d{dv};
        for (auto mode : {CorrectionMode::LocalEachHop, CorrectionMode::DeferredFinal}) {
            ChainConfig cfg{d, 3, mode, NoiseSpec::noiseless(d), 0};
            RandomSource rng(static_cast<std::uint64_t>(dv));
            for (const auto &p : enumerate_branches(cfg, random_state(d, 1, rng), kDefaultMaxPaths)) {
                if (std::abs(p.fidelity - 1.0) > 1e-12) ++imperfect_paths;
            }
        }
    }
    ExperimentConfig cfg;
    cfg.chain = ChainConfig{Dim{2}, 1, CorrectionMode::DeferredFinal, NoiseSpec{{0.5, 0.5}}, 0};
    cfg.state.kind = InitialState::Kind::Uniform;
    cfg.trials = 10000;
    const double mean = cmd_run(cfg).aggregate.mean_fidelity;
    return {"noise_sanity", imperfect_paths == 0 && std::abs(mean - 0.5) <= 0.02,
            std::to_string(imperfect_paths) + " imperfect noiseless paths, dephased mean fidelity " + std::to_string(mean),
            0.0};
}

inline CheckResult check_determinism() {
    ExperimentConfig cfg;
    cfg.chain = ChainConfig{Dim{3}, 4, CorrectionMode::DeferredFinal, NoiseSpec{{0.6, 0.3, 0.1}}, 1234};
    cfg.state.kind = InitialState::Kind::Random;
    cfg.trials = 200;
    const std::string first = render(to_json(cmd_run(cfg)));
    const std::string second = render(to_json(cmd_run(cfg)));
    return {"determinism", first == second, first == second ? "reports identical" : "reports differ", 0.0};
}

}  // namespace detail

inline std::vector<CheckResult> run_selftest(const SelftestOptions &options = {}) {
    constexpr std::uint64_t kSeed = 20161;
    const std::vector<std::function<CheckResult()>> checks = {
        detail::check_cnot3_golden,
        detail::check_direct_sum_law,
        [] { return detail::check_circuit_oracle(kSeed); },
        [] { return detail::check_exact_recovery(kSeed + 1); },
        [] { return detail::check_strategy_equivalence(kSeed + 2); },
        [] { return detail::check_full_register(kSeed + 3); },
        [&] { return detail::check_unitarity(options); },
        detail::check_noise_sanity,
        detail::check_determinism,
    };
    std::vector<CheckResult> results;
    for (const auto &check : checks) {
        const auto start = std::chrono::steady_clock::now();
        CheckResult r = check();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(r));
    }
    return results;
}

inline bool print_selftest(std::ostream &out, const std::vector<CheckResult> &results) {
    bool all = true;
    for (const auto &r : results) {
        std::ostringstream secs;
        secs.precision(3);
        secs << std::fixed << r.seconds << " s";
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ", " << secs.str() << ")\n";
        all = all && r.passed;
    }
    return all;
}

}  // namespace qrsim::sim
