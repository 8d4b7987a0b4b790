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

/// One-way repeater chain built from teleportation hops.
///
/// Each hop teleports the in-flight qudit, passes Bob's qudit through the
/// Z-type channel, records (state, r) in the history, then either corrects
/// with Z^r on the spot (LocalEachHop) or leaves the phase in place and
/// applies Z^f, f = Σ r_i mod d, once at the last node (DeferredFinal).
///
/// Random draws per hop, in order: carrier outcome, ancilla outcome, noise
/// exponent.

#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qrsim/core.hpp"
#include "qrsim/gates.hpp"
#include "qrsim/random.hpp"
#include "qrsim/teleport.hpp"

namespace qrsim {

/// Z-dephasing channel: Z^k is applied with probability probs[k].
struct NoiseSpec {
    std::vector<double> probs;

    static NoiseSpec noiseless(Dim d) {
        NoiseSpec spec{std::vector<double>(d.size(), 0.0)};
        spec.probs[0] = 1.0;
        return spec;
    }

    bool is_noiseless() const { return !probs.empty() && probs[0] == 1.0; }

    void validate(Dim d) const {
        if (probs.size() != d.size()) {
            throw ValidationError("expected " + std::to_string(d.value()) + " probabilities, got " +
                                      std::to_string(probs.size()),
                                  "noise.probs");
        }
        double total = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("probabilities must be >= 0", "noise.probs");
            total += p;
        }
        if (std::abs(total - 1.0) > kNormTolerance) {
            throw ValidationError("probabilities sum to " + std::to_string(total) + ", expected 1", "noise.probs");
        }
    }
};

struct ChainConfig {
    Dim d{3};
    int n = 3;
    CorrectionMode mode = CorrectionMode::DeferredFinal;
    NoiseSpec noise = NoiseSpec::noiseless(Dim{3});
    std::uint64_t seed = 0;
    /// Record the entropy of Bob's qudit in each hop register before it is
    /// measured.
    bool track_entanglement = false;
    HopCircuit circuit = HopCircuit::Canonical;

    void validate() const {
        if (n < 1) throw ValidationError("repeater count must be >= 1", "n");
        noise.validate(d);
    }
};

struct HistoryEntry {
    PureState snapshot;
    int r;
};

/// The initial (ψ_0, 0) entry followed by one pre-correction snapshot per hop.
struct TransmissionHistory {
    std::vector<HistoryEntry> entries;
};

struct ChainResult {
    PureState final;
    std::vector<int> results;          ///< R: carrier outcome per hop
    std::vector<int> ancilla_results;  ///< b per hop, never used for correction
    std::vector<int> noise;            ///< applied dephasing exponent per hop
    TransmissionHistory history;
    double fidelity_vs_initial;
    std::optional<int> deferred_exponent;
    std::vector<double> hop_entropy;   ///< filled when track_entanglement is set
};

/// Outcomes to force through a chain run. An empty `noise` means the
/// channel is sampled as usual.
struct ForcedPath {
    std::vector<ForcedOutcome> hops;
    std::vector<int> noise;
};

/// (Σ r_i) mod d.
inline int deferred_exponent(const std::vector<int> &results, Dim d) {
    int f = 0;
    for (int r : results) f = mod_add(f, r, d);
    return f;
}

struct NoiseResult {
    PureState state;
    int applied_k;
};

inline NoiseResult apply_phase_noise(const PureState &s, const NoiseSpec &noise, int forced_k) {
    noise.validate(s.dim());
    detail::require_dit(forced_k, s.dim(), "noise exponent k");
    return {apply_1q(s, pauli_z_power(s.dim(), forced_k), 0), forced_k};
}

/// Samples k from the channel. Always consumes exactly one draw.
inline NoiseResult apply_phase_noise(const PureState &s, const NoiseSpec &noise, RandomSource &rng) {
    noise.validate(s.dim());
    const double u = rng.uniform();
    // Fallback for u above a cumulative sum that rounds to just under 1.
    int k = 0;
    for (std::size_t i = 0; i < noise.probs.size(); ++i) {
        if (noise.probs[i] > 0.0) k = static_cast<int>(i);
    }
    double cumulative = 0.0;
    for (std::size_t i = 0; i < noise.probs.size(); ++i) {
        cumulative += noise.probs[i];
        if (u < cumulative) {
            k = static_cast<int>(i);
            break;
        }
    }
    if (k == 0) return {s, 0};
    return {apply_1q(s, pauli_z_power(s.dim(), k), 0), k};
}

namespace detail {

inline ChainResult run_chain_impl(const ChainConfig &config, const PureState &psi0, const ForcedPath *forced) {
    config.validate();
    if (psi0.num_qudits() != 1) throw DomainError("transmitted state must be a single qudit");
    if (psi0.dim() != config.d) throw DomainError("state dimension does not match config.d");
    if (forced) {
        if (forced->hops.size() != static_cast<std::size_t>(config.n)) {
            throw DomainError("forced path must list one outcome per hop");
        }
        if (!forced->noise.empty() && forced->noise.size() != static_cast<std::size_t>(config.n)) {
            throw DomainError("forced noise must list one exponent per hop");
        }
    }

    RandomSource rng(config.seed);
    ChainResult out{psi0, {}, {}, {}, {}, 0.0, std::nullopt, {}};
    out.history.entries.push_back({psi0, 0});

    PureState current = psi0;
    for (int i = 0; i < config.n; ++i) {
        const auto hop_index = static_cast<std::size_t>(i);
        if (config.track_entanglement) {
            out.hop_entropy.push_back(entanglement_entropy(hop_circuit(prepare_hop(current), config.circuit), kBob));
        }
        // Correction is applied below, after the channel, so the history
        // sees the uncorrected state in both modes.
        HopOutcome hop = forced ? teleport_hop(current, CorrectionMode::DeferredFinal, forced->hops[hop_index], config.circuit)
                                : teleport_hop(current, CorrectionMode::DeferredFinal, rng, config.circuit);
        NoiseResult noisy = (forced && !forced->noise.empty())
                                ? apply_phase_noise(hop.bob_pre, config.noise, forced->noise[hop_index])
                                : apply_phase_noise(hop.bob_pre, config.noise, rng);

        out.results.push_back(hop.a);
        out.ancilla_results.push_back(hop.b);
        out.noise.push_back(noisy.applied_k);
        out.history.entries.push_back({noisy.state, hop.a});

        current = config.mode == CorrectionMode::LocalEachHop ? apply_correction(noisy.state, hop.a)
                                                              : std::move(noisy.state);
    }

    if (config.mode == CorrectionMode::DeferredFinal) {
        const int f = deferred_exponent(out.results, config.d);
        out.deferred_exponent = f;
        current = apply_correction(current, f);
    }
    out.final = std::move(current);
    out.fidelity_vs_initial = fidelity(psi0, out.final);
    return out;
}

}  // namespace detail

/// Runs `config.n` hops with outcomes sampled from a RandomSource seeded by
/// `config.seed`.
inline ChainResult run_chain(const ChainConfig &config, const PureState &psi0) {
    return detail::run_chain_impl(config, psi0, nullptr);
}

inline ChainResult run_chain(const ChainConfig &config, const PureState &psi0, const ForcedPath &forced) {
    return detail::run_chain_impl(config, psi0, &forced);
}

struct BranchPath {
    std::vector<int> outcomes;  ///< carrier result per hop
    std::vector<int> noise;     ///< dephasing exponent per hop
    double probability;
    PureState final;
    double fidelity;
};

/// Number of branches enumerate_branches would produce: (d·K)^n where K is
/// the number of channel exponents with nonzero probability. Saturates at
/// `cap + 1`.
inline std::uint64_t branch_count(const ChainConfig &config, std::uint64_t cap) {
    std::uint64_t live_noise = 0;
    for (double p : config.noise.probs) live_noise += p > 0.0 ? 1 : 0;
    const std::uint64_t per_hop = static_cast<std::uint64_t>(config.d.value()) * live_noise;
    std::uint64_t total = 1;
    for (int i = 0; i < config.n; ++i) {
        if (total > cap / per_hop) return cap + 1;
        total *= per_hop;
    }
    return total;
}

/// Exhaustive walk over every carrier outcome (and channel exponent) per
/// hop. Ancilla outcomes are fixed at 0: Bob's state does not depend on
/// them, and their marginal is folded into each path's probability.
inline std::vector<BranchPath> enumerate_branches(const ChainConfig &config, const PureState &psi0,
                                                  std::uint64_t max_paths) {
    config.validate();
    if (psi0.num_qudits() != 1 || psi0.dim() != config.d) {
        throw DomainError("initial state must be a single qudit of dimension config.d");
    }
    const std::uint64_t count = branch_count(config, max_paths);
    if (count > max_paths) {
        throw ResourceError("enumeration needs more than " + std::to_string(max_paths) +
                            " paths; use Monte Carlo mode (run) instead");
    }

    const int d = config.d.value();
    std::vector<BranchPath> paths;
    paths.reserve(static_cast<std::size_t>(count));
    std::vector<int> outcomes;
    std::vector<int> noise;

    auto walk = [&](auto &&self, const PureState &current, double prob) -> void {
        if (static_cast<int>(outcomes.size()) == config.n) {
            PureState final = config.mode == CorrectionMode::DeferredFinal
                                  ? apply_correction(current, deferred_exponent(outcomes, config.d))
                                  : current;
            const double fid = fidelity(psi0, final);
            paths.push_back({outcomes, noise, prob, std::move(final), fid});
            return;
        }
        for (int a = 0; a < d; ++a) {
            const HopOutcome hop = teleport_hop(current, CorrectionMode::DeferredFinal, ForcedOutcome{a, 0}, config.circuit);
            for (int k = 0; k < d; ++k) {
                const double pk = config.noise.probs[static_cast<std::size_t>(k)];
                if (pk <= 0.0) continue;
                NoiseResult noisy = apply_phase_noise(hop.bob_pre, config.noise, k);
                PureState next = config.mode == CorrectionMode::LocalEachHop ? apply_correction(noisy.state, a)
                                                                             : std::move(noisy.state);
                outcomes.push_back(a);
                noise.push_back(k);
                self(self, next, prob * hop.prob_a * pk);
                outcomes.pop_back();
                noise.pop_back();
            }
        }
    };
    walk(walk, psi0, 1.0);
    return paths;
}

/// Amplitude budget of the joint 3n-qudit simulation.
inline constexpr std::size_t kFullRegisterMaxAmplitudes = std::size_t{1} << 24;

struct FullRegisterTrace {
    PureState final;
    /// Entropy of repeaters 0..i against the rest of the register, taken
    /// after repeater i has measured and handed Bob's qudit on.
    std::vector<double> boundary_entropy;
};

/// Simulates the whole chain as one 3n-qudit register. Repeater i owns
/// qudits 3i (carrier), 3i+1 (ancilla), 3i+2 (Bob). After repeater i
/// measures and corrects, Bob's qudit is swapped into carrier 3(i+1), which
/// models the channel to the next node. The last Bob qudit holds the output.
inline FullRegisterTrace full_register_trace(int n, Dim d, const PureState &psi0,
                                             const std::vector<ForcedOutcome> &forced_path,
                                             bool record_boundary_entropy = true) {
    if (n < 1) throw DomainError("repeater count must be >= 1");
    if (psi0.num_qudits() != 1 || psi0.dim() != d) throw DomainError("initial state must be one qudit of dimension d");
    if (forced_path.size() != static_cast<std::size_t>(n)) throw DomainError("forced path must list one outcome per hop");
    const auto total_qudits = static_cast<std::size_t>(3 * n);
    std::size_t amplitudes = 1;
    for (std::size_t i = 0; i < total_qudits; ++i) {
        amplitudes *= d.size();
        if (amplitudes > kFullRegisterMaxAmplitudes) {
            throw ResourceError("full register of " + std::to_string(total_qudits) + " qudits exceeds 2^24 amplitudes");
        }
    }

    PureState reg = psi0;
    const PureState zero = basis_state(d, 1, BasisIndex{{0}});
    for (std::size_t i = 1; i < total_qudits; ++i) reg = tensor_product(reg, zero);

    const GateMatrix cx = cnot(d);
    const GateMatrix h = hadamard(d);
    const GateMatrix h_inv = hadamard_inverse(d);
    const GateMatrix swap = swap_gate(d);

    std::vector<double> boundary;
    for (int i = 0; i < n; ++i) {
        const auto base = static_cast<std::size_t>(3 * i);
        const ForcedOutcome &f = forced_path[static_cast<std::size_t>(i)];
        reg = apply_2q(reg, cx, base + kCarrier, base + kBob);
        reg = apply_1q(reg, h_inv, base + kCarrier);
        reg = apply_1q(reg, h, base + kAlice);
        reg = measure_standard(reg, base + kCarrier, f.a).collapsed;
        reg = measure_standard(reg, base + kAlice, f.b).collapsed;
        reg = apply_1q(reg, pauli_z_power(d, f.a), base + kBob);
        if (i + 1 < n) {
            reg = apply_2q(reg, swap, base + kBob, base + 3);
            if (record_boundary_entropy) {
                // Both sides of a pure bipartition share their entropy; trace
                // down to the smaller one.
                const std::size_t split = base + 3;
                std::vector<std::size_t> block;
                if (split <= total_qudits - split) {
                    block.resize(split);
                    std::iota(block.begin(), block.end(), std::size_t{0});
                } else {
                    block.resize(total_qudits - split);
                    std::iota(block.begin(), block.end(), split);
                }
                boundary.push_back(block_entropy(reg, block));
            }
        }
    }
    return {isolate_qudit(reg, total_qudits - 1), std::move(boundary)};
}

inline PureState full_register_oracle(int n, Dim d, const PureState &psi0, const std::vector<ForcedOutcome> &forced_path) {
    return full_register_trace(n, d, psi0, forced_path, false).final;
}

}  // namespace qrsim
