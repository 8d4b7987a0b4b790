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

/// Single-dit teleportation with Z-only correction.
///
/// A hop acts on the three-qudit register |ψ, A, B⟩ = |ψ,0,0⟩:
///
///     CNOT_d (ψ → B),  H† on ψ,  H on A
///
/// which leaves Σ_{a,b,j} (1/d)·ω^{−a·j}·α_j·|a,b,j⟩. Measuring ψ and A in
/// the standard basis gives (a, b); Bob holds Z^{−a}|ψ⟩ regardless of b,
/// and Z^a restores |ψ⟩ exactly.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrsim/core.hpp"
#include "qrsim/gates.hpp"
#include "qrsim/random.hpp"

namespace qrsim {

enum class CorrectionMode { LocalEachHop, DeferredFinal };

inline const char *to_string(CorrectionMode mode) {
    return mode == CorrectionMode::LocalEachHop ? "local" : "deferred";
}

/// Gate sequence used by hop_circuit.
enum class HopCircuit {
    /// CNOT(0→2), H† on 0, H on 1. Reproduces the ω^{F(a,j)} expansion.
    Canonical,
    /// CNOT†(0→2), H on 0, H on 1. Kept for comparison; it shifts Bob's
    /// basis labels for d > 2 and so disagrees with eq11_oracle there.
    AdjointCnot,
};

/// Register slots of one hop.
inline constexpr std::size_t kCarrier = 0;
inline constexpr std::size_t kAlice = 1;
inline constexpr std::size_t kBob = 2;

/// |ψ, A, B⟩ with ψ on slot 0.
struct HopRegister {
    PureState state;
};

struct ForcedOutcome {
    int a = 0;
    int b = 0;
};

struct MeasurementResult {
    int outcome;
    double prob;
    PureState collapsed;
};

struct HopOutcome {
    int a;                    ///< carrier result; the correction exponent r
    int b;                    ///< Alice-ancilla result, recorded only
    double prob;              ///< joint Born probability of (a, b)
    double prob_a;            ///< marginal probability of a
    PureState bob_pre;        ///< Bob's qudit before correction
    PureState bob_post;       ///< Z^a·bob_pre in local mode, bob_pre otherwise
};

inline HopRegister prepare_hop(const PureState &psi) {
    if (psi.num_qudits() != 1) throw DomainError("teleported state must be a single qudit");
    const PureState zero = basis_state(psi.dim(), 1, BasisIndex{{0}});
    return {tensor_product(tensor_product(psi, zero), zero)};
}

inline PureState hop_circuit(const HopRegister &reg, HopCircuit circuit = HopCircuit::Canonical) {
    const PureState &s = reg.state;
    if (s.num_qudits() != 3) throw DomainError("hop register must hold exactly 3 qudits");
    const std::size_t d = s.dim().size();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i % (d * d) != 0 && s[i] != Amplitude{0.0}) {
            throw DomainError("hop register must be prepared as |psi,0,0>");
        }
    }
    const Dim dim = s.dim();
    if (circuit == HopCircuit::Canonical) {
        PureState out = apply_2q(s, cnot(dim), kCarrier, kBob);
        out = apply_1q(out, hadamard_inverse(dim), kCarrier);
        return apply_1q(out, hadamard(dim), kAlice);
    }
    PureState out = apply_2q(s, cnot_dagger(dim), kCarrier, kBob);
    out = apply_1q(out, hadamard(dim), kCarrier);
    return apply_1q(out, hadamard(dim), kAlice);
}

/// Builds Σ_{a,b,j} (1/d)·ω^{F(a,j)}·α_j·|a,b,j⟩ straight from the formula.
inline PureState eq11_oracle(const PureState &psi) {
    if (psi.num_qudits() != 1) throw DomainError("teleported state must be a single qudit");
    const Dim dim = psi.dim();
    const int d = dim.value();
    std::vector<Amplitude> amps(static_cast<std::size_t>(d * d * d));
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            for (int j = 0; j < d; ++j) {
                amps[flat_index(dim, BasisIndex{{a, b, j}})] =
                    root_of_unity(dim, phase_exponent_f(a, j, dim)) * psi[static_cast<std::size_t>(j)] / double(d);
            }
        }
    }
    return PureState::adopt(dim, std::move(amps));
}

/// Born probabilities of each standard-basis outcome on qudit `target`.
inline std::vector<double> outcome_probabilities(const PureState &s, std::size_t target) {
    detail::require_qudit(s, target);
    const std::size_t d = s.dim().size();
    const std::size_t stride = detail::stride_of(s.dim(), s.num_qudits(), target);
    std::vector<double> probs(d, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) probs[(i / stride) % d] += std::norm(s[i]);
    return probs;
}

namespace detail {

inline MeasurementResult collapse(const PureState &s, std::size_t target, int outcome, double prob) {
    const std::size_t d = s.dim().size();
    const std::size_t stride = stride_of(s.dim(), s.num_qudits(), target);
    const double scale = 1.0 / std::sqrt(prob);
    std::vector<Amplitude> amps(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((i / stride) % d == static_cast<std::size_t>(outcome)) amps[i] = s[i] * scale;
    }
    return {outcome, prob, make_state(s.dim(), std::move(amps))};
}

}  // namespace detail

/// Standard-basis measurement with a forced outcome.
inline MeasurementResult measure_standard(const PureState &s, std::size_t target, int forced) {
    detail::require_dit(forced, s.dim(), "forced outcome");
    const auto probs = outcome_probabilities(s, target);
    const double p = probs[static_cast<std::size_t>(forced)];
    if (p < 1e-15) {
        throw ImpossibleBranchError("outcome " + std::to_string(forced) + " on qudit " + std::to_string(target) +
                                    " has zero probability");
    }
    return detail::collapse(s, target, forced, p);
}

/// Standard-basis measurement sampled from the Born distribution.
inline MeasurementResult measure_standard(const PureState &s, std::size_t target, RandomSource &rng) {
    const auto probs = outcome_probabilities(s, target);
    const double u = rng.uniform();
    double cumulative = 0.0;
    int outcome = -1;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cumulative += probs[k];
        if (u < cumulative) {
            outcome = static_cast<int>(k);
            break;
        }
    }
    if (outcome < 0) {
        // u landed in the rounding gap above the cumulative sum.
        for (std::size_t k = probs.size(); k-- > 0;) {
            if (probs[k] > 0.0) {
                outcome = static_cast<int>(k);
                break;
            }
        }
    }
    return detail::collapse(s, target, outcome, probs[static_cast<std::size_t>(outcome)]);
}

/// Z^r on a single qudit.
inline PureState apply_correction(const PureState &bob, int r) {
    if (bob.num_qudits() != 1) throw DomainError("correction acts on a single qudit");
    detail::require_dit(r, bob.dim(), "correction exponent r");
    return apply_1q(bob, pauli_z_power(bob.dim(), r), 0);
}

namespace detail {

inline HopOutcome run_hop(const PureState &psi, CorrectionMode mode, RandomSource *rng,
                          const std::optional<ForcedOutcome> &forced, HopCircuit circuit) {
    const PureState pre_measure = hop_circuit(prepare_hop(psi), circuit);
    MeasurementResult first =
        forced ? measure_standard(pre_measure, kCarrier, forced->a) : measure_standard(pre_measure, kCarrier, *rng);
    MeasurementResult second = forced ? measure_standard(first.collapsed, kAlice, forced->b)
                                      : measure_standard(first.collapsed, kAlice, *rng);
    PureState bob_pre = isolate_qudit(second.collapsed, kBob);
    PureState bob_post = mode == CorrectionMode::LocalEachHop ? apply_correction(bob_pre, first.outcome) : bob_pre;
    return HopOutcome{first.outcome,
                      second.outcome,
                      first.prob * second.prob,
                      first.prob,
                      std::move(bob_pre),
                      std::move(bob_post)};
}

}  // namespace detail

/// One teleportation hop with Born-sampled outcomes. Draws qudit 0's
/// outcome, then qudit 1's.
inline HopOutcome teleport_hop(const PureState &psi, CorrectionMode mode, RandomSource &rng,
                               HopCircuit circuit = HopCircuit::Canonical) {
    return detail::run_hop(psi, mode, &rng, std::nullopt, circuit);
}

/// One teleportation hop along a forced measurement branch.
inline HopOutcome teleport_hop(const PureState &psi, CorrectionMode mode, ForcedOutcome forced,
                               HopCircuit circuit = HopCircuit::Canonical) {
    return detail::run_hop(psi, mode, nullptr, forced, circuit);
}

/// von Neumann entropy of one qudit's reduced state, in dits.
inline double entanglement_entropy(const PureState &s, std::size_t target) {
    return von_neumann_entropy(reduced_density(s, target));
}

}  // namespace qrsim
