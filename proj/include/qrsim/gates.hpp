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

/// Generalized qudit gates (clock Z, shift X, Fourier H, CNOT_d and its
/// adjoint) and their application to register positions by index
/// arithmetic. No full-register matrix is ever built.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "qrsim/core.hpp"

namespace qrsim {

/// Complex matrix acting on `arity` (1 or 2) qudits, d^arity square.
/// Unitarity is not enforced on construction; see is_unitary.
class GateMatrix {
  public:
    GateMatrix(Dim d, int arity, Eigen::MatrixXcd mat) : dim_(d), arity_(arity), mat_(std::move(mat)) {
        if (arity != 1 && arity != 2) throw DomainError("gate arity must be 1 or 2");
        const auto side = static_cast<Eigen::Index>(detail::register_size(d, static_cast<std::size_t>(arity)));
        if (mat_.rows() != side || mat_.cols() != side) {
            throw DomainError("gate matrix must be " + std::to_string(side) + "x" + std::to_string(side));
        }
    }

    Dim dim() const noexcept { return dim_; }
    int arity() const noexcept { return arity_; }
    const Eigen::MatrixXcd &matrix() const noexcept { return mat_; }
    Amplitude operator()(Eigen::Index row, Eigen::Index col) const { return mat_(row, col); }

    /// Product `*this · rhs` (rhs acts first).
    GateMatrix operator*(const GateMatrix &rhs) const {
        if (dim_ != rhs.dim_ || arity_ != rhs.arity_) throw DomainError("composing incompatible gates");
        return {dim_, arity_, mat_ * rhs.mat_};
    }

  private:
    Dim dim_;
    int arity_;
    Eigen::MatrixXcd mat_;
};

inline GateMatrix identity_gate(Dim d, int arity = 1) {
    const auto side = static_cast<Eigen::Index>(detail::register_size(d, static_cast<std::size_t>(arity)));
    return {d, arity, Eigen::MatrixXcd::Identity(side, side)};
}

inline GateMatrix adjoint(const GateMatrix &g) { return {g.dim(), g.arity(), g.matrix().adjoint()}; }

/// max|G·G† − I| ≤ 1e−12.
inline bool is_unitary(const GateMatrix &g) {
    const auto &m = g.matrix();
    const Eigen::MatrixXcd residual = m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return residual.cwiseAbs().maxCoeff() <= kNormTolerance;
}

/// Z^r as a fresh diagonal diag(ω^{r·j}); r is reduced mod d.
inline GateMatrix pauli_z_power(Dim d, int r) {
    if (r < 0) throw DomainError("Z exponent must be non-negative");
    const int dv = d.value();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dv, dv);
    for (int j = 0; j < dv; ++j) {
        m(j, j) = root_of_unity(d, static_cast<int>((static_cast<long long>(r % dv) * j) % dv));
    }
    return {d, 1, m};
}

/// Z|j⟩ = ω^j|j⟩.
inline GateMatrix pauli_z(Dim d) { return pauli_z_power(d, 1); }

/// Cyclic shift X|j⟩ = |(j+1) mod d⟩.
inline GateMatrix pauli_x(Dim d) {
    const int dv = d.value();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dv, dv);
    for (int j = 0; j < dv; ++j) m(mod_add(j, 1, d), j) = 1.0;
    return {d, 1, m};
}

/// g applied r times; gate_power(g, 0) is the identity.
inline GateMatrix gate_power(const GateMatrix &g, int r) {
    if (r < 0) throw DomainError("gate power must be non-negative");
    GateMatrix result = identity_gate(g.dim(), g.arity());
    GateMatrix base = g;
    while (r > 0) {
        if (r & 1) result = result * base;
        base = base * base;
        r >>= 1;
    }
    return result;
}

/// Fourier gate H[k][j] = ω^{j·k}/√d.
inline GateMatrix hadamard(Dim d) {
    const int dv = d.value();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dv));
    Eigen::MatrixXcd m(dv, dv);
    for (int k = 0; k < dv; ++k) {
        for (int j = 0; j < dv; ++j) m(k, j) = scale * root_of_unity(d, (j * k) % dv);
    }
    return {d, 1, m};
}

inline GateMatrix hadamard_inverse(Dim d) { return adjoint(hadamard(d)); }

/// CNOT_d = I ⊕ X ⊕ X² ⊕ … ⊕ X^{d−1}: the control value a selects the
/// block X^a applied to the target, |a,b⟩ → |a,(a+b) mod d⟩.
inline GateMatrix cnot(Dim d) {
    const int dv = d.value();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dv * dv, dv * dv);
    const GateMatrix shift = pauli_x(d);
    for (int a = 0; a < dv; ++a) {
        m.block(a * dv, a * dv, dv, dv) = gate_power(shift, a).matrix();
    }
    return {d, 2, m};
}

/// |a,b⟩ → |a,(b−a) mod d⟩.
inline GateMatrix cnot_dagger(Dim d) { return adjoint(cnot(d)); }

/// |a,b⟩ → |b,a⟩. Used to hand a qudit over to the next register slot.
inline GateMatrix swap_gate(Dim d) {
    const int dv = d.value();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dv * dv, dv * dv);
    for (int a = 0; a < dv; ++a) {
        for (int b = 0; b < dv; ++b) m(b * dv + a, a * dv + b) = 1.0;
    }
    return {d, 2, m};
}

inline PureState apply_1q(const PureState &s, const GateMatrix &g, std::size_t target) {
    if (g.arity() != 1) throw DomainError("apply_1q needs a single-qudit gate");
    if (g.dim() != s.dim()) throw DomainError("gate and state dimensions differ");
    detail::require_qudit(s, target);

    const std::size_t d = s.dim().size();
    const std::size_t stride = detail::stride_of(s.dim(), s.num_qudits(), target);
    const auto &m = g.matrix();
    std::vector<Amplitude> out(s.amplitudes().begin(), s.amplitudes().end());
    std::vector<Amplitude> in(d);
    for (std::size_t base = 0; base < s.size(); ++base) {
        if ((base / stride) % d != 0) continue;
        for (std::size_t j = 0; j < d; ++j) in[j] = s[base + j * stride];
        for (std::size_t k = 0; k < d; ++k) {
            Amplitude acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * in[j];
            out[base + k * stride] = acc;
        }
    }
    return PureState::adopt(s.dim(), std::move(out));
}

/// Applies a two-qudit gate with its first slot on `control` and second on
/// `target`; the positions need not be adjacent or ordered.
inline PureState apply_2q(const PureState &s, const GateMatrix &g, std::size_t control, std::size_t target) {
    if (g.arity() != 2) throw DomainError("apply_2q needs a two-qudit gate");
    if (g.dim() != s.dim()) throw DomainError("gate and state dimensions differ");
    detail::require_qudit(s, control);
    detail::require_qudit(s, target);
    if (control == target) throw DomainError("control and target must differ");

    const std::size_t d = s.dim().size();
    const std::size_t sc = detail::stride_of(s.dim(), s.num_qudits(), control);
    const std::size_t st = detail::stride_of(s.dim(), s.num_qudits(), target);
    const auto &m = g.matrix();
    std::vector<Amplitude> out(s.amplitudes().begin(), s.amplitudes().end());
    std::vector<Amplitude> in(d * d);
    for (std::size_t base = 0; base < s.size(); ++base) {
        if ((base / sc) % d != 0 || (base / st) % d != 0) continue;
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) in[a * d + b] = s[base + a * sc + b * st];
        }
        for (std::size_t row = 0; row < d * d; ++row) {
            Amplitude acc = 0.0;
            for (std::size_t col = 0; col < d * d; ++col) {
                acc += m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) * in[col];
            }
            out[base + (row / d) * sc + (row % d) * st] = acc;
        }
    }
    return PureState::adopt(s.dim(), std::move(out));
}

}  // namespace qrsim
