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

/// Qudit numerics: dimensions, roots of unity, modular dit arithmetic,
/// multi-qudit pure states and their reduced density matrices.
///
/// Register layout is big-endian: qudit 0 is the most significant base-d
/// digit of the flat amplitude index, so |a,b⟩ lives at index a·d + b.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qrsim/errors.hpp"

namespace qrsim {

using Amplitude = std::complex<double>;

/// Tolerance accepted on user-supplied amplitudes; deviations inside it are
/// silently renormalized.
inline constexpr double kInputNormTolerance = 1e-9;
/// Tolerance for internal invariant checks on states and operators.
inline constexpr double kNormTolerance = 1e-12;

/// Qudit dimension ("freedom level"), 2 ≤ d ≤ 16.
class Dim {
  public:
    static constexpr int kMin = 2;
    static constexpr int kMax = 16;

    explicit Dim(int d) : d_(d) {
        if (d < kMin || d > kMax) {
            throw DomainError("qudit dimension must be in [2, 16], got " + std::to_string(d));
        }
    }

    int value() const noexcept { return d_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(d_); }

    friend bool operator==(Dim, Dim) = default;

  private:
    int d_;
};

namespace detail {

inline void require_dit(int v, Dim d, const char *what) {
    if (v < 0 || v >= d.value()) {
        throw DomainError(std::string(what) + " = " + std::to_string(v) + " outside [0, " +
                          std::to_string(d.value()) + ")");
    }
}

/// d^n, throwing when it would not fit comfortably in memory indexing.
inline std::size_t register_size(Dim d, std::size_t n) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (out > (std::numeric_limits<std::size_t>::max() >> 5) / d.size()) {
            throw ResourceError("register of " + std::to_string(n) + " qudits is too large");
        }
        out *= d.size();
    }
    return out;
}

/// Stride of qudit `k` in an n-qudit register (d^(n-1-k)).
inline std::size_t stride_of(Dim d, std::size_t n, std::size_t k) { return register_size(d, n - 1 - k); }

}  // namespace detail

/// e^{2πik/d}. Multiples of a quarter turn are returned exactly.
inline Amplitude root_of_unity(Dim d, int k) {
    detail::require_dit(k, d, "root index k");
    const int dv = d.value();
    if ((4 * k) % dv == 0) {
        switch ((4 * k) / dv) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * k / dv;
    return {std::cos(angle), std::sin(angle)};
}

/// (a + b) mod d.
inline int mod_add(int a, int b, Dim d) {
    detail::require_dit(a, d, "a");
    detail::require_dit(b, d, "b");
    return (a + b) % d.value();
}

/// Teleportation phase exponent (d − a·b) mod d; Bob's amplitude α_b in
/// measurement branch a carries the phase ω^{F(a,b)}.
inline int phase_exponent_f(int a, int b, Dim d) {
    detail::require_dit(a, d, "a");
    detail::require_dit(b, d, "b");
    const int dv = d.value();
    return (dv - (a * b) % dv) % dv;
}

/// Digits of a standard-basis label, qudit 0 first.
struct BasisIndex {
    std::vector<int> digits;
};

inline std::size_t flat_index(Dim d, const BasisIndex &idx) {
    std::size_t out = 0;
    for (int digit : idx.digits) {
        detail::require_dit(digit, d, "basis digit");
        out = out * d.size() + static_cast<std::size_t>(digit);
    }
    return out;
}

inline BasisIndex basis_index(Dim d, std::size_t num_qudits, std::size_t flat) {
    if (flat >= detail::register_size(d, num_qudits)) {
        throw DomainError("flat index " + std::to_string(flat) + " outside register");
    }
    BasisIndex idx{std::vector<int>(num_qudits, 0)};
    for (std::size_t k = num_qudits; k-- > 0;) {
        idx.digits[k] = static_cast<int>(flat % d.size());
        flat /= d.size();
    }
    return idx;
}

/// Normalized amplitude vector over `num_qudits` qudits of dimension d.
/// Immutable once built; operations return new states.
class PureState {
  public:
    /// Wraps amplitudes produced by a norm-preserving computation. Checks
    /// the length and finiteness, and that the norm is 1 within 1e−12.
    static PureState adopt(Dim d, std::vector<Amplitude> amps) {
        PureState s(d, std::move(amps));
        const double dev = std::abs(s.norm_squared() - 1.0);
        if (!(dev <= kNormTolerance)) {
            throw ValidationError("state norm deviates from 1 by " + std::to_string(dev));
        }
        return s;
    }

    Dim dim() const noexcept { return dim_; }
    std::size_t num_qudits() const noexcept { return num_qudits_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    const Amplitude &operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const {
        double acc = 0.0;
        for (const auto &a : amps_) acc += std::norm(a);
        return acc;
    }

  private:
    friend PureState make_state(Dim, std::vector<Amplitude>);

    PureState(Dim d, std::vector<Amplitude> amps) : dim_(d), amps_(std::move(amps)) {
        std::size_t len = amps_.size();
        std::size_t n = 0;
        while (len > 1 && len % d.size() == 0) {
            len /= d.size();
            ++n;
        }
        if (len != 1 || n == 0) {
            throw ValidationError("amplitude count " + std::to_string(amps_.size()) +
                                  " is not a positive power of d = " + std::to_string(d.value()));
        }
        for (const auto &a : amps_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw ValidationError("amplitude is not finite");
            }
        }
        num_qudits_ = n;
    }

    Dim dim_;
    std::size_t num_qudits_ = 0;
    std::vector<Amplitude> amps_;
};

/// Builds a state from user amplitudes. Norm deviations up to 1e−9 are
/// renormalized; anything larger is rejected.
inline PureState make_state(Dim d, std::vector<Amplitude> amps) {
    PureState s(d, std::move(amps));
    const double norm2 = s.norm_squared();
    if (norm2 == 0.0) {
        throw ValidationError("all-zero amplitude vector cannot be normalized");
    }
    const double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > kInputNormTolerance) {
        throw ValidationError("amplitudes have norm " + std::to_string(norm) + ", expected 1");
    }
    for (auto &a : s.amps_) a /= norm;
    return s;
}

inline PureState basis_state(Dim d, std::size_t num_qudits, const BasisIndex &idx) {
    if (idx.digits.size() != num_qudits) {
        throw DomainError("basis index has " + std::to_string(idx.digits.size()) + " digits, expected " +
                          std::to_string(num_qudits));
    }
    std::vector<Amplitude> amps(detail::register_size(d, num_qudits));
    amps[flat_index(d, idx)] = 1.0;
    return PureState::adopt(d, std::move(amps));
}

namespace detail {

inline void require_same_shape(const PureState &x, const PureState &y) {
    if (x.dim() != y.dim() || x.num_qudits() != y.num_qudits()) {
        throw DomainError("states differ in dimension or qudit count");
    }
}

inline void require_qudit(const PureState &s, std::size_t k) {
    if (k >= s.num_qudits()) {
        throw DomainError("qudit index " + std::to_string(k) + " outside register of " +
                          std::to_string(s.num_qudits()));
    }
}

}  // namespace detail

/// ⟨x|y⟩ = Σ conj(x_i)·y_i.
inline Amplitude inner_product(const PureState &x, const PureState &y) {
    detail::require_same_shape(x, y);
    Amplitude acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

/// |⟨x|y⟩|². Use inner_product for the raw overlap.
inline double fidelity(const PureState &x, const PureState &y) {
    return std::min(1.0, std::norm(inner_product(x, y)));
}

/// Kronecker product x ⊗ y; x occupies the leading qudits.
inline PureState tensor_product(const PureState &x, const PureState &y) {
    if (x.dim() != y.dim()) throw DomainError("tensor product of states with different dimensions");
    std::vector<Amplitude> amps;
    amps.reserve(x.size() * y.size());
    for (const auto &a : x.amplitudes()) {
        for (const auto &b : y.amplitudes()) amps.push_back(a * b);
    }
    return PureState::adopt(x.dim(), std::move(amps));
}

/// Reduced density matrix of a subsystem.
class DensityMatrix {
  public:
    DensityMatrix(Dim d, std::size_t num_qudits, Eigen::MatrixXcd mat)
        : dim_(d), num_qudits_(num_qudits), mat_(std::move(mat)) {}

    Dim dim() const noexcept { return dim_; }
    std::size_t num_qudits() const noexcept { return num_qudits_; }
    const Eigen::MatrixXcd &matrix() const noexcept { return mat_; }
    Amplitude trace() const { return mat_.trace(); }

    bool is_hermitian(double tol = kNormTolerance) const {
        return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }

    /// Eigenvalues in ascending order.
    Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

  private:
    Dim dim_;
    std::size_t num_qudits_;
    Eigen::MatrixXcd mat_;
};

/// Partial trace keeping the listed qudits (in the order given).
inline DensityMatrix reduced_density(const PureState &s, std::span<const std::size_t> keep) {
    const Dim d = s.dim();
    const std::size_t n = s.num_qudits();
    if (keep.empty()) throw DomainError("reduced_density needs at least one kept qudit");
    std::vector<bool> kept(n, false);
    for (std::size_t k : keep) {
        detail::require_qudit(s, k);
        if (kept[k]) throw DomainError("qudit " + std::to_string(k) + " listed twice");
        kept[k] = true;
    }
    std::vector<std::size_t> traced;
    for (std::size_t k = 0; k < n; ++k) {
        if (!kept[k]) traced.push_back(k);
    }

    const std::size_t kept_size = detail::register_size(d, keep.size());
    const std::size_t traced_size = detail::register_size(d, traced.size());
    // Amplitudes reshaped to (kept configuration) × (traced configuration);
    // ρ = M·M†.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kept_size),
                                                static_cast<Eigen::Index>(traced_size));
    std::vector<std::size_t> strides(n);
    for (std::size_t k = 0; k < n; ++k) strides[k] = detail::stride_of(d, n, k);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t k : keep) row = row * d.size() + (i / strides[k]) % d.size();
        for (std::size_t k : traced) col = col * d.size() + (i / strides[k]) % d.size();
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s[i];
    }
    return DensityMatrix(d, keep.size(), m * m.adjoint());
}

inline DensityMatrix reduced_density(const PureState &s, std::size_t keep) {
    const std::size_t one[] = {keep};
    return reduced_density(s, std::span<const std::size_t>(one));
}

/// von Neumann entropy in base-d logarithms (dits). Eigenvalues below 1e−14
/// contribute nothing.
inline double von_neumann_entropy(const DensityMatrix &rho) {
    const double log_d = std::log(static_cast<double>(rho.dim().value()));
    double h = 0.0;
    for (double lambda : rho.eigenvalues()) {
        if (lambda > 1e-14) h -= lambda * std::log(lambda) / log_d;
    }
    return std::max(0.0, h);
}

/// Entropy of the subsystem `block` against the rest of the register.
inline double block_entropy(const PureState &s, std::span<const std::size_t> block) {
    return von_neumann_entropy(reduced_density(s, block));
}

/// Pulls qudit `target` out of a register whose other qudits sit in a
/// definite standard-basis configuration (e.g. after measuring them).
/// Throws DomainError when the register is not of that form.
inline PureState isolate_qudit(const PureState &s, std::size_t target) {
    detail::require_qudit(s, target);
    const Dim d = s.dim();
    const std::size_t n = s.num_qudits();
    const auto peak = static_cast<std::size_t>(
        std::max_element(s.amplitudes().begin(), s.amplitudes().end(),
                         [](const Amplitude &a, const Amplitude &b) { return std::norm(a) < std::norm(b); }) -
        s.amplitudes().begin());
    const std::size_t stride = detail::stride_of(d, n, target);
    const std::size_t base = peak - ((peak / stride) % d.size()) * stride;

    std::vector<Amplitude> amps(d.size());
    double captured = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        amps[j] = s[base + j * stride];
        captured += std::norm(amps[j]);
    }
    if (std::abs(captured - 1.0) > kNormTolerance) {
        throw DomainError("qudit " + std::to_string(target) + " is entangled with or not separable from the rest");
    }
    return make_state(d, std::move(amps));
}

}  // namespace qrsim
