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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qrsim/repeater_chain.hpp"

using namespace qrsim;
using Catch::Approx;

namespace {

double max_diff(const PureState &a, const PureState &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

ChainConfig config(int d, int n, CorrectionMode mode, std::uint64_t seed = 0) {
    return ChainConfig{Dim{d}, n, mode, NoiseSpec::noiseless(Dim{d}), seed};
}

ForcedPath random_path(int d, int n, RandomSource &rng) {
    ForcedPath path;
    for (int i = 0; i < n; ++i) {
        path.hops.push_back({static_cast<int>(rng.next() % std::uint64_t(d)), static_cast<int>(rng.next() % std::uint64_t(d))});
    }
    return path;
}

}  // namespace

TEST_CASE("NoiseSpec validation", "[chain]") {
    CHECK_NOTHROW(NoiseSpec::noiseless(Dim{4}).validate(Dim{4}));
    CHECK(NoiseSpec::noiseless(Dim{4}).is_noiseless());
    CHECK_THROWS_AS((NoiseSpec{{0.5, 0.4}}.validate(Dim{2})), ValidationError);
    CHECK_THROWS_AS((NoiseSpec{{1.2, -0.2}}.validate(Dim{2})), ValidationError);
    CHECK_THROWS_AS((NoiseSpec{{1.0}}.validate(Dim{2})), ValidationError);
    try {
        NoiseSpec{{0.5, 0.4}}.validate(Dim{2});
    } catch (const ValidationError &e) {
        CHECK(e.field() == "noise.probs");
    }
}

TEST_CASE("deferred_exponent", "[chain]") {
    CHECK(deferred_exponent({0, 0, 0, 0}, Dim{5}) == 0);
    CHECK(deferred_exponent({1, 2, 2}, Dim{3}) == 2);
    CHECK(deferred_exponent({}, Dim{3}) == 0);
    CHECK_THROWS_AS(deferred_exponent({1, 3}, Dim{3}), DomainError);

    SECTION("Z^f once equals Z^{r_i} applied in any order") {
        RandomSource rng(70);
        for (int d = 2; d <= 7; ++d) {
            const PureState psi = random_state(Dim{d}, 1, rng);
            std::vector<int> results;
            for (int i = 0; i < 9; ++i) results.push_back(static_cast<int>(rng.next() % std::uint64_t(d)));
            const PureState once = apply_correction(psi, deferred_exponent(results, Dim{d}));
            PureState forward = psi;
            for (int r : results) forward = apply_correction(forward, r);
            std::vector<int> shuffled = results;
            std::reverse(shuffled.begin(), shuffled.end());
            std::rotate(shuffled.begin(), shuffled.begin() + 4, shuffled.end());
            PureState permuted = psi;
            for (int r : shuffled) permuted = apply_correction(permuted, r);
            CHECK(max_diff(once, forward) <= 1e-12);
            CHECK(max_diff(once, permuted) <= 1e-12);
        }
    }
}

TEST_CASE("apply_phase_noise", "[chain]") {
    RandomSource rng(80);
    const PureState psi = random_state(Dim{3}, 1, rng);
    const NoiseResult clean = apply_phase_noise(psi, NoiseSpec::noiseless(Dim{3}), rng);
    CHECK(clean.applied_k == 0);
    CHECK(max_diff(clean.state, psi) == 0.0);

    const NoiseSpec half{{0.5, 0.5}};
    for (int j = 0; j < 2; ++j) {
        const PureState basis = basis_state(Dim{2}, 1, BasisIndex{{j}});
        const NoiseResult flipped = apply_phase_noise(basis, half, 1);
        CHECK(fidelity(basis, flipped.state) == Approx(1.0).margin(1e-12));
    }
    const double h = 1.0 / std::sqrt(2.0);
    const PureState plus = make_state(Dim{2}, {h, h});
    const NoiseResult minus = apply_phase_noise(plus, half, 1);
    CHECK(std::abs(minus.state[1] + h) <= 1e-15);
    CHECK(fidelity(plus, minus.state) == Approx(0.0).margin(1e-12));

    CHECK_THROWS_AS(apply_phase_noise(plus, half, 2), DomainError);
    CHECK_THROWS_AS(apply_phase_noise(plus, NoiseSpec{{0.5, 0.5, 0.0}}, 0), ValidationError);

    SECTION("sampled exponents follow the probabilities") {
        const NoiseSpec skewed{{0.2, 0.0, 0.8}};
        RandomSource noise_rng(81);
        std::vector<int> counts(3, 0);
        const int shots = 10000;
        for (int i = 0; i < shots; ++i) ++counts[static_cast<std::size_t>(apply_phase_noise(psi, skewed, noise_rng).applied_k)];
        CHECK(counts[1] == 0);
        CHECK(std::abs(counts[2] / double(shots) - 0.8) <= 5.0 * std::sqrt(0.16 / shots));
    }
}

TEST_CASE("run_chain", "[chain]") {
    RandomSource rng(90);

    SECTION("noiseless runs are perfect in both modes") {
        for (int d = 2; d <= 5; ++d) {
            for (int n = 1; n <= 10; ++n) {
                const PureState psi = random_state(Dim{d}, 1, rng);
                const ForcedPath path = random_path(d, n, rng);
                for (auto mode : {CorrectionMode::LocalEachHop, CorrectionMode::DeferredFinal}) {
                    const ChainResult forced = run_chain(config(d, n, mode), psi, path);
                    REQUIRE(forced.fidelity_vs_initial == Approx(1.0).margin(1e-12));
                    REQUIRE(max_diff(forced.final, psi) <= 1e-12);
                    const ChainResult sampled = run_chain(config(d, n, mode, 1000 + std::uint64_t(n)), psi);
                    REQUIRE(sampled.fidelity_vs_initial == Approx(1.0).margin(1e-12));
                }
            }
        }
    }

    SECTION("same seed: local and deferred agree elementwise") {
        for (int d = 2; d <= 5; ++d) {
            const PureState psi = random_state(Dim{d}, 1, rng);
            const ChainResult local = run_chain(config(d, 6, CorrectionMode::LocalEachHop, 42), psi);
            const ChainResult deferred = run_chain(config(d, 6, CorrectionMode::DeferredFinal, 42), psi);
            CHECK(local.results == deferred.results);
            CHECK(max_diff(local.final, deferred.final) <= 1e-12);
            CHECK_FALSE(local.deferred_exponent.has_value());
            REQUIRE(deferred.deferred_exponent.has_value());
            CHECK(*deferred.deferred_exponent ==
                  std::accumulate(deferred.results.begin(), deferred.results.end(), 0) % d);
        }
    }

    SECTION("n = 1 with r = 0 applies no correction") {
        const PureState psi = random_state(Dim{3}, 1, rng);
        const ChainResult out = run_chain(config(3, 1, CorrectionMode::DeferredFinal), psi, ForcedPath{{{0, 2}}, {}});
        CHECK(out.results == std::vector<int>{0});
        CHECK(*out.deferred_exponent == 0);
        CHECK(max_diff(out.final, psi) <= 1e-12);
    }

    SECTION("history contract") {
        const int d = 3;
        const int n = 4;
        const PureState psi = random_state(Dim{d}, 1, rng);
        const ForcedPath path{{{1, 0}, {2, 2}, {0, 1}, {2, 0}}, {}};
        for (auto mode : {CorrectionMode::LocalEachHop, CorrectionMode::DeferredFinal}) {
            const ChainResult out = run_chain(config(d, n, mode), psi, path);
            REQUIRE(out.history.entries.size() == std::size_t(n + 1));
            CHECK(out.history.entries[0].r == 0);
            CHECK(max_diff(out.history.entries[0].snapshot, psi) == 0.0);
            int accumulated = 0;
            for (int i = 1; i <= n; ++i) {
                const auto &entry = out.history.entries[static_cast<std::size_t>(i)];
                CHECK(entry.r == path.hops[static_cast<std::size_t>(i - 1)].a);
                // Snapshots are uncorrected: local mode only carries this
                // hop's phase, deferred mode carries every phase so far.
                accumulated = (accumulated + entry.r) % d;
                const int pending = mode == CorrectionMode::LocalEachHop ? entry.r : accumulated;
                CHECK(max_diff(apply_correction(entry.snapshot, pending), psi) <= 1e-12);
            }
        }
    }

    SECTION("noise commutes with the deferred correction") {
        for (int d = 2; d <= 5; ++d) {
            const PureState psi = random_state(Dim{d}, 1, rng);
            ForcedPath path = random_path(d, 5, rng);
            for (int i = 0; i < 5; ++i) path.noise.push_back(static_cast<int>(rng.next() % std::uint64_t(d)));
            ChainConfig cfg = config(d, 5, CorrectionMode::DeferredFinal);
            cfg.noise = NoiseSpec{std::vector<double>(std::size_t(d), 1.0 / d)};
            const ChainResult deferred = run_chain(cfg, psi, path);
            cfg.mode = CorrectionMode::LocalEachHop;
            const ChainResult local = run_chain(cfg, psi, path);
            CHECK(max_diff(deferred.final, local.final) <= 1e-12);

            // Same noise applied after the single Z^f instead of in flight.
            PureState after = psi;
            for (int k : path.noise) after = apply_1q(after, pauli_z_power(Dim{d}, k), 0);
            CHECK(max_diff(deferred.final, after) <= 1e-12);
            CHECK(deferred.noise == path.noise);
        }
    }

    SECTION("entanglement diagnostic") {
        const double h = 1.0 / std::sqrt(2.0);
        ChainConfig cfg = config(2, 3, CorrectionMode::LocalEachHop, 5);
        cfg.track_entanglement = true;
        const ChainResult out = run_chain(cfg, make_state(Dim{2}, {h, h}), ForcedPath{{{1, 0}, {0, 1}, {1, 1}}, {}});
        REQUIRE(out.hop_entropy.size() == 3);
        for (double e : out.hop_entropy) CHECK(e == Approx(1.0).margin(1e-12));
    }

    SECTION("errors") {
        const PureState psi = random_state(Dim{3}, 1, rng);
        CHECK_THROWS_AS(run_chain(config(2, 3, CorrectionMode::LocalEachHop), psi), DomainError);
        CHECK_THROWS_AS(run_chain(config(3, 0, CorrectionMode::LocalEachHop), psi), ValidationError);
        CHECK_THROWS_AS(run_chain(config(3, 2, CorrectionMode::LocalEachHop), psi, ForcedPath{{{0, 0}}, {}}), DomainError);
        CHECK_THROWS_AS(run_chain(config(3, 1, CorrectionMode::LocalEachHop), psi, ForcedPath{{{3, 0}}, {}}), DomainError);
    }
}

TEST_CASE("Born sampling is uniform over (a, b)", "[chain]") {
    const int d = 3;
    RandomSource rng(100);
    const PureState psi = random_state(Dim{d}, 1, rng);
    const ChainResult out = run_chain(config(d, 10000, CorrectionMode::LocalEachHop, 7), psi);
    std::vector<int> counts(std::size_t(d * d), 0);
    for (std::size_t i = 0; i < out.results.size(); ++i) ++counts[std::size_t(out.results[i] * d + out.ancilla_results[i])];
    const double p = 1.0 / (d * d);
    const double se = std::sqrt(p * (1.0 - p) / 10000.0);
    for (int c : counts) CHECK(std::abs(c / 10000.0 - p) <= 5.0 * se);
    CHECK(out.fidelity_vs_initial == Approx(1.0).margin(1e-12));
}

TEST_CASE("enumerate_branches", "[chain]") {
    RandomSource rng(110);
    SECTION("d = 2, n = 3") {
        const PureState psi = random_state(Dim{2}, 1, rng);
        const auto paths = enumerate_branches(config(2, 3, CorrectionMode::DeferredFinal), psi, 4096);
        REQUIRE(paths.size() == 8);
        double total = 0.0;
        for (const auto &p : paths) {
            CHECK(p.probability == Approx(0.125).margin(1e-12));
            CHECK(p.fidelity == Approx(1.0).margin(1e-12));
            total += p.probability;
        }
        CHECK(total == Approx(1.0).margin(1e-12));
    }
    SECTION("exhaustive noiseless fidelity for d^n ≤ 4096") {
        for (int d = 2; d <= 4; ++d) {
            int n = 1;
            while (std::pow(d, n + 1) <= 4096) ++n;
            const PureState psi = random_state(Dim{d}, 1, rng);
            for (auto mode : {CorrectionMode::LocalEachHop, CorrectionMode::DeferredFinal}) {
                const auto paths = enumerate_branches(config(d, n, mode), psi, 4096);
                CHECK(paths.size() == static_cast<std::size_t>(std::pow(d, n)));
                double worst = 1.0;
                for (const auto &p : paths) worst = std::min(worst, p.fidelity);
                CHECK(worst == Approx(1.0).margin(1e-12));
            }
        }
    }
    SECTION("noise branches are enumerated with their weights") {
        const double h = 1.0 / std::sqrt(2.0);
        ChainConfig cfg = config(2, 1, CorrectionMode::DeferredFinal);
        cfg.noise = NoiseSpec{{0.5, 0.5}};
        const auto paths = enumerate_branches(cfg, make_state(Dim{2}, {h, h}), 4096);
        REQUIRE(paths.size() == 4);
        double expected = 0.0;
        for (const auto &p : paths) expected += p.probability * p.fidelity;
        CHECK(expected == Approx(0.5).margin(1e-12));
    }
    SECTION("budget") {
        const PureState psi = random_state(Dim{3}, 1, rng);
        CHECK_THROWS_AS(enumerate_branches(config(3, 8, CorrectionMode::DeferredFinal), psi, 4096), ResourceError);
        CHECK(branch_count(config(3, 7, CorrectionMode::DeferredFinal), 4096) == 2187);
    }
}

TEST_CASE("full_register_oracle", "[chain]") {
    RandomSource rng(120);
    SECTION("n = 1 reduces to a single corrected hop") {
        const PureState psi = random_state(Dim{3}, 1, rng);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const PureState out = full_register_oracle(1, Dim{3}, psi, {{a, b}});
                CHECK(max_diff(out, teleport_hop(psi, CorrectionMode::LocalEachHop, ForcedOutcome{a, b}).bob_post) <= 1e-12);
            }
        }
    }
    SECTION("matches the factorized chain, d = 2, n = 2, all 16 paths") {
        const PureState psi = random_state(Dim{2}, 1, rng);
        for (int path = 0; path < 16; ++path) {
            const std::vector<ForcedOutcome> hops{{path & 1, (path >> 1) & 1}, {(path >> 2) & 1, (path >> 3) & 1}};
            const FullRegisterTrace trace = full_register_trace(2, Dim{2}, psi, hops);
            const ChainResult chain = run_chain(config(2, 2, CorrectionMode::DeferredFinal), psi, ForcedPath{hops, {}});
            CHECK(max_diff(trace.final, chain.final) <= 1e-12);
            REQUIRE(trace.boundary_entropy.size() == 1);
            CHECK(std::abs(trace.boundary_entropy[0]) <= 1e-10);
        }
    }
    SECTION("guards") {
        const PureState psi = random_state(Dim{2}, 1, rng);
        CHECK_THROWS_AS(full_register_oracle(9, Dim{2}, psi, std::vector<ForcedOutcome>(9)), ResourceError);
        CHECK_THROWS_AS(full_register_oracle(2, Dim{2}, psi, {{0, 0}}), DomainError);
        CHECK_THROWS_AS(full_register_oracle(1, Dim{3}, psi, {{0, 0}}), DomainError);
    }
}
