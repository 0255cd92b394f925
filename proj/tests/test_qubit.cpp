// Copyright 2026 The bell-lab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "bell_lab/models.hpp"
#include "bell_lab/qubit.hpp"
#include "test_helpers.hpp"

using namespace bell_lab;
using namespace bell_lab::testing;
using Catch::Approx;

namespace {

// Gram-Schmidt of a complex Gaussian matrix: a random frame built without
// the Givens machinery.
Frame4 gram_schmidt_frame(Substream &rng) {
    std::normal_distribution<double> normal;
    Frame4 f;
    for (std::size_t k = 0; k < 4; ++k) {
        for (auto &c : f[k]) {
            const double re = normal(rng);
            c = cplx(re, normal(rng));
        }
        for (std::size_t j = 0; j < k; ++j) {
            const cplx proj = inner(f[j], f[k]);
            for (std::size_t i = 0; i < 4; ++i) {
                f[k][i] -= proj * f[j][i];
            }
        }
        const double n = std::sqrt(norm_squared(f[k]));
        for (auto &c : f[k]) {
            c /= n;
        }
    }
    return f;
}

// P(first party gives 1) = <a1| Tr_B |psi><psi| |a1>, expanded by hand.
double reduced_density_marginal(const TwoQubitState &psi, const LocalBasis &a) {
    const auto &x = psi.amplitudes();
    cplx rho[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            rho[i][j] = x[2 * i] * std::conj(x[2 * j]) + x[2 * i + 1] * std::conj(x[2 * j + 1]);
        }
    }
    const Vec2 v = a.vector(Outcome::One);
    cplx p = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            p += std::conj(v[i]) * rho[i][j] * v[j];
        }
    }
    return p.real();
}

std::array<LocalBasis, 4> random_locals(Substream &rng) {
    return {random_local_basis(rng), random_local_basis(rng), random_local_basis(rng),
            random_local_basis(rng)};
}

} // namespace

TEST_CASE("born rule on reference states", "[qubit]") {
    const auto comp = MeasurementBasis4::computational();
    CHECK(born_table(basis_state(0), comp) == JointDistribution::from_probabilities(1, 0, 0, 0));
    const auto t = born_table(split_state(), comp);
    CHECK(t.p11() == 0.0);
    CHECK(t.p12() == Approx(0.5).margin(1e-15));
    CHECK(t.p21() == Approx(0.5).margin(1e-15));
    CHECK(t.p22() == 0.0);
}

TEST_CASE("state construction", "[qubit]") {
    CHECK_THROWS_AS(TwoQubitState::from_amplitudes({1.0, 1.0, 0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(TwoQubitState::normalized({0.0, 0.0, 0.0, 0.0}), InvalidArgument);
    const auto s = TwoQubitState::normalized({1.0, 1.0, 1.0, 1.0});
    CHECK(norm_squared(s.amplitudes()) == Approx(1.0).margin(1e-15));
}

TEST_CASE("schmidt rank", "[qubit]") {
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(schmidt_rank({1.0, 0.0, 0.0, 0.0}) == 1);
    CHECK(schmidt_rank({0.0, h, h, 0.0}) == 2);
    CHECK(schmidt_rank({h, h, 0.0, 0.0}) == 1);
    const auto sv = schmidt_coefficients({0.0, h, h, 0.0});
    CHECK(sv[0] == Approx(h));
    CHECK(sv[1] == Approx(h));

    Substream rng(4, 0, 0);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_local_basis(rng).vector(Outcome::One);
        const auto b = random_local_basis(rng).vector(Outcome::Two);
        CHECK(schmidt_rank(kron(a, b)) == 1);
    }
}

TEST_CASE("local and product bases are orthonormal", "[qubit][property]") {
    Substream rng(12, 0, 0);
    for (int i = 0; i < 500; ++i) {
        const auto a = random_local_basis(rng);
        const auto b = LocalBasis{20 * (rng.uniform() - 0.5), 20 * (rng.uniform() - 0.5)};
        CHECK(orthonormality_error(a.vectors()) <= 1e-12);
        CHECK(orthonormality_error(b.vectors()) <= 1e-12);
        const auto p = MeasurementBasis4::product(a, b);
        CHECK(p.kind() == BasisKind::product);
        CHECK(orthonormality_error(p.vectors()) <= 1e-12);
        for (std::size_t k = 0; k < 4; ++k) {
            const auto expect = kron(a.vector(k < 2 ? Outcome::One : Outcome::Two),
                                     b.vector(k % 2 == 0 ? Outcome::One : Outcome::Two));
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(std::abs(p.vector(k)[j] - expect[j]) <= 1e-15);
            }
        }
        CHECK(p.schmidt_ranks() == std::array<int, 4>{1, 1, 1, 1});
    }
    CHECK_THROWS_AS(MeasurementBasis4::entangled(Frame4{}), InvalidArgument);
}

TEST_CASE("givens frames", "[qubit][property]") {
    Substream rng(13, 0, 0);
    for (int i = 0; i < 300; ++i) {
        std::array<double, kFrameParameters> p{};
        for (auto &x : p) {
            x = 2 * std::numbers::pi * (rng.uniform() - 0.5);
        }
        const auto f = givens_frame(p);
        CHECK(orthonormality_error(f) <= 1e-12);
    }
    // The decomposition recovers independent random frames up to column phases.
    for (int i = 0; i < 300; ++i) {
        const auto target = gram_schmidt_frame(rng);
        const auto back = givens_frame(givens_parameters(target));
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(std::abs(inner(back[k], target[k])) - 1.0) <= 1e-12);
        }
    }
    for (const auto &basis : {MeasurementBasis4::computational(), split_projecting_basis()}) {
        const auto back = givens_frame(givens_parameters(basis.vectors()));
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(std::abs(inner(back[k], basis.vector(k))) - 1.0) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(givens_frame(std::vector<double>(5)), InvalidArgument);
}

TEST_CASE("predicted tables are normalized", "[qubit][property]") {
    Substream rng(14, 0, 0);
    for (int i = 0; i < 500; ++i) {
        const auto state = random_state(rng);
        Representation r{state,
                         {MeasurementBasis4::entangled(gram_schmidt_frame(rng)),
                          MeasurementBasis4::product(random_local_basis(rng),
                                                     random_local_basis(rng)),
                          MeasurementBasis4::entangled(gram_schmidt_frame(rng)),
                          MeasurementBasis4::entangled(gram_schmidt_frame(rng))},
                         {}};
        const auto s = predict(r);
        for (auto st : kAllSettings) {
            const auto &c = s.table(st).cells();
            CHECK(c[0] + c[1] + c[2] + c[3] == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("vessels representation", "[qubit]") {
    const auto rep = vessels_representation();
    const auto predicted = predict(rep);
    const auto exact = scenario_of(VesselsModel{});
    for (auto st : kAllSettings) {
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(predicted.table(st).cells()[k] - exact.table(st).cells()[k]) <= 1e-12);
        }
    }
    CHECK(chsh(predicted).s_value == Approx(4.0).margin(1e-12));
    CHECK(rep.basis(Setting::AB).kind() == BasisKind::product);
    for (auto st : {Setting::ABp, Setting::ApB, Setting::ApBp}) {
        CHECK(rep.basis(st).kind() == BasisKind::entangled);
        CHECK(rep.basis(st).schmidt_ranks()[0] == 2);
    }
    CHECK_FALSE(audit_holds(full_marginal_audit(predicted)));
}

TEST_CASE("product measurements obey the marginal law", "[qubit][property]") {
    Substream rng(15, 0, 0);
    for (int i = 0; i < 300; ++i) {
        const auto state = random_state(rng);
        const auto local = random_locals(rng);
        CHECK(marginal_identity_check(state, local) <= 1e-9);

        // Independent route: reduced density matrix of the first party.
        const auto s = predict(Representation::product(state, local));
        for (auto a : {Side::A, Side::Ap}) {
            const double rho = reduced_density_marginal(state, local[index(a)]);
            for (auto ctx : contexts_of(a)) {
                CHECK(s.marginal(a, ctx, Outcome::One) == Approx(rho).margin(1e-12));
            }
            CHECK(local_probability_one(state, a, local[index(a)]) == Approx(rho).margin(1e-12));
        }
        CHECK(std::abs(chsh(s).s_value) <= ChshReport::tsirelson_bound + 1e-9);
    }

    const std::array<LocalBasis, 4> comp{};
    for (int i = 0; i < 50; ++i) {
        CHECK(marginal_identity_check(random_state(rng), comp) == 0.0);
    }
}

TEST_CASE("singlet representation matches the singlet model", "[qubit]") {
    Substream rng(16, 0, 0);
    for (int i = 0; i < 100; ++i) {
        SingletModel::Angles angles;
        for (auto &a : angles) {
            a = 2 * std::numbers::pi * rng.uniform();
        }
        const auto rep = singlet_representation(angles);
        const auto predicted = predict(rep);
        const auto exact = scenario_of(SingletModel(angles));
        for (auto st : kAllSettings) {
            for (std::size_t k = 0; k < 4; ++k) {
                CHECK(predicted.table(st).cells()[k] ==
                      Approx(exact.table(st).cells()[k]).margin(1e-12));
            }
        }
        const std::array<LocalBasis, 4> local{LocalBasis{angles[0], 0}, LocalBasis{angles[1], 0},
                                              LocalBasis{angles[2], 0}, LocalBasis{angles[3], 0}};
        CHECK(marginal_identity_check(singlet_state(), local) <= 1e-12);
    }
}

TEST_CASE("solo predictions", "[qubit]") {
    auto rep = Representation::product(split_state(), std::array<LocalBasis, 4>{});
    rep.solo_bases[index(Side::A)] = LocalBasis{};
    const auto s = predict(rep);
    REQUIRE(s.solo(Side::A).has_value());
    CHECK(s.solo(Side::A)->p1() == Approx(0.5));
    CHECK_FALSE(s.solo(Side::B).has_value());
}
