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

/**
 * @file
 * Two-qubit representations of coincidence experiments. A pure state and
 * one orthonormal measurement frame per setting predict the four tables via
 * the Born rule. Frames are either tensor products of local qubit bases or
 * general ("entangled") frames of the 4-dimensional space.
 *
 * Amplitudes and frame vectors use the basis order 11, 12, 21, 22, i.e.
 * index 2*a + b for first-party outcome a and second-party outcome b
 * (0-based).
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <span>

#include "core.hpp"
#include "rng.hpp"

namespace bell_lab {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;
using Vec4 = std::array<cplx, 4>;
using Frame4 = std::array<Vec4, 4>; ///< frame[k] is the vector for cell k

inline constexpr double kOrthonormalTolerance = 1e-12;
inline constexpr double kSchmidtTolerance = 1e-8;

template <std::size_t N> cplx inner(const std::array<cplx, N> &u, const std::array<cplx, N> &v) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) {
        s += std::conj(u[i]) * v[i];
    }
    return s;
}

template <std::size_t N> double norm_squared(const std::array<cplx, N> &v) {
    double s = 0.0;
    for (const auto &c : v) {
        s += std::norm(c);
    }
    return s;
}

inline Vec4 kron(const Vec2 &u, const Vec2 &w) {
    return {u[0] * w[0], u[0] * w[1], u[1] * w[0], u[1] * w[1]};
}

/// Largest |<u_i|u_j> - delta_ij| over a set of vectors.
template <std::size_t N, std::size_t K>
double orthonormality_error(const std::array<std::array<cplx, N>, K> &vs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            const cplx g = inner(vs[i], vs[j]) - cplx(i == j ? 1.0 : 0.0, 0.0);
            worst = std::max(worst, std::abs(g));
        }
    }
    return worst;
}

/// Singular values of the 2x2 amplitude matrix [[v0, v1], [v2, v3]], descending.
inline std::array<double, 2> schmidt_coefficients(const Vec4 &v) {
    const double trace = norm_squared(v);
    const double det = std::norm(v[0] * v[3] - v[1] * v[2]);
    const double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det));
    return {std::sqrt(std::max(0.0, 0.5 * (trace + disc))),
            std::sqrt(std::max(0.0, 0.5 * (trace - disc)))};
}

/// 1 for a product vector, 2 for an entangled one.
inline int schmidt_rank(const Vec4 &v, double tol = kSchmidtTolerance) {
    const auto s = schmidt_coefficients(v);
    return (s[0] > tol ? 1 : 0) + (s[1] > tol ? 1 : 0);
}

class TwoQubitState {
  public:
    /// Validates unit norm.
    static TwoQubitState from_amplitudes(const Vec4 &amplitudes) {
        if (std::abs(norm_squared(amplitudes) - 1.0) > kOrthonormalTolerance) {
            throw InvalidArgument("two-qubit state must have unit norm");
        }
        return TwoQubitState(amplitudes);
    }

    /// Rescales any nonzero vector to unit norm.
    static TwoQubitState normalized(const Vec4 &v) {
        const double n = std::sqrt(norm_squared(v));
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw InvalidArgument("cannot normalize a zero vector");
        }
        Vec4 a;
        for (std::size_t i = 0; i < 4; ++i) {
            a[i] = v[i] / n;
        }
        return TwoQubitState(a);
    }

    const Vec4 &amplitudes() const { return amplitudes_; }
    cplx operator[](std::size_t i) const { return amplitudes_[i]; }

  private:
    explicit TwoQubitState(const Vec4 &a) : amplitudes_(a) {}
    Vec4 amplitudes_;
};

/// Qubit measurement basis along the Bloch direction (theta, phi):
///   |1> = (cos t/2, e^{i phi} sin t/2),  |2> = (-sin t/2, e^{i phi} cos t/2).
struct LocalBasis {
    double theta = 0.0;
    double phi = 0.0;

    Vec2 vector(Outcome o) const {
        const double c = std::cos(0.5 * theta);
        const double s = std::sin(0.5 * theta);
        const cplx ph = std::polar(1.0, phi);
        if (o == Outcome::One) {
            return {cplx(c, 0.0), ph * s};
        }
        return {cplx(-s, 0.0), ph * c};
    }
    std::array<Vec2, 2> vectors() const { return {vector(Outcome::One), vector(Outcome::Two)}; }

    static LocalBasis computational() { return {}; }
};

enum class BasisKind { product, entangled };

inline std::string_view to_string(BasisKind k) {
    return k == BasisKind::product ? "product" : "entangled";
}

class MeasurementBasis4 {
  public:
    /// Frame {a_i (x) b_j} ordered 11, 12, 21, 22.
    static MeasurementBasis4 product(const LocalBasis &a, const LocalBasis &b) {
        Frame4 f;
        const auto av = a.vectors();
        const auto bv = b.vectors();
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                f[2 * i + j] = kron(av[i], bv[j]);
            }
        }
        return MeasurementBasis4(f, BasisKind::product, std::make_pair(a, b));
    }

    /// An arbitrary orthonormal frame, not constrained to factor across the parties.
    static MeasurementBasis4 entangled(const Frame4 &frame) {
        if (orthonormality_error(frame) > kOrthonormalTolerance) {
            throw InvalidArgument("measurement frame is not orthonormal");
        }
        return MeasurementBasis4(frame, BasisKind::entangled, std::nullopt);
    }

    static MeasurementBasis4 computational() {
        return product(LocalBasis::computational(), LocalBasis::computational());
    }

    const Frame4 &vectors() const { return frame_; }
    const Vec4 &vector(std::size_t cell) const { return frame_[cell]; }
    BasisKind kind() const { return kind_; }
    const std::optional<std::pair<LocalBasis, LocalBasis>> &local_pair() const {
        return local_pair_;
    }

    std::array<int, 4> schmidt_ranks(double tol = kSchmidtTolerance) const {
        return {schmidt_rank(frame_[0], tol), schmidt_rank(frame_[1], tol),
                schmidt_rank(frame_[2], tol), schmidt_rank(frame_[3], tol)};
    }

  private:
    MeasurementBasis4(const Frame4 &f, BasisKind k,
                      std::optional<std::pair<LocalBasis, LocalBasis>> pair)
        : frame_(f), kind_(k), local_pair_(std::move(pair)) {}

    Frame4 frame_;
    BasisKind kind_;
    std::optional<std::pair<LocalBasis, LocalBasis>> local_pair_;
};

struct Representation {
    TwoQubitState state;
    std::array<MeasurementBasis4, 4> bases; ///< indexed by Setting
    /// Local bases used to predict solo measurements, indexed by Side.
    std::array<std::optional<LocalBasis>, 4> solo_bases{};

    const MeasurementBasis4 &basis(Setting s) const { return bases[index(s)]; }

    /// Product measurements built from one local basis per side.
    static Representation product(const TwoQubitState &state,
                                  const std::array<LocalBasis, 4> &local) {
        auto basis_for = [&](Setting s) {
            return MeasurementBasis4::product(local[index(side_a_of(s))],
                                              local[index(side_b_of(s))]);
        };
        return {state,
                {basis_for(Setting::AB), basis_for(Setting::ABp), basis_for(Setting::ApB),
                 basis_for(Setting::ApBp)},
                {}};
    }
};

/// Born probabilities |<v_k|psi>|^2 of one frame.
inline JointDistribution born_table(const TwoQubitState &state, const MeasurementBasis4 &basis) {
    JointDistribution::Cells cells{};
    for (std::size_t k = 0; k < 4; ++k) {
        cells[k] = std::min(1.0, std::norm(inner(basis.vector(k), state.amplitudes())));
    }
    return JointDistribution::from_probabilities(cells);
}

/// P(outcome 1) for a local measurement on one party, the other left alone.
inline double local_probability_one(const TwoQubitState &state, Side side,
                                    const LocalBasis &basis) {
    const Vec2 v = basis.vector(Outcome::One);
    const auto &a = state.amplitudes();
    double p = 0.0;
    if (is_first_party(side)) {
        // sum over b of |<v|psi_{., b}>|^2
        for (std::size_t b = 0; b < 2; ++b) {
            p += std::norm(std::conj(v[0]) * a[b] + std::conj(v[1]) * a[2 + b]);
        }
    } else {
        for (std::size_t x = 0; x < 2; ++x) {
            p += std::norm(std::conj(v[0]) * a[2 * x] + std::conj(v[1]) * a[2 * x + 1]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

inline Scenario predict(const Representation &r) {
    Scenario::Solos solos;
    for (auto side : kAllSides) {
        if (const auto &b = r.solo_bases[index(side)]) {
            const double p1 = local_probability_one(r.state, side, *b);
            solos[index(side)] = SingleDistribution::from_probabilities(p1, 1.0 - p1);
        }
    }
    return Scenario({born_table(r.state, r.bases[0]), born_table(r.state, r.bases[1]),
                     born_table(r.state, r.bases[2]), born_table(r.state, r.bases[3])},
                    solos);
}

// ---------------------------------------------------------------------------
// Unitary frames from complex Givens rotations.
//
// A rotation on coordinates (p, q) with angle t and phase f acts as
//   [[cos t, -e^{-if} sin t], [e^{if} sin t, cos t]].
// Six rotations on the pairs below, multiplied left to right, reach every
// 4x4 unitary up to a phase on each column; column phases do not change
// Born probabilities, so 12 reals parameterize every measurement frame.

inline constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kGivensPairs{
    {{2, 3}, {1, 2}, {0, 1}, {2, 3}, {1, 2}, {2, 3}}};
inline constexpr std::size_t kFrameParameters = 12;

using Matrix4 = std::array<std::array<cplx, 4>, 4>; ///< row-major

inline Matrix4 identity4() {
    Matrix4 m{};
    for (std::size_t i = 0; i < 4; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline Frame4 columns(const Matrix4 &m) {
    Frame4 f;
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t r = 0; r < 4; ++r) {
            f[c][r] = m[r][c];
        }
    }
    return f;
}

/// Frame for params = (t_1, f_1, ..., t_6, f_6).
inline Frame4 givens_frame(std::span<const double> params) {
    if (params.size() != kFrameParameters) {
        throw InvalidArgument("givens_frame expects 12 parameters");
    }
    Matrix4 m = identity4();
    for (std::size_t k = 0; k < kGivensPairs.size(); ++k) {
        const auto [p, q] = kGivensPairs[k];
        const double c = std::cos(params[2 * k]);
        const double s = std::sin(params[2 * k]);
        const cplx e = std::polar(1.0, params[2 * k + 1]);
        const cplx rpp = c, rpq = -std::conj(e) * s, rqp = e * s, rqq = c;
        for (std::size_t r = 0; r < 4; ++r) {
            const cplx mp = m[r][p];
            const cplx mq = m[r][q];
            m[r][p] = mp * rpp + mq * rqp;
            m[r][q] = mp * rpq + mq * rqq;
        }
    }
    return columns(m);
}

/// Inverse of givens_frame up to column phases: parameters whose frame has
/// the same vectors as `frame` (each possibly times a unit phase).
inline std::array<double, kFrameParameters> givens_parameters(const Frame4 &frame) {
    if (orthonormality_error(frame) > 1e-9) {
        throw InvalidArgument("givens_parameters: frame is not orthonormal");
    }
    Matrix4 u{};
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t r = 0; r < 4; ++r) {
            u[r][c] = frame[c][r];
        }
    }
    // Zero the strictly lower triangle column by column with row rotations
    // G_6 ... G_1 U = D; then U = G_1^-1 ... G_6^-1 D and G^-1 flips the angle.
    std::array<double, kFrameParameters> params{};
    std::size_t k = 0;
    for (std::size_t col = 0; col < 3; ++col) {
        for (std::size_t q = 3; q > col; --q) {
            const std::size_t p = q - 1;
            const cplx a = u[p][col];
            const cplx b = u[q][col];
            const double theta = -std::atan2(std::abs(b), std::abs(a));
            const double phase = (std::abs(b) > 0.0 ? std::arg(b) : 0.0) -
                                 (std::abs(a) > 0.0 ? std::arg(a) : 0.0);
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const cplx e = std::polar(1.0, phase);
            for (std::size_t j = 0; j < 4; ++j) {
                const cplx up = u[p][j];
                const cplx uq = u[q][j];
                u[p][j] = c * up - std::conj(e) * s * uq;
                u[q][j] = e * s * up + c * uq;
            }
            params[2 * k] = -theta;
            params[2 * k + 1] = phase;
            ++k;
        }
    }
    return params;
}

// ---------------------------------------------------------------------------
// Closed forms.

inline TwoQubitState basis_state(std::size_t cell) {
    Vec4 v{};
    v.at(cell) = 1.0;
    return TwoQubitState::from_amplitudes(v);
}

/// (|12> + |21>)/sqrt(2): the anti-correlated state of the vessels siphon pair.
inline TwoQubitState split_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return TwoQubitState::from_amplitudes({0.0, h, h, 0.0});
}

/// Spin singlet (|12> - |21>)/sqrt(2).
inline TwoQubitState singlet_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return TwoQubitState::from_amplitudes({0.0, h, -h, 0.0});
}

/// Measurement whose outcome-11 vector is the split state itself, so the
/// outcome 11 is certain; the other three vectors complete the frame.
inline MeasurementBasis4 split_projecting_basis() {
    const double h = 1.0 / std::sqrt(2.0);
    return MeasurementBasis4::entangled(Frame4{{{0.0, h, h, 0.0},
                                                {0.0, h, -h, 0.0},
                                                {1.0, 0.0, 0.0, 0.0},
                                                {0.0, 0.0, 0.0, 1.0}}});
}

/// Exact representation of the vessels scenario: siphon-siphon is a product
/// measurement in the computational basis; every setting involving a spoon
/// test is an entangled measurement.
inline Representation vessels_representation() {
    return {split_state(),
            {MeasurementBasis4::computational(), split_projecting_basis(),
             split_projecting_basis(), split_projecting_basis()},
            {}};
}

/// Singlet with each side measured in the x-z plane at the given angle.
inline Representation singlet_representation(const std::array<double, 4> &angles) {
    std::array<LocalBasis, 4> local;
    for (auto side : kAllSides) {
        local[index(side)] = LocalBasis{angles[index(side)], 0.0};
    }
    return Representation::product(singlet_state(), local);
}

/// Largest marginal-law discrepancy of the product representation built from
/// `local` (one basis per side, indexed by Side).
inline double marginal_identity_check(const TwoQubitState &state,
                                      const std::array<LocalBasis, 4> &local) {
    return audit_max_discrepancy(
        full_marginal_audit(predict(Representation::product(state, local)), 0.0));
}

// ---------------------------------------------------------------------------
// Random draws.

/// Unitarily invariant random pure state (normalized complex Gaussian).
inline TwoQubitState random_state(Substream &rng) {
    std::normal_distribution<double> normal;
    Vec4 v;
    for (auto &c : v) {
        const double re = normal(rng);
        c = cplx(re, normal(rng));
    }
    return TwoQubitState::normalized(v);
}

/// Local basis with its Bloch direction uniform on the sphere.
inline LocalBasis random_local_basis(Substream &rng) {
    const double theta = std::acos(2.0 * rng.uniform() - 1.0);
    return {theta, 2.0 * std::numbers::pi * rng.uniform()};
}

} // namespace bell_lab
