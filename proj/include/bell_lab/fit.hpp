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
 * Least-squares fitting of two-qubit representations to a target Scenario
 * with multi-start Nelder-Mead.
 *
 * Parameter layout (all reals, unconstrained):
 *   state     6   magnitudes as hyperspherical angles (a, b, c) plus the
 *                 phases of amplitudes 12, 21, 22 relative to amplitude 11
 *   product   8   (theta, phi) for the local bases of A, A', B, B'
 *   entangled 48  12 Givens parameters per setting (AB, AB', A'B, A'B'),
 *                 plus (theta, phi) per side whose solo table is fitted
 *
 * Product measurements share one local basis per side across settings,
 * which is what makes them local.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "core.hpp"
#include "nelder_mead.hpp"
#include "qubit.hpp"
#include "rng.hpp"

namespace bell_lab {

enum class RepresentationClass { product, entangled };

inline std::string_view to_string(RepresentationClass c) {
    return c == RepresentationClass::product ? "product" : "entangled";
}

inline constexpr std::size_t kStateParameters = 6;

/// psi = (cos a, sin a cos b e^{i f1}, sin a sin b cos c e^{i f2}, sin a sin b sin c e^{i f3}).
inline TwoQubitState decode_state(std::span<const double> p) {
    const double sa = std::sin(p[0]);
    const double sb = std::sin(p[1]);
    return TwoQubitState::normalized({cplx(std::cos(p[0]), 0.0),
                                      std::polar(sa * std::cos(p[1]), p[3]),
                                      std::polar(sa * sb * std::cos(p[2]), p[4]),
                                      std::polar(sa * sb * std::sin(p[2]), p[5])});
}

/// Parameters of `state` after removing its global phase.
inline std::array<double, kStateParameters> encode_state(const TwoQubitState &state) {
    Vec4 a = state.amplitudes();
    for (const auto &c : a) {
        if (std::abs(c) > 1e-300) {
            const cplx phase = std::conj(c) / std::abs(c);
            for (auto &x : a) {
                x *= phase;
            }
            break;
        }
    }
    std::array<double, kStateParameters> p{};
    p[0] = std::atan2(std::sqrt(std::norm(a[1]) + std::norm(a[2]) + std::norm(a[3])),
                      a[0].real());
    p[1] = std::atan2(std::sqrt(std::norm(a[2]) + std::norm(a[3])), std::abs(a[1]));
    p[2] = std::atan2(std::abs(a[3]), std::abs(a[2]));
    p[3] = std::arg(a[1]);
    p[4] = std::arg(a[2]);
    p[5] = std::arg(a[3]);
    return p;
}

/// Maps a flat parameter vector to a Representation for one class.
class Parameterization {
  public:
    Parameterization(RepresentationClass cls, std::array<bool, 4> solo_sides = {})
        : cls_(cls), solo_sides_(solo_sides) {}

    RepresentationClass representation_class() const { return cls_; }

    std::size_t size() const {
        if (cls_ == RepresentationClass::product) {
            return kStateParameters + 8;
        }
        std::size_t n = kStateParameters + 4 * kFrameParameters;
        for (bool s : solo_sides_) {
            n += s ? 2 : 0;
        }
        return n;
    }

    Representation decode(std::span<const double> p) const {
        if (p.size() != size()) {
            throw InvalidArgument("parameter vector has the wrong length");
        }
        const auto state = decode_state(p.first(kStateParameters));
        auto rest = p.subspan(kStateParameters);
        if (cls_ == RepresentationClass::product) {
            std::array<LocalBasis, 4> local;
            for (auto side : kAllSides) {
                local[index(side)] = {rest[2 * index(side)], rest[2 * index(side) + 1]};
            }
            auto r = Representation::product(state, local);
            for (auto side : kAllSides) {
                if (solo_sides_[index(side)]) {
                    r.solo_bases[index(side)] = local[index(side)];
                }
            }
            return r;
        }
        auto frame = [&](Setting s) {
            return MeasurementBasis4::entangled(
                givens_frame(rest.subspan(kFrameParameters * index(s), kFrameParameters)));
        };
        Representation r{state,
                         {frame(Setting::AB), frame(Setting::ABp), frame(Setting::ApB),
                          frame(Setting::ApBp)},
                         {}};
        std::size_t off = 4 * kFrameParameters;
        for (auto side : kAllSides) {
            if (solo_sides_[index(side)]) {
                r.solo_bases[index(side)] = LocalBasis{rest[off], rest[off + 1]};
                off += 2;
            }
        }
        return r;
    }

    /// Parameters reproducing `r` (up to global and per-vector phases).
    std::vector<double> encode(const Representation &r) const {
        std::vector<double> p;
        p.reserve(size());
        const auto st = encode_state(r.state);
        p.insert(p.end(), st.begin(), st.end());
        if (cls_ == RepresentationClass::product) {
            const auto &ab = r.basis(Setting::AB).local_pair();
            const auto &apbp = r.basis(Setting::ApBp).local_pair();
            if (!ab || !apbp) {
                throw InvalidArgument("product parameterization needs product bases");
            }
            for (const auto &lb : {ab->first, apbp->first, ab->second, apbp->second}) {
                p.push_back(lb.theta);
                p.push_back(lb.phi);
            }
            return p;
        }
        for (auto s : kAllSettings) {
            const auto g = givens_parameters(r.basis(s).vectors());
            p.insert(p.end(), g.begin(), g.end());
        }
        for (auto side : kAllSides) {
            if (solo_sides_[index(side)]) {
                const auto lb = r.solo_bases[index(side)].value_or(LocalBasis{});
                p.push_back(lb.theta);
                p.push_back(lb.phi);
            }
        }
        return p;
    }

  private:
    RepresentationClass cls_;
    std::array<bool, 4> solo_sides_;
};

struct FitError {
    double loss = 0.0;          ///< sum of squared cell errors
    double residual_linf = 0.0; ///< largest absolute cell error
};

/// Compares all 16 joint cells plus both cells of every solo table the target records.
inline FitError fit_error(const Scenario &target, const Scenario &predicted) {
    FitError e;
    auto add = [&](double want, double got) {
        const double d = got - want;
        e.loss += d * d;
        e.residual_linf = std::max(e.residual_linf, std::abs(d));
    };
    for (auto s : kAllSettings) {
        for (std::size_t k = 0; k < 4; ++k) {
            add(target.table(s).cells()[k], predicted.table(s).cells()[k]);
        }
    }
    for (auto side : kAllSides) {
        if (const auto &t = target.solo(side)) {
            const auto &p = predicted.solo(side);
            add(t->p1(), p ? p->p1() : 0.0);
            add(t->p2(), p ? p->p2() : 0.0);
        }
    }
    return e;
}

struct OptimizerConfig {
    std::size_t restarts = 20;            ///< random restarts, in addition to any seeds
    std::size_t max_evaluations = 50000;  ///< per restart
    double x_tolerance = 1e-10;           ///< simplex diameter
    /// Spread of loss values across the simplex. Needed because the frame
    /// parameterization has flat directions at an exact fit, so the simplex
    /// cannot shrink below x_tolerance there.
    double f_tolerance = 1e-15;
    double initial_step = 0.5;
    /// Extra simplex rebuilds around the best point of a restart, sharing its budget.
    std::size_t polish_passes = 4;
    unsigned workers = 1;
};

struct FitResult {
    Representation representation;
    RepresentationClass representation_class = RepresentationClass::product;
    std::vector<double> parameters;
    double loss = 0.0;
    double residual_linf = 0.0;
    std::size_t iterations = 0;  ///< Nelder-Mead iterations of the winning restart
    std::size_t evaluations = 0; ///< objective evaluations over all restarts
    std::size_t best_restart = 0;
    bool converged = false;      ///< false: the winning restart hit its evaluation budget
};

namespace detail {

struct RestartOutcome {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

template <class Objective>
RestartOutcome run_restart(Objective &objective, std::vector<double> x0,
                           const OptimizerConfig &cfg) {
    RestartOutcome out;
    out.x = std::move(x0);
    NelderMeadOptions opt;
    opt.initial_step = cfg.initial_step;
    opt.x_tolerance = cfg.x_tolerance;
    opt.f_tolerance = cfg.f_tolerance;
    for (std::size_t pass = 0; pass <= cfg.polish_passes; ++pass) {
        if (out.evaluations >= cfg.max_evaluations) {
            break;
        }
        opt.max_evaluations = cfg.max_evaluations - out.evaluations;
        const auto r = nelder_mead(objective, out.x, opt);
        out.evaluations += r.evaluations;
        out.iterations += r.iterations;
        const bool improved = r.value < out.value;
        if (r.value <= out.value) {
            out.x = r.x;
            out.value = r.value;
        }
        out.converged = r.converged;
        if (!r.converged || (pass > 0 && !improved)) {
            break;
        }
        // Rebuild a smaller simplex around the best point and confirm.
        opt.initial_step = std::max(cfg.x_tolerance * 10.0, opt.initial_step * 0.1);
    }
    return out;
}

} // namespace detail

/// Best representation of `cls` for `target`. `seeds` are tried first (as
/// starting points); the remaining starts are uniform in [-pi, pi]^n drawn
/// from substreams of `seed`. Restarts are independent and the winner is the
/// lowest loss, ties going to the lowest restart index.
inline FitResult fit(const Scenario &target, RepresentationClass cls,
                     const OptimizerConfig &cfg = {}, std::uint64_t seed = 0,
                     const std::vector<Representation> &seeds = {}) {
    std::array<bool, 4> solo_sides{};
    for (auto side : kAllSides) {
        solo_sides[index(side)] = target.solo(side).has_value();
    }
    const Parameterization param(cls, solo_sides);
    const std::size_t total = seeds.size() + cfg.restarts;
    if (total == 0) {
        throw InvalidArgument("fit: no restarts requested");
    }

    std::vector<std::vector<double>> starts(total);
    for (std::size_t r = 0; r < total; ++r) {
        if (r < seeds.size()) {
            starts[r] = param.encode(seeds[r]);
            continue;
        }
        Substream rng(seed, streams::fit_restart(r), 0);
        starts[r].resize(param.size());
        for (auto &x : starts[r]) {
            x = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
        }
    }

    std::vector<detail::RestartOutcome> outcomes(total);
    auto work = [&](std::size_t first, std::size_t stride) {
        auto objective = [&](const std::vector<double> &x) {
            return fit_error(target, predict(param.decode(x))).loss;
        };
        for (std::size_t r = first; r < total; r += stride) {
            outcomes[r] = detail::run_restart(objective, starts[r], cfg);
        }
    };
    const unsigned workers =
        std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(total)));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w, workers);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    std::size_t best = 0;
    std::size_t evaluations = 0;
    for (std::size_t r = 0; r < total; ++r) {
        evaluations += outcomes[r].evaluations;
        if (outcomes[r].value < outcomes[best].value) {
            best = r;
        }
    }
    const auto &win = outcomes[best];
    auto rep = param.decode(win.x);
    const auto err = fit_error(target, predict(rep));
    return {std::move(rep), cls,  win.x,     err.loss, err.residual_linf,
            win.iterations, evaluations, best, win.converged};
}

/// Lower bound on the largest cell error of any product-class fit: product
/// predictions give a side the same marginal in both of its contexts, so the
/// target's marginal gap g spreads over the 4 cells summed in the two
/// marginals, and some cell is off by at least g/4.
inline double product_residual_lower_bound(const Scenario &target) {
    double gap = 0.0;
    for (auto side : kAllSides) {
        const auto ctx = contexts_of(side);
        gap = std::max(gap, std::abs(target.marginal(side, ctx[0], Outcome::One) -
                                     target.marginal(side, ctx[1], Outcome::One)));
    }
    return gap / 4.0;
}

} // namespace bell_lab
