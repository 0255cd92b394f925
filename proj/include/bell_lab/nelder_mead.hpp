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
 * Nelder-Mead downhill simplex minimizer.
 *
 * With `adaptive` set, the reflection/expansion/contraction/shrink
 * coefficients scale with dimension as proposed by Gao & Han (2012), which
 * keeps the method effective beyond a handful of parameters.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace bell_lab {

struct NelderMeadOptions {
    double initial_step = 0.5;
    std::size_t max_evaluations = 50000;
    double x_tolerance = 1e-10; ///< stop when every vertex is this close to the best (inf-norm)
    double f_tolerance = 0.0;   ///< stop when best and worst values differ by at most this
    bool adaptive = true;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    bool converged = false;
};

template <class Objective>
NelderMeadResult nelder_mead(Objective &&f, const std::vector<double> &x0,
                             const NelderMeadOptions &opt = {}) {
    const std::size_t n = x0.size();
    if (n == 0) {
        throw InvalidArgument("nelder_mead: empty parameter vector");
    }
    const double dim = static_cast<double>(n);
    const double alpha = 1.0;
    const double gamma = opt.adaptive ? 1.0 + 2.0 / dim : 2.0;
    const double rho = opt.adaptive ? 0.75 - 1.0 / (2.0 * dim) : 0.5;
    const double sigma = opt.adaptive ? 1.0 - 1.0 / dim : 0.5;

    NelderMeadResult res;
    auto eval = [&](const std::vector<double> &x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isnan(v) ? HUGE_VAL : v;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += opt.initial_step;
    }
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = eval(pts[i]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    auto combine = [&](std::vector<double> &out, const std::vector<double> &base,
                       const std::vector<double> &toward, double t) {
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = base[j] + t * (toward[j] - base[j]);
        }
    };

    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        {
            std::vector<std::vector<double>> p2(n + 1);
            std::vector<double> v2(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                p2[i] = std::move(pts[order[i]]);
                v2[i] = vals[order[i]];
            }
            pts.swap(p2);
            vals.swap(v2);
        }

        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                diameter = std::max(diameter, std::abs(pts[i][j] - pts[0][j]));
            }
        }
        if (diameter < opt.x_tolerance || vals[n] - vals[0] <= opt.f_tolerance) {
            res.converged = true;
            break;
        }
        if (res.evaluations >= opt.max_evaluations) {
            break;
        }
        ++res.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                centroid[j] += pts[i][j];
            }
        }
        for (auto &c : centroid) {
            c /= dim;
        }

        combine(xr, centroid, pts[n], -alpha);
        const double fr = eval(xr);
        if (fr < vals[0]) {
            combine(xe, centroid, xr, gamma);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        const bool outside = fr < vals[n];
        combine(xc, centroid, outside ? xr : pts[n], rho);
        const double fc = eval(xc);
        if (outside ? fc <= fr : fc < vals[n]) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            combine(pts[i], pts[0], pts[i], sigma);
            vals[i] = eval(pts[i]);
        }
    }

    res.x = pts[0];
    res.value = vals[0];
    return res;
}

} // namespace bell_lab
