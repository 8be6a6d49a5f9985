/*
* Copyright (C) 2026 heroin-oc contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#pragma once

#include "heroin_oc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace heroin_oc {

struct CubicRoot {
    double value;
    int multiplicity; ///< 1, or 2/3 when the discriminant is numerically zero
};

/// c[0]*x^3 + c[1]*x^2 + c[2]*x + c[3]
inline double eval_cubic(const std::array<double, 4>& c, double x) noexcept
{
    return ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
}

/// Sum of |c_k x^(3-k)|, the natural magnitude to measure a residual against.
inline double cubic_scale(const std::array<double, 4>& c, double x) noexcept
{
    const double ax = std::abs(x);
    return ((std::abs(c[0]) * ax + std::abs(c[1])) * ax + std::abs(c[2])) * ax + std::abs(c[3]);
}

/**
 * All real roots of a cubic with nonzero leading coefficient, ascending.
 *
 * Trigonometric form when there are three distinct real roots, Cardano
 * otherwise; every root then gets two Newton steps on the original
 * polynomial. Roots whose depressed-cubic discriminant is within 1e-12
 * (relative) of zero are merged and flagged. Throws RootQualityError when a
 * polished root has |f(x)| > 1e-10 * cubic_scale(c, x).
 */
inline std::vector<CubicRoot> solve_cubic(const std::array<double, 4>& c)
{
    if (c[0] == 0.0 || !std::isfinite(c[0]) || !std::isfinite(c[1]) || !std::isfinite(c[2]) ||
        !std::isfinite(c[3])) {
        throw DomainError("cubic requires finite coefficients and a nonzero leading term");
    }
    const double b = c[1] / c[0];
    const double cc = c[2] / c[0];
    const double d = c[3] / c[0];
    const double shift = b / 3.0;
    const double p = cc - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;

    const double hq = 0.5 * q;
    const double tp = p / 3.0;
    const double disc = hq * hq + tp * tp * tp;
    const double disc_scale = hq * hq + std::abs(tp * tp * tp);

    std::vector<CubicRoot> roots;
    if (disc_scale == 0.0 || std::abs(disc) <= 1e-12 * disc_scale) {
        if (std::abs(p) <= 1e-12 * (1.0 + b * b)) {
            roots.push_back({-shift, 3});
        }
        else {
            const double r = std::cbrt(-hq);
            roots.push_back({2.0 * r - shift, 1});
            roots.push_back({-r - shift, 2});
        }
    }
    else if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        // Avoid cancellation: take the larger-magnitude branch first.
        const double big = std::cbrt(-hq + (hq <= 0.0 ? sq : -sq));
        const double y = big + (big != 0.0 ? -tp / big : 0.0);
        roots.push_back({y - shift, 1});
    }
    else {
        const double r = 2.0 * std::sqrt(-tp);
        const double arg = std::clamp(-hq / std::sqrt(-tp * tp * tp), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back({r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - shift, 1});
        }
    }

    for (auto& root : roots) {
        for (int it = 0; it < 2; ++it) {
            const double f = eval_cubic(c, root.value);
            const double df = (3.0 * c[0] * root.value + 2.0 * c[1]) * root.value + c[2];
            if (df == 0.0 || !std::isfinite(f / df)) {
                break;
            }
            root.value -= f / df;
        }
        const double res = std::abs(eval_cubic(c, root.value));
        if (root.multiplicity == 1 && res > 1e-10 * cubic_scale(c, root.value)) {
            throw RootQualityError("cubic root residual above tolerance after polishing");
        }
    }
    std::sort(roots.begin(), roots.end(), [](const CubicRoot& l, const CubicRoot& r) { return l.value < r.value; });
    return roots;
}

} // namespace heroin_oc
