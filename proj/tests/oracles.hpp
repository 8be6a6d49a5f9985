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

#include "heroin_oc/optimal_control.hpp"

#include <algorithm>
#include <cmath>

namespace heroin_oc::test {

/// Largest discrepancy between adjoint_rhs and -dH/dx_k by central
/// differences (h = 1e-6 * max(|x_k|, 1)), relative to max(|dH/dx_k|, 1).
inline double adjoint_fd_error(const ModelParams& m, const State5& x, const ControlPair& u, const Adjoint5& l)
{
    const Vec5 a = adjoint_rhs(x, u, l, m);
    const Vec5 x0 = x.to_vec();
    double worst = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        const double h = 1e-6 * std::max(std::abs(x0[k]), 1.0);
        Vec5 hi = x0, lo = x0;
        hi[k] += h;
        lo[k] -= h;
        const double fd =
            -(hamiltonian(State5::from_vec(hi), u, l, m) - hamiltonian(State5::from_vec(lo), u, l, m)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - a[k]) / std::max(std::abs(a[k]), 1.0));
    }
    return worst;
}

/// Largest |u - restrict(characterize(x, lambda))| over the grid.
inline double self_consistency(const SweepResult& r, const ModelParams& m, ControlCase c)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < r.controls.grid.n_nodes(); ++i) {
        ControlPair v = characterize_controls(State5::from_vec(r.state.values[i]),
                                              Adjoint5::from_vec(r.adjoint.values[i]), m);
        if (c == ControlCase::case1) {
            v.u2 = 0.0;
        }
        if (c == ControlCase::case2) {
            v.u1 = 0.0;
        }
        worst = std::max({worst, std::abs(v.u1 - r.controls.u1[i]), std::abs(v.u2 - r.controls.u2[i])});
    }
    return worst;
}

} // namespace heroin_oc::test
