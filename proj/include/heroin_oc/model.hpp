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
#include "heroin_oc/params.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace heroin_oc {

using Vec5 = std::array<double, 5>;

/// Compartment indices, ordered (S, U1, U2, E, Z).
enum Compartment : std::size_t { iS = 0, iU1 = 1, iU2 = 2, iE = 3, iZ = 4 };

/// One point of the state space. Z is an information density, the rest are
/// population densities.
struct State5 {
    double S  = 0.0;
    double U1 = 0.0;
    double U2 = 0.0;
    double E  = 0.0;
    double Z  = 0.0;

    /// Total (human) population.
    double N() const noexcept { return S + U1 + U2 + E; }

    Vec5 to_vec() const noexcept { return {S, U1, U2, E, Z}; }
    static State5 from_vec(const Vec5& v) noexcept { return {v[0], v[1], v[2], v[3], v[4]}; }

    friend bool operator==(const State5&, const State5&) = default;
};

struct ControlPair {
    double u1 = 0.0; ///< prevention-information response intensity
    double u2 = 0.0; ///< treatment intensity (1/day)
};

/// Default initial state for the preset scenarios.
inline constexpr State5 default_initial_state{15.0, 5.0, 2.0, 1.25, 1.0};

inline bool is_admissible(const ControlPair& u, const ModelParams& params) noexcept
{
    return u.u1 >= 0.0 && u.u1 <= params.u1max && u.u2 >= 0.0 && u.u2 <= params.u2max;
}

namespace detail {

inline void require_finite(const State5& x)
{
    for (double v : x.to_vec()) {
        if (!std::isfinite(v)) {
            throw DomainError("state has non-finite component");
        }
    }
}

// Right-hand side with response intensity `u1` and treatment rate `u2`,
// unchecked. Both public entry points funnel through here.
inline Vec5 model_rhs(const ModelParams& m, const State5& x, double u1, double u2) noexcept
{
    const double initiation = m.beta1 * x.S * x.U1;
    const double response   = u1 * m.rho * x.S * x.Z;
    const double relapse    = m.beta2 * x.U1 * x.U2;
    const double info       = m.a * x.U1 / (1.0 + m.b * x.U1);
    return {
        m.Lambda - initiation - m.mu * x.S + m.theta * x.E - response,
        initiation - u2 * x.U1 + relapse - (m.mu + m.delta1) * x.U1,
        u2 * x.U1 - relapse - (m.mu + m.delta2) * x.U2,
        response - (m.mu + m.theta) * x.E,
        info - m.a0 * x.Z,
    };
}

} // namespace detail

/// Uncontrolled model: constant treatment rate `p` and a constant response
/// intensity `u1_fixed` multiplying rho*S*Z.
inline Vec5 rhs_uncontrolled(const ModelParams& params, const State5& x, double u1_fixed = 1.0)
{
    detail::require_finite(x);
    if (!std::isfinite(u1_fixed)) {
        throw DomainError("u1_fixed must be finite");
    }
    return detail::model_rhs(params, x, u1_fixed, params.p);
}

/// Controlled model: u1 scales the information response, u2 replaces p.
inline Vec5 rhs_controlled(const ModelParams& params, const State5& x, const ControlPair& u)
{
    detail::require_finite(x);
    if (!is_admissible(u, params)) {
        throw PreconditionError("control outside the admissible set [0, umax]");
    }
    return detail::model_rhs(params, x, u.u1, u.u2);
}

struct FeasibilityBounds {
    double N_bound; ///< max(N(0), Lambda/mu)
    double Z_bound; ///< max(Z(0), a*Lambda/(a0*mu))
};

inline FeasibilityBounds feasibility_bounds(const ModelParams& params, const State5& x0) noexcept
{
    return {
        std::max(x0.N(), params.Lambda / params.mu),
        std::max(x0.Z, params.a * params.Lambda / (params.a0 * params.mu)),
    };
}

} // namespace heroin_oc
