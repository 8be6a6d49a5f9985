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

#include "heroin_oc/equilibria.hpp"
#include "heroin_oc/errors.hpp"
#include "heroin_oc/params.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace heroin_oc {

struct SensitivityEntry {
    std::string param;
    double derivative;    ///< analytic dR0/dparam
    double fd_derivative; ///< central finite difference, relative step 1e-6
    double index;         ///< |param / R0 * dR0/dparam|
    int sign;             ///< sign of `derivative`
    bool extension;       ///< true for Lambda, mu, delta1
};

struct SensitivityReport {
    double R0;
    std::vector<SensitivityEntry> entries;

    const SensitivityEntry* find(const std::string& name) const
    {
        for (const auto& e : entries) {
            if (e.param == name) {
                return &e;
            }
        }
        return nullptr;
    }
};

/// Normalized forward sensitivity indices of R0 for beta1, p, Lambda, mu and
/// delta1. Every analytic partial is checked against a central difference;
/// a relative mismatch above 1e-6 raises ConsistencyError.
inline SensitivityReport sensitivity_indices(const ModelParams& params)
{
    if (params.p < 0.0) {
        throw PreconditionError("sensitivity requires p >= 0");
    }
    const double R0 = basic_reproduction_number(params);
    if (!(R0 > 0.0)) {
        throw DomainError("sensitivity indices are undefined for R0 = 0");
    }
    const double L  = params.Lambda;
    const double b1 = params.beta1;
    const double mu = params.mu;
    const double Q1 = params.Q1();

    struct Analytic {
        const char* name;
        double d;
        bool ext;
        double step_scale; ///< FD step is 1e-6 * max(|value|, step_scale)
    };
    const Analytic partials[] = {
        {"beta1", L / (mu * Q1), false, 0.0},
        {"p", -b1 * L / (mu * Q1 * Q1), false, Q1},
        {"Lambda", b1 / (mu * Q1), true, 0.0},
        {"mu", -b1 * L * (Q1 + mu) / (mu * mu * Q1 * Q1), true, 0.0},
        {"delta1", -b1 * L / (mu * Q1 * Q1), true, Q1},
    };

    SensitivityReport rep{R0, {}};
    for (const auto& pa : partials) {
        const double value = *get_param(params, pa.name);
        const double base = std::max(std::abs(value), pa.step_scale);
        const double h = base > 0.0 ? 1e-6 * base : 1e-6;
        ModelParams hi = params;
        ModelParams lo = params;
        *find_param(hi, pa.name) += h;
        *find_param(lo, pa.name) -= h;
        // At a zero parameter the lower point may leave the valid region; the
        // formula is polynomial/rational there, so evaluate it directly.
        const double fd = (hi.beta1 * hi.Lambda / (hi.mu * hi.Q1()) - lo.beta1 * lo.Lambda / (lo.mu * lo.Q1())) /
                          (2.0 * h);
        if (std::abs(fd - pa.d) > 1e-6 * std::max(std::abs(pa.d), 1e-300)) {
            throw ConsistencyError(std::string("analytic and finite-difference dR0/d") + pa.name + " disagree");
        }
        const int sign = pa.d > 0.0 ? 1 : (pa.d < 0.0 ? -1 : 0);
        rep.entries.push_back({pa.name, pa.d, fd, std::abs(value / R0 * pa.d), sign, pa.ext});
    }
    return rep;
}

} // namespace heroin_oc
