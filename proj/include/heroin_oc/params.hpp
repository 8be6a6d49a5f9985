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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace heroin_oc {

/**
 * Rate constants of the heroin model together with the cost weights and the
 * control bounds of the optimal control problem. Rates are per day.
 */
struct ModelParams {
    double Lambda = 0.0; ///< recruitment into S (persons/day)
    double beta1  = 0.0; ///< drug-use initiation contact rate
    double beta2  = 0.0; ///< relapse contact rate of treated users
    double mu     = 0.0; ///< natural death rate
    double p      = 0.0; ///< treatment entry rate, uncontrolled model only
    double rho    = 0.0; ///< information interaction rate
    double delta1 = 0.0; ///< heroin-induced death rate, untreated
    double delta2 = 0.0; ///< heroin-induced death rate, treated
    double theta  = 0.0; ///< drop-out rate from preventive education
    double a      = 0.0; ///< information growth rate
    double b      = 0.0; ///< information saturation constant
    double a0     = 0.0; ///< information degradation rate
    double B1     = 0.0; ///< weight of untreated users in the cost
    double B2     = 0.0; ///< weight of u1^4
    double B3     = 0.0; ///< weight of u2^2
    double u1max  = 1.0;
    double u2max  = 1.0;

    double Q1() const noexcept { return mu + delta1 + p; }
    double Q2() const noexcept { return mu + delta2; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ParamField {
    std::string_view name;
    double ModelParams::*member;
};

/// Every field of ModelParams by its external (JSON / CLI) name.
inline constexpr std::array<ParamField, 17> param_fields{{
    {"Lambda", &ModelParams::Lambda}, {"beta1", &ModelParams::beta1},
    {"beta2", &ModelParams::beta2},   {"mu", &ModelParams::mu},
    {"p", &ModelParams::p},           {"rho", &ModelParams::rho},
    {"delta1", &ModelParams::delta1}, {"delta2", &ModelParams::delta2},
    {"theta", &ModelParams::theta},   {"a", &ModelParams::a},
    {"b", &ModelParams::b},           {"a0", &ModelParams::a0},
    {"B1", &ModelParams::B1},         {"B2", &ModelParams::B2},
    {"B3", &ModelParams::B3},         {"u1max", &ModelParams::u1max},
    {"u2max", &ModelParams::u2max},
}};

inline double* find_param(ModelParams& params, std::string_view name)
{
    for (const auto& f : param_fields) {
        if (f.name == name) {
            return &(params.*f.member);
        }
    }
    return nullptr;
}

inline std::optional<double> get_param(const ModelParams& params, std::string_view name)
{
    for (const auto& f : param_fields) {
        if (f.name == name) {
            return params.*f.member;
        }
    }
    return std::nullopt;
}

/// Throws ConfigError naming the first field that breaks an invariant.
inline void validate(const ModelParams& params)
{
    for (const auto& f : param_fields) {
        if (!std::isfinite(params.*f.member)) {
            throw ConfigError(std::string(f.name), "value must be finite");
        }
        if (params.*f.member < 0.0) {
            throw ConfigError(std::string(f.name), "value must be nonnegative");
        }
    }
    if (!(params.mu > 0.0)) {
        throw ConfigError("mu", "natural death rate must be positive");
    }
    if (!(params.a0 > 0.0)) {
        throw ConfigError("a0", "information degradation rate must be positive");
    }
    if (!(params.B2 > 0.0)) {
        throw ConfigError("B2", "weight must be positive");
    }
    if (!(params.B3 > 0.0)) {
        throw ConfigError("B3", "weight must be positive");
    }
    if (!(params.u1max > 0.0 && params.u1max <= 1.0)) {
        throw ConfigError("u1max", "control bound must lie in (0, 1]");
    }
    if (!(params.u2max > 0.0 && params.u2max <= 1.0)) {
        throw ConfigError("u2max", "control bound must lie in (0, 1]");
    }
}

namespace presets {

/// Parameters with R0 < 1 (drug-free regime). Cost weights and bounds are
/// are copied from table2().
inline ModelParams table1()
{
    ModelParams m;
    m.Lambda = 2.0;
    m.beta1  = 0.0002;
    m.beta2  = 0.0001;
    m.mu     = 0.125;
    m.p      = 0.0;
    m.rho    = 0.04;
    m.delta1 = 0.05;
    m.delta2 = 0.06;
    m.theta  = 0.001;
    m.a      = 0.01;
    m.b      = 1.0;
    m.a0     = 0.06;
    m.B1     = 6.0;
    m.B2     = 120.0;
    m.B3     = 30.0;
    m.u1max  = 1.0;
    m.u2max  = 1.0;
    return m;
}

/// Endemic scenario used for the optimal control experiments.
inline ModelParams table2()
{
    ModelParams m;
    m.Lambda = 0.7;
    m.beta1  = 0.01;
    m.beta2  = 0.0008;
    m.mu     = 0.07;
    m.p      = 0.0;
    m.rho    = 0.04;
    m.delta1 = 0.05;
    m.delta2 = 0.06;
    m.theta  = 0.001;
    m.a      = 0.01;
    m.b      = 1.0;
    m.a0     = 0.06;
    m.B1     = 6.0;
    m.B2     = 120.0;
    m.B3     = 30.0;
    m.u1max  = 1.0;
    m.u2max  = 1.0;
    return m;
}

inline std::optional<ModelParams> by_name(std::string_view name)
{
    if (name == "table1") {
        return table1();
    }
    if (name == "table2") {
        return table2();
    }
    return std::nullopt;
}

} // namespace presets
} // namespace heroin_oc
