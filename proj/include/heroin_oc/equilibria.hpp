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

#include "heroin_oc/cubic.hpp"
#include "heroin_oc/errors.hpp"
#include "heroin_oc/model.hpp"
#include "heroin_oc/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string_view>
#include <vector>

namespace heroin_oc {

/// E0 = (Lambda/mu, 0, 0, 0, 0).
inline State5 drug_free_equilibrium(const ModelParams& params)
{
    if (params.mu == 0.0) {
        throw DomainError("drug-free equilibrium requires mu > 0");
    }
    return {params.Lambda / params.mu, 0.0, 0.0, 0.0, 0.0};
}

/// R0 = beta1*Lambda / (mu*(mu + delta1 + p)).
inline double basic_reproduction_number(const ModelParams& params)
{
    if (!(params.mu > 0.0)) {
        throw PreconditionError("R0 requires mu > 0");
    }
    return params.beta1 * params.Lambda / (params.mu * params.Q1());
}

/// Linearisation at E0 restricted to the infected compartments (U1, U2, Z).
struct NextGenDecomposition {
    Eigen::Matrix3d F; ///< new addictions
    Eigen::Matrix3d V; ///< transfers
    double Q1;
    double Q2;
    double R0; ///< spectral radius of F*V^-1, computed numerically
};

inline NextGenDecomposition next_generation(const ModelParams& params)
{
    NextGenDecomposition ng;
    ng.Q1 = params.Q1();
    ng.Q2 = params.Q2();
    if (!(params.mu > 0.0) || !(ng.Q1 > 0.0) || !(ng.Q2 > 0.0) || !(params.a0 > 0.0)) {
        throw PreconditionError("next-generation matrices require mu, Q1, Q2, a0 > 0");
    }
    ng.F.setZero();
    ng.F(0, 0) = params.beta1 * params.Lambda / params.mu;
    ng.V << ng.Q1, 0.0, 0.0,
            -params.p, ng.Q2, 0.0,
            -params.a, 0.0, params.a0;

    Eigen::FullPivLU<Eigen::Matrix3d> lu(ng.V);
    if (!lu.isInvertible()) {
        throw NumericError("transfer matrix V is singular");
    }
    const Eigen::Matrix3d K = ng.F * lu.inverse();
    Eigen::EigenSolver<Eigen::Matrix3d> es(K, false);
    if (es.info() != Eigen::Success) {
        throw NumericError("eigenvalues of the next-generation matrix did not converge");
    }
    ng.R0 = es.eigenvalues().cwiseAbs().maxCoeff();
    return ng;
}

/// Coefficients (A1, A2, A3, A4) of the cubic whose positive roots are U1*.
inline std::array<double, 4> endemic_cubic_coeffs(const ModelParams& m, double u1_fixed)
{
    const double R0 = basic_reproduction_number(m);
    if (!(R0 > 0.0)) {
        throw PreconditionError("endemic cubic requires R0 > 0");
    }
    const double Q1  = m.Q1();
    const double Q2  = m.Q2();
    const double mt  = m.mu + m.theta;
    const double md  = m.mu + m.delta1;
    const double ex  = m.Lambda * (1.0 - 1.0 / R0);
    const double LR  = m.Lambda / R0;
    const double u1r = u1_fixed * m.rho;

    const double A1 = Q1 * m.beta2 * m.a0 * m.b * mt * md;
    const double A2 = -m.a0 * mt * m.b * Q1 * m.beta2 * ex + Q1 * m.beta2 * m.a0 * mt * md +
                      Q1 * Q1 * Q2 * m.a0 * m.b * mt - LR * m.beta2 * m.p * m.a0 * m.b * mt +
                      LR * m.beta2 * u1r * m.a * md;
    const double A3 = -m.a0 * mt * Q1 * m.beta2 * ex - m.a0 * m.b * mt * Q1 * Q2 * ex +
                      Q1 * Q1 * Q2 * m.a0 * mt - LR * m.beta2 * m.p * m.a0 * mt + LR * Q1 * Q2 * u1r * m.a;
    const double A4 = -m.a0 * mt * Q1 * Q2 * ex;
    return {A1, A2, A3, A4};
}

/// Descartes sign pattern of (A2, A3) when A1 > 0 > A4.
enum class DescartesCase { i, ii, iii, iv, none };

inline std::string_view to_string(DescartesCase c) noexcept
{
    switch (c) {
    case DescartesCase::i:
        return "i";
    case DescartesCase::ii:
        return "ii";
    case DescartesCase::iii:
        return "iii";
    case DescartesCase::iv:
        return "iv";
    case DescartesCase::none:
        break;
    }
    return "none";
}

/// Zero coefficients count as positive; the resulting bound stays valid.
inline DescartesCase classify_descartes(const std::array<double, 4>& A, double R0) noexcept
{
    if (!(R0 > 1.0) || !(A[0] > 0.0) || !(A[3] < 0.0)) {
        return DescartesCase::none;
    }
    const bool a2pos = A[1] >= 0.0;
    const bool a3pos = A[2] >= 0.0;
    if (a2pos) {
        return a3pos ? DescartesCase::i : DescartesCase::ii;
    }
    return a3pos ? DescartesCase::iii : DescartesCase::iv;
}

/// Largest number of positive roots Descartes' rule allows for `c`.
inline int descartes_max_positive_roots(DescartesCase c) noexcept
{
    switch (c) {
    case DescartesCase::iii:
        return 3;
    case DescartesCase::none:
        return 0;
    default:
        return 1;
    }
}

struct EndemicEquilibrium {
    State5 point;
    std::array<double, 4> cubic_coeffs;
    DescartesCase descartes_case;
    int multiplicity; ///< >1 when the cubic has a (near) repeated root here
    double residual;  ///< max-norm of rhs_uncontrolled at the point
};

/// S*, U2*, E*, Z* reconstructed from a candidate U1*.
inline State5 endemic_point_from_U1(const ModelParams& m, double U1, double u1_fixed)
{
    const double R0 = basic_reproduction_number(m);
    const double Q1 = m.Q1();
    const double Q2 = m.Q2();
    const double w  = m.beta2 * U1 + Q2;
    State5 x;
    x.U1 = U1;
    x.S  = m.Lambda / m.mu / R0 * ((Q1 * w - m.beta2 * m.p * U1) / (Q1 * w));
    x.U2 = m.p * U1 / w;
    x.Z  = m.a * U1 / (m.a0 * (1.0 + m.b * U1));
    x.E  = u1_fixed * m.rho * x.S * x.Z / (m.mu + m.theta);
    return x;
}

/**
 * Endemic equilibria of the uncontrolled model with response intensity
 * `u1_fixed`. Empty when R0 <= 1. Every positive real root of the cubic is
 * returned (case iii can give three), ascending in U1*.
 */
inline std::vector<EndemicEquilibrium> endemic_equilibrium(const ModelParams& params, double u1_fixed = 1.0)
{
    std::vector<EndemicEquilibrium> out;
    const double R0 = basic_reproduction_number(params);
    if (!(R0 > 1.0)) {
        return out;
    }
    const auto A  = endemic_cubic_coeffs(params, u1_fixed);
    const auto dc = classify_descartes(A, R0);
    for (const auto& root : solve_cubic(A)) {
        if (!(root.value > 0.0)) {
            continue;
        }
        const State5 x = endemic_point_from_U1(params, root.value, u1_fixed);
        // U2* vanishes identically when p = 0 and E* when u1*rho = 0; those
        // coordinates may be zero, every other one must be positive.
        const bool u2_ok = params.p > 0.0 ? x.U2 > 0.0 : x.U2 == 0.0;
        const bool e_ok  = u1_fixed * params.rho > 0.0 ? x.E > 0.0 : x.E == 0.0;
        if (!(x.S > 0.0 && x.U1 > 0.0 && x.Z > 0.0 && u2_ok && e_ok)) {
            continue;
        }
        double res = 0.0;
        for (double v : rhs_uncontrolled(params, x, u1_fixed)) {
            res = std::max(res, std::abs(v));
        }
        out.push_back({x, A, dc, root.multiplicity, res});
    }
    return out;
}

} // namespace heroin_oc
