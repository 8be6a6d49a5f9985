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
#include "heroin_oc/model.hpp"
#include "heroin_oc/params.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace heroin_oc {

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Eigenvalues5 = std::array<std::complex<double>, 5>;

/// Eigenvalues of a real 5x5 matrix, sorted by descending real part (ties by
/// descending imaginary part). Throws NumericError if the QR iteration fails.
inline Eigenvalues5 eigenvalues_5x5(const Matrix5& m)
{
    if (!m.allFinite()) {
        throw DomainError("matrix has non-finite entries");
    }
    Eigen::EigenSolver<Matrix5> es(m, false);
    if (es.info() != Eigen::Success) {
        throw NumericError("eigenvalue iteration did not converge");
    }
    Eigenvalues5 ev;
    for (int i = 0; i < 5; ++i) {
        ev[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    }
    std::sort(ev.begin(), ev.end(), [](const auto& l, const auto& r) {
        return l.real() != r.real() ? l.real() > r.real() : l.imag() > r.imag();
    });
    return ev;
}

/// Coefficients (c1..c5) of det(lambda*I - M) = lambda^5 + c1 lambda^4 + ... + c5,
/// by the Faddeev-LeVerrier recursion.
inline std::array<double, 5> characteristic_polynomial(const Matrix5& m)
{
    std::array<double, 5> c{};
    Matrix5 Mk = Matrix5::Zero();
    double prev = 1.0;
    for (int k = 1; k <= 5; ++k) {
        Mk = m * Mk + prev * Matrix5::Identity();
        const double ck = -(m * Mk).trace() / k;
        c[static_cast<std::size_t>(k - 1)] = ck;
        prev = ck;
    }
    return c;
}

/// Roots of the monic quintic lambda^5 + c1 lambda^4 + ... + c5, via its
/// companion matrix.
inline Eigenvalues5 quintic_roots(const std::array<double, 5>& c)
{
    Matrix5 comp = Matrix5::Zero();
    for (int j = 0; j < 5; ++j) {
        comp(0, j) = -c[static_cast<std::size_t>(j)];
    }
    for (int i = 1; i < 5; ++i) {
        comp(i, i - 1) = 1.0;
    }
    return eigenvalues_5x5(comp);
}

/// One tested inequality `value > 0`.
struct Condition {
    std::string name;
    double margin;      ///< value of the left side minus the right side
    double scale;       ///< magnitude of the terms that make up `margin`
    bool holds;         ///< margin > 1e-12 * (1 + scale)
    bool informational; ///< reported only, not part of the verdict
};

inline Condition make_condition(std::string name, double margin, double scale, bool informational = false)
{
    return {std::move(name), margin, scale, margin > 1e-12 * (1.0 + std::abs(scale)), informational};
}

enum class PointKind { dfe, endemic };

struct StabilityVerdict {
    PointKind point_kind;
    bool rh_holds;
    double max_re_eig;               ///< from `eigenvalues`
    Eigenvalues5 eigenvalues;        ///< of the Jacobian at the point
    Eigenvalues5 charpoly_roots;     ///< of the polynomial the RH test was run on
    std::vector<Condition> conditions;
};

/// Hurwitz conditions for lambda^5 + c1 lambda^4 + c2 lambda^3 + c3 lambda^2 + c4 lambda + c5.
/// Positive coefficients with Delta3 > 0 and Delta4 > 0 are necessary and
/// sufficient (Delta2 > 0 follows from them and Delta5 = c5 * Delta4).
inline std::vector<Condition> hurwitz_quintic(const std::array<double, 5>& c)
{
    const auto [c1, c2, c3, c4, c5] = c;
    std::vector<Condition> out;
    for (std::size_t i = 0; i < 5; ++i) {
        out.push_back(make_condition("Theta" + std::to_string(i + 1), c[i], c[i]));
    }
    const double d3 = c1 * c2 * c3 - c3 * c3 - c1 * c1 * c4;
    const double d3s = std::abs(c1 * c2 * c3) + c3 * c3 + std::abs(c1 * c1 * c4);
    out.push_back(make_condition("Delta3", d3, d3s));
    const double d2 = c1 * c2 - c3;
    const double d4 = d2 * (c3 * c4 - c2 * c5) - (c1 * c4 - c5) * (c1 * c4 - c5);
    const double d4s = (std::abs(c1 * c2) + std::abs(c3)) * (std::abs(c3 * c4) + std::abs(c2 * c5)) +
                       (std::abs(c1 * c4) + std::abs(c5)) * (std::abs(c1 * c4) + std::abs(c5));
    out.push_back(make_condition("Delta4", d4, d4s));

    // The inequality in the form it is usually printed for this model. It
    // equals c1*Delta4 - c1^2*c4*c5 and is stricter than Delta4 > 0.
    const double lhs = (c1 * c4 - c5) * d3;
    const double rhs = c5 * d2 * d2 + c1 * c5 * c5;
    out.push_back(make_condition("printed_fifth_order_inequality", lhs - rhs,
                                 std::abs(lhs) + std::abs(rhs), true));
    return out;
}

inline bool verdict_from(const std::vector<Condition>& conditions) noexcept
{
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const Condition& c) { return c.informational || c.holds; });
}

// Throws when the RH verdict and the eigenvalue oracle disagree by more than
// the 1e-9 margin on the real part.
inline void cross_check(const StabilityVerdict& v)
{
    const bool eig_stable = v.max_re_eig < 0.0;
    if (v.rh_holds != eig_stable && std::abs(v.max_re_eig) > 1e-9) {
        throw ConsistencyError("Routh-Hurwitz verdict disagrees with the eigenvalue oracle");
    }
}

/// Jacobian of the uncontrolled model at E0, state order (S, U1, U2, E, Z).
inline Matrix5 jacobian_dfe(const ModelParams& m, double u1_fixed = 1.0)
{
    if (!(m.mu > 0.0)) {
        throw PreconditionError("jacobian_dfe requires mu > 0");
    }
    const double S0 = m.Lambda / m.mu;
    const double r  = u1_fixed * m.rho * S0;
    Matrix5 J;
    J << -m.mu, -m.beta1 * S0,         0.0,     m.theta,             -r,
         0.0,   m.beta1 * S0 - m.Q1(), 0.0,     0.0,                 0.0,
         0.0,   m.p,                   -m.Q2(), 0.0,                 0.0,
         0.0,   0.0,                   0.0,     -(m.mu + m.theta),   r,
         0.0,   m.a,                   0.0,     0.0,                 -m.a0;
    return J;
}

/**
 * Local stability of E0. Three eigenvalues of J(E0) are -mu, -(mu+theta) and
 * -a0; the other two solve lambda^2 + zeta1 lambda + zeta2 = 0.
 */
inline StabilityVerdict dfe_local_stability(const ModelParams& m, double u1_fixed = 1.0)
{
    const double R0 = basic_reproduction_number(m);
    const double bl = m.beta1 * m.Lambda / m.mu;
    const double Q1 = m.Q1();
    const double Q2 = m.Q2();
    const double zeta1 = Q1 + Q2 - bl;
    const double zeta2 = R0 > 0.0 ? -bl * (Q2 * (1.0 - 1.0 / R0)) : Q1 * Q2;

    StabilityVerdict v;
    v.point_kind = PointKind::dfe;
    v.conditions.push_back(make_condition("zeta1", zeta1, Q1 + Q2 + bl));
    v.conditions.push_back(make_condition("zeta2", zeta2, Q2 * (Q1 + bl)));
    v.conditions.push_back(make_condition("printed_zeta1", Q1 + Q2 + bl, Q1 + Q2 + bl, true));
    v.rh_holds = verdict_from(v.conditions);

    const Matrix5 J  = jacobian_dfe(m, u1_fixed);
    v.eigenvalues    = eigenvalues_5x5(J);
    v.max_re_eig     = v.eigenvalues.front().real();
    v.charpoly_roots = quintic_roots(characteristic_polynomial(J));
    cross_check(v);
    return v;
}

struct GlobalStability {
    double value; ///< beta1*Lambda / (mu*(mu + delta1))
    bool holds;   ///< value < 1
};

inline GlobalStability global_stability_condition(const ModelParams& m)
{
    if (!(m.mu > 0.0)) {
        throw PreconditionError("global stability condition requires mu > 0");
    }
    const double v = m.beta1 * m.Lambda / (m.mu * (m.mu + m.delta1));
    return {v, v < 1.0};
}

/// Jacobian entries a_ij at an endemic equilibrium.
inline Matrix5 jacobian_endemic(const ModelParams& m, const EndemicEquilibrium& eq, double u1_fixed = 1.0)
{
    const State5& x = eq.point;
    const double ur = u1_fixed * m.rho;
    const double den = 1.0 + m.b * x.U1;
    Matrix5 J = Matrix5::Zero();
    J(0, 0) = -m.beta1 * x.U1 - m.mu - ur * x.Z;
    J(0, 1) = -m.beta1 * x.S;
    J(0, 3) = m.theta;
    J(0, 4) = -ur * x.S;
    J(1, 0) = m.beta1 * x.U1;
    J(1, 1) = m.beta1 * x.S + m.beta2 * x.U2 - m.Q1();
    J(1, 2) = m.beta2 * x.U1;
    J(2, 1) = m.p - m.beta2 * x.U2;
    J(2, 2) = -m.beta2 * x.U1 - m.Q2();
    J(3, 0) = ur * x.Z;
    J(3, 3) = -(m.mu + m.theta);
    J(3, 4) = ur * x.S;
    J(4, 1) = m.a / (den * den);
    J(4, 4) = -m.a0;
    return J;
}

/// Theta1..Theta5 assembled entry by entry from the a_ij of J(E1).
inline std::array<double, 5> endemic_thetas(const Matrix5& J)
{
    const double a11 = J(0, 0), a12 = J(0, 1), a14 = J(0, 3), a15 = J(0, 4);
    const double a21 = J(1, 0), a22 = J(1, 1), a23 = J(1, 2);
    const double a32 = J(2, 1), a33 = J(2, 2);
    const double a41 = J(3, 0), a44 = J(3, 3), a45 = J(3, 4);
    const double a52 = J(4, 1), a55 = J(4, 4);

    const double T1 = -a11 - a22 - a33 - a44 - a55;
    const double T2 = a11 * (a44 + a33 + a22 + a55) - a21 * a12 - a14 * a41 - a23 * a32 + a55 * a22 +
                      a33 * (a22 + a55) + a44 * (a33 + a22 + a55);
    const double T3 = a11 * (a23 * a32 - a33 * a44 - a44 * a22 - a44 * a55 - a33 * a22 - a33 * a55 - a55 * a22) -
                      a21 * a15 * a52 - a33 * a44 * a22 - a55 * (a33 * a44 + a44 * a22 + a33 * a22) +
                      a21 * (a12 * a33 + a12 * a44 + a12 * a55) + a14 * (a33 * a41 + a41 * a22 + a41 * a55) +
                      a23 * a32 * (a44 + a55);
    const double T4 = a11 * a44 * (a33 * a22 - a23 * a32) - a11 * a55 * (a23 * a32 - a33 * a44) +
                      a11 * a55 * a22 * (a44 + a33) - a21 * a12 * (a33 * a44 + a33 * a55 + a44 * a55) -
                      a14 * a33 * a41 * (a22 + a55) - a21 * a14 * a45 * a52 + a21 * a15 * a52 * (a33 + a44) +
                      a23 * a32 * (a14 * a41 - a44 * a55) + a55 * a22 * (a33 * a44 - a14 * a41);
    const double T5 = a11 * a44 * a55 * (a23 * a32 - a33 * a22) - a14 * a41 * a55 * (a23 * a32 - a33 * a22) -
                      a21 * (a15 * a33 * a44 * a52 - a12 * a33 * a44 * a55 - a14 * a45 * a33 * a52);
    return {T1, T2, T3, T4, T5};
}

/// Routh-Hurwitz test of an endemic equilibrium, cross-checked against the
/// eigenvalues of J(E1).
inline StabilityVerdict endemic_local_stability(const ModelParams& m, const EndemicEquilibrium& eq,
                                                double u1_fixed = 1.0)
{
    if (!(basic_reproduction_number(m) > 1.0)) {
        throw PreconditionError("endemic stability requires R0 > 1");
    }
    const Matrix5 J = jacobian_endemic(m, eq, u1_fixed);
    const auto theta = endemic_thetas(J);

    StabilityVerdict v;
    v.point_kind     = PointKind::endemic;
    v.conditions     = hurwitz_quintic(theta);
    v.rh_holds       = verdict_from(v.conditions);
    v.eigenvalues    = eigenvalues_5x5(J);
    v.max_re_eig     = v.eigenvalues.front().real();
    v.charpoly_roots = quintic_roots(theta);
    cross_check(v);
    return v;
}

} // namespace heroin_oc
