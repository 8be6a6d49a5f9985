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

#include "heroin_oc/equilibria.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace heroin_oc;

namespace {

ModelParams table2_endemic()
{
    ModelParams m = presets::table2();
    m.beta1 = 0.05;
    return m;
}

/// Sign changes of the cubic on (0, hi], step h; returns bracket midpoints.
std::vector<double> scan_roots(const std::array<double, 4>& A, double hi, double h)
{
    std::vector<double> out;
    double x0 = h;
    double f0 = eval_cubic(A, x0);
    for (double x = 2.0 * h; x <= hi + 0.5 * h; x += h) {
        const double f = eval_cubic(A, x);
        if (f0 == 0.0) {
            out.push_back(x0);
        }
        else if ((f0 < 0.0) != (f < 0.0) && f != 0.0) {
            out.push_back(0.5 * (x0 + x));
        }
        x0 = x;
        f0 = f;
    }
    return out;
}

/// Equilibrium condition of the S equation after eliminating S, U2, E, Z in
/// terms of U1, cleared of its denominators (1 + b U1)(beta2 U1 + Q2).
double reduced_equation(const ModelParams& m, double u1, double x)
{
    const double Q1 = m.mu + m.delta1 + m.p;
    const double Q2 = m.mu + m.delta2;
    const double U2 = m.p * x / (m.beta2 * x + Q2);
    const double S  = (Q1 - m.beta2 * U2) / m.beta1;
    const double Z  = m.a * x / (m.a0 * (1.0 + m.b * x));
    const double E  = u1 * m.rho * S * Z / (m.mu + m.theta);
    const double h  = m.Lambda - m.beta1 * S * x - m.mu * S + m.theta * E - u1 * m.rho * S * Z;
    return h * (1.0 + m.b * x) * (m.beta2 * x + Q2);
}

double max_abs(const Vec5& v)
{
    double r = 0.0;
    for (double c : v) {
        r = std::max(r, std::abs(c));
    }
    return r;
}

} // namespace

TEST(Equilibria, DrugFreePoint)
{
    const auto e = drug_free_equilibrium(presets::table1());
    EXPECT_DOUBLE_EQ(e.S, 16.0);
    EXPECT_EQ(e.U1, 0.0);
    EXPECT_EQ(e.Z, 0.0);
    ModelParams bad = presets::table1();
    bad.mu = 0.0;
    EXPECT_THROW(drug_free_equilibrium(bad), DomainError);
    EXPECT_THROW(basic_reproduction_number(bad), PreconditionError);
}

TEST(Equilibria, ReproductionNumberExamples)
{
    EXPECT_NEAR(basic_reproduction_number(presets::table1()), 0.0004 / 0.021875, 1e-15);
    EXPECT_NEAR(basic_reproduction_number(presets::table2()), 0.007 / 0.0084, 1e-15);
    ModelParams m = presets::table2();
    m.beta1 = 0.0;
    EXPECT_EQ(basic_reproduction_number(m), 0.0);
}

TEST(Equilibria, NextGenerationMatrices)
{
    const auto ng1 = next_generation(presets::table1());
    EXPECT_NEAR(ng1.F(0, 0), 0.0032, 1e-16);
    EXPECT_EQ(ng1.F.cwiseAbs().sum(), ng1.F(0, 0));

    const auto ng2 = next_generation(presets::table2());
    EXPECT_NEAR(ng2.V(0, 0), 0.12, 1e-15);
    EXPECT_NEAR(ng2.V(1, 1), 0.13, 1e-15);
    EXPECT_NEAR(ng2.V(2, 2), 0.06, 1e-15);

    ModelParams bad = presets::table2();
    bad.a0 = 0.0;
    EXPECT_THROW(next_generation(bad), PreconditionError);
}

TEST(Equilibria, SpectralRadiusMatchesFormula)
{
    std::mt19937_64 rng(1);
    for (int k = 0; k < 1000; ++k) {
        const auto m = test::random_params(rng);
        const double R0 = basic_reproduction_number(m);
        const auto ng = next_generation(m);
        ASSERT_LE(std::abs(ng.R0 - R0), 1e-12 * R0) << "sample " << k;
    }
}

TEST(Equilibria, CubicCoefficientSigns)
{
    std::mt19937_64 rng(2);
    for (int k = 0; k < 1000; ++k) {
        auto m = test::random_params_with_R0(rng, 0.1, 5.0);
        m.b = std::max(m.b, 1e-3);
        m.beta2 = std::max(m.beta2, 1e-5);
        const double R0 = basic_reproduction_number(m);
        if (std::abs(R0 - 1.0) < 1e-9) {
            continue;
        }
        const auto A = endemic_cubic_coeffs(m, 1.0);
        EXPECT_GT(A[0], 0.0);
        EXPECT_EQ(A[3] < 0.0, R0 > 1.0) << "R0 = " << R0;
    }
}

TEST(Equilibria, CubicCoefficientsTermByTerm)
{
    // Exact rational evaluation of the coefficient formulas, done offline.
    const auto A = endemic_cubic_coeffs(table2_endemic(), 1.0);
    EXPECT_NEAR(A[0], 4.90752e-08, 1e-12 * 4.90752e-08);
    EXPECT_NEAR(A[1], 7.81267968e-06, 1e-12 * 7.81267968e-06);
    EXPECT_NEAR(A[2], -2.654911872e-05, 1e-12 * 2.654911872e-05);
    EXPECT_NEAR(A[3], -3.5354592e-05, 1e-12 * 3.5354592e-05);
}

TEST(Equilibria, CubicIsProportionalToReducedEquation)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(0.1, 20.0), u1d(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const auto m = test::random_params_with_R0(rng, 0.2, 6.0);
        const double u1 = u1d(rng);
        const auto A = endemic_cubic_coeffs(m, u1);
        // A(x) = -a0 (mu + theta) Q1 * reduced(x) for every x
        for (int j = 0; j < 5; ++j) {
            const double x = xs(rng);
            const double lhs = eval_cubic(A, x);
            const double rhs = -m.a0 * (m.mu + m.theta) * m.Q1() * reduced_equation(m, u1, x);
            ASSERT_NEAR(lhs, rhs, 1e-9 * (cubic_scale(A, x) + std::abs(rhs))) << "sample " << k;
        }
    }
}

TEST(Equilibria, Preset2EndemicPoint)
{
    const auto m = table2_endemic();
    const auto eqs = endemic_equilibrium(m);
    ASSERT_EQ(eqs.size(), 1u);
    const auto& e = eqs.front();
    EXPECT_NEAR(e.point.U1, 4.32655718, 1e-7);
    EXPECT_EQ(e.point.U2, 0.0);
    EXPECT_EQ(e.descartes_case, DescartesCase::ii);
    EXPECT_EQ(e.multiplicity, 1);
    EXPECT_LE(e.residual, 1e-8);
    EXPECT_LE(max_abs(rhs_uncontrolled(m, e.point)), 1e-8);
}

TEST(Equilibria, Preset2RootsMatchBruteForceScan)
{
    const auto m = table2_endemic();
    const auto A = endemic_cubic_coeffs(m, 1.0);
    const auto scanned = scan_roots(A, m.Lambda / m.mu, 1e-5);
    const auto eqs = endemic_equilibrium(m);
    ASSERT_EQ(eqs.size(), scanned.size());
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        EXPECT_NEAR(eqs[i].point.U1, scanned[i], 1e-5);
    }
}

TEST(Equilibria, BelowThresholdIsEmpty)
{
    EXPECT_TRUE(endemic_equilibrium(presets::table1()).empty());
    EXPECT_TRUE(endemic_equilibrium(presets::table2()).empty());
    EXPECT_EQ(classify_descartes(endemic_cubic_coeffs(presets::table2(), 1.0), 0.8333), DescartesCase::none);
}

TEST(Equilibria, DescartesBoundsRootCount)
{
    std::mt19937_64 rng(4);
    int seen_case_i = 0;
    for (int k = 0; k < 500; ++k) {
        auto m = test::random_params_with_R0(rng, 1.05, 8.0);
        m.b = std::max(m.b, 1e-3);
        m.beta2 = std::max(m.beta2, 1e-5);
        const auto eqs = endemic_equilibrium(m);
        const auto dc = classify_descartes(endemic_cubic_coeffs(m, 1.0), basic_reproduction_number(m));
        ASSERT_NE(dc, DescartesCase::none);
        if (dc == DescartesCase::iii) {
            EXPECT_TRUE(eqs.size() == 1 || eqs.size() == 3) << eqs.size();
        }
        else {
            EXPECT_EQ(eqs.size(), 1u) << to_string(dc);
        }
        seen_case_i += dc == DescartesCase::i;
        for (const auto& e : eqs) {
            EXPECT_LE(max_abs(rhs_uncontrolled(m, e.point)), 1e-8);
            EXPECT_EQ(e.descartes_case, dc);
        }
    }
    EXPECT_GT(seen_case_i, 0);
}

TEST(Equilibria, DescartesClassification)
{
    EXPECT_EQ(classify_descartes({1, 1, 1, -1}, 2.0), DescartesCase::i);
    EXPECT_EQ(classify_descartes({1, 1, -1, -1}, 2.0), DescartesCase::ii);
    EXPECT_EQ(classify_descartes({1, -1, 1, -1}, 2.0), DescartesCase::iii);
    EXPECT_EQ(classify_descartes({1, -1, -1, -1}, 2.0), DescartesCase::iv);
    EXPECT_EQ(classify_descartes({1, 0, 0, -1}, 2.0), DescartesCase::i);
    EXPECT_EQ(classify_descartes({1, 1, 1, -1}, 0.5), DescartesCase::none);
    EXPECT_EQ(descartes_max_positive_roots(DescartesCase::iii), 3);
    EXPECT_EQ(descartes_max_positive_roots(DescartesCase::ii), 1);
    EXPECT_EQ(to_string(DescartesCase::iv), "iv");
}
