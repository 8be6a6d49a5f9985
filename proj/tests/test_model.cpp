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

#include "heroin_oc/model.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace heroin_oc;

TEST(Model, DrugFreePointIsExactEquilibrium)
{
    for (const auto& m : {presets::table1(), presets::table2()}) {
        const State5 dfe{m.Lambda / m.mu, 0.0, 0.0, 0.0, 0.0};
        for (double v : rhs_uncontrolled(m, dfe)) {
            EXPECT_EQ(v, 0.0);
        }
    }
}

TEST(Model, InformationEquationPreset1)
{
    const auto d = rhs_uncontrolled(presets::table1(), {15.0, 5.0, 2.0, 1.25, 1.0});
    EXPECT_NEAR(d[iZ], 0.01 * 5.0 / 6.0 - 0.06, 1e-15);
    EXPECT_NEAR(d[iZ], -0.051666666666666666, 1e-15);
}

TEST(Model, InformationDecaysWithoutUntreatedUsers)
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const auto m = test::random_params(rng);
        State5 x = test::random_state(rng);
        x.U1 = 0.0;
        EXPECT_DOUBLE_EQ(rhs_uncontrolled(m, x)[iZ], -m.a0 * x.Z);
    }
}

TEST(Model, ControlledInitialRisePreset2)
{
    // 0.01*15*5 - 0.12*5 + 0.0008*5*2
    const auto d = rhs_controlled(presets::table2(), default_initial_state, {0.0, 0.0});
    EXPECT_NEAR(d[iU1], 0.158, 1e-14);
    EXPECT_GT(d[iU1], 0.0);
}

TEST(Model, ControlsVanishAtDfe)
{
    const auto m = presets::table2();
    const State5 dfe{m.Lambda / m.mu, 0.0, 0.0, 0.0, 0.0};
    for (double v : rhs_controlled(m, dfe, {m.u1max, m.u2max})) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Model, PopulationBalance)
{
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
        const auto m = test::random_params(rng);
        const State5 x = test::random_state(rng);
        const auto d = rhs_uncontrolled(m, x);
        const double lhs = d[iS] + d[iU1] + d[iU2] + d[iE];
        const double rhs = m.Lambda - m.mu * x.N() - m.delta1 * x.U1 - m.delta2 * x.U2;
        EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs) + m.Lambda + m.mu * x.N()));
    }
}

TEST(Model, SubstitutionIdentity)
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        auto m = test::random_params(rng);
        m.p = std::uniform_real_distribution<double>(0.0, m.u2max)(rng);
        const double u1 = std::uniform_real_distribution<double>(0.0, m.u1max)(rng);
        const State5 x = test::random_state(rng);
        const auto a = rhs_uncontrolled(m, x, u1);
        const auto b = rhs_controlled(m, x, {u1, m.p});
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_EQ(a[i], b[i]);
        }
    }
}

TEST(Model, ErrorPaths)
{
    const auto m = presets::table2();
    State5 bad = default_initial_state;
    bad.E = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(rhs_uncontrolled(m, bad), DomainError);
    bad.E = INFINITY;
    EXPECT_THROW(rhs_controlled(m, bad, {0.0, 0.0}), DomainError);
    EXPECT_THROW(rhs_controlled(m, default_initial_state, {1.1, 0.0}), PreconditionError);
    EXPECT_THROW(rhs_controlled(m, default_initial_state, {0.0, -0.1}), PreconditionError);
}

TEST(Model, FeasibilityBounds)
{
    const State5 x0{0.0, 0.0, 0.0, 0.0, 0.0};
    const auto b1 = feasibility_bounds(presets::table1(), x0);
    EXPECT_DOUBLE_EQ(b1.N_bound, 16.0);
    EXPECT_NEAR(b1.Z_bound, 0.01 * 2.0 / (0.06 * 0.125), 1e-14);
    EXPECT_NEAR(b1.Z_bound, 8.0 / 3.0, 1e-14);
    EXPECT_NEAR(feasibility_bounds(presets::table2(), x0).N_bound, 10.0, 1e-14);
    EXPECT_DOUBLE_EQ(feasibility_bounds(presets::table2(), default_initial_state).N_bound, 23.25);
}

TEST(Params, PresetsHaveReferenceValues)
{
    const auto t1 = presets::table1();
    EXPECT_EQ(t1.beta1, 0.0002);
    EXPECT_EQ(t1.mu, 0.125);
    EXPECT_EQ(t1.Lambda, 2.0);
    EXPECT_EQ(t1.theta, 0.001);
    EXPECT_EQ(t1.a0, 0.06);
    const auto t2 = presets::table2();
    EXPECT_EQ(t2.B1, 6.0);
    EXPECT_EQ(t2.B2, 120.0);
    EXPECT_EQ(t2.B3, 30.0);
    EXPECT_EQ(t2.u1max, 1.0);
    EXPECT_EQ(t2.u2max, 1.0);
    EXPECT_EQ(t2.p, 0.0);
    EXPECT_NO_THROW(validate(t1));
    EXPECT_NO_THROW(validate(t2));
}

TEST(Params, ValidationNamesField)
{
    auto m = presets::table2();
    m.u1max = 1.5;
    try {
        validate(m);
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "u1max");
    }
    m = presets::table2();
    m.mu = 0.0;
    EXPECT_THROW(validate(m), ConfigError);
    m = presets::table2();
    m.B3 = 0.0;
    EXPECT_THROW(validate(m), ConfigError);
    m = presets::table2();
    m.beta2 = -1e-3;
    EXPECT_THROW(validate(m), ConfigError);
}
