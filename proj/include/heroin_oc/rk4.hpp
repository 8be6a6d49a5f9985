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
#include <cstddef>
#include <vector>

namespace heroin_oc {

/// Uniform grid t_i = t0 + i*dt, i = 0..n_steps.
class TimeGrid {
public:
    TimeGrid(double t0, double tf, std::size_t n_steps)
        : t0_(t0)
        , tf_(tf)
        , n_steps_(n_steps)
    {
        if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0)) {
            throw PreconditionError("time grid requires finite tf > t0");
        }
        if (n_steps == 0) {
            throw PreconditionError("time grid requires at least one step");
        }
        dt_ = (tf - t0) / static_cast<double>(n_steps);
    }

    /// Grid on [t0, tf] with the fewest steps whose length does not exceed
    /// `dt`. When `dt` does not divide the interval the step shrinks slightly,
    /// e.g. [0, 200] at 0.03 becomes 6667 steps of 0.029998...
    static TimeGrid with_step(double t0, double tf, double dt)
    {
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw PreconditionError("time step must be positive and finite");
        }
        if (!(tf > t0) || !std::isfinite(tf - t0)) {
            throw PreconditionError("time grid requires finite tf > t0");
        }
        const double n = std::max(1.0, std::ceil((tf - t0) / dt * (1.0 - 1e-12)));
        return TimeGrid(t0, tf, static_cast<std::size_t>(n));
    }

    double t0() const noexcept { return t0_; }
    double tf() const noexcept { return tf_; }
    double dt() const noexcept { return dt_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t n_nodes() const noexcept { return n_steps_ + 1; }
    double node(std::size_t i) const noexcept
    {
        return i == n_steps_ ? tf_ : t0_ + static_cast<double>(i) * dt_;
    }

    /// Linear interpolation at `t` of samples taken on the grid nodes.
    double interpolate(const std::vector<double>& values, double t) const noexcept
    {
        const double s = (t - t0_) / dt_;
        if (s <= 0.0) {
            return values.front();
        }
        const auto i = static_cast<std::size_t>(s);
        if (i >= n_steps_) {
            return values.back();
        }
        const double w = s - static_cast<double>(i);
        return (1.0 - w) * values[i] + w * values[i + 1];
    }

    friend bool operator==(const TimeGrid& l, const TimeGrid& r) noexcept
    {
        return l.t0_ == r.t0_ && l.tf_ == r.tf_ && l.n_steps_ == r.n_steps_;
    }

private:
    double t0_;
    double tf_;
    std::size_t n_steps_;
    double dt_;
};

/// Samples of an N-vector on every node of a grid.
template <std::size_t N>
struct Trajectory {
    using value_type = std::array<double, N>;

    TimeGrid grid;
    std::vector<value_type> values;

    const value_type& operator[](std::size_t i) const { return values[i]; }
    const value_type& back() const { return values.back(); }

    /// Component `k` at every node.
    std::vector<double> component(std::size_t k) const
    {
        std::vector<double> out(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            out[i] = values[i][k];
        }
        return out;
    }
};

namespace detail {

template <std::size_t N>
std::array<double, N> axpy(const std::array<double, N>& x, double h, const std::array<double, N>& k) noexcept
{
    std::array<double, N> r;
    for (std::size_t j = 0; j < N; ++j) {
        r[j] = x[j] + h * k[j];
    }
    return r;
}

template <std::size_t N>
std::array<double, N> rk4_combine(const std::array<double, N>& x, double h, const std::array<double, N>& k1,
                                  const std::array<double, N>& k2, const std::array<double, N>& k3,
                                  const std::array<double, N>& k4) noexcept
{
    std::array<double, N> r;
    for (std::size_t j = 0; j < N; ++j) {
        r[j] = x[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return r;
}

template <std::size_t N>
bool all_finite(const std::array<double, N>& x) noexcept
{
    for (double v : x) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/**
 * Classical fixed-step RK4 from `x0` at grid.t0() to grid.tf().
 * `f(t, x)` returns dx/dt as std::array<double, N>.
 *
 * Throws IntegrationBlowup carrying the index of the first step whose result
 * is not finite.
 */
template <std::size_t N, class F>
Trajectory<N> rk4_forward(F&& f, const std::array<double, N>& x0, const TimeGrid& grid)
{
    Trajectory<N> traj{grid, {}};
    traj.values.reserve(grid.n_nodes());
    traj.values.push_back(x0);
    if (!detail::all_finite(x0)) {
        throw IntegrationBlowup(0, "initial value is not finite");
    }
    const double h  = grid.dt();
    const double h2 = 0.5 * h;
    auto x          = x0;
    for (std::size_t i = 0; i < grid.n_steps(); ++i) {
        const double t = grid.node(i);
        const auto k1  = f(t, x);
        const auto k2  = f(t + h2, detail::axpy(x, h2, k1));
        const auto k3  = f(t + h2, detail::axpy(x, h2, k2));
        const auto k4  = f(t + h, detail::axpy(x, h, k3));
        x              = detail::rk4_combine(x, h, k1, k2, k3, k4);
        if (!detail::all_finite(x)) {
            throw IntegrationBlowup(i, "forward RK4 produced a non-finite value");
        }
        traj.values.push_back(x);
    }
    return traj;
}

/**
 * Classical RK4 backward in time from `lambda_f` at grid.tf() down to
 * grid.t0(). `g(t, lambda, x)` receives the state at the stage time: the
 * grid value at nodes and the average of the two neighbouring nodes at the
 * half step.
 */
template <std::size_t N, std::size_t M, class G>
Trajectory<N> rk4_backward(G&& g, const std::array<double, N>& lambda_f, const TimeGrid& grid,
                           const Trajectory<M>& state)
{
    if (!(state.grid == grid) || state.values.size() != grid.n_nodes()) {
        throw DimensionError("state trajectory is not sampled on the requested grid");
    }
    Trajectory<N> traj{grid, std::vector<std::array<double, N>>(grid.n_nodes())};
    traj.values.back() = lambda_f;
    if (!detail::all_finite(lambda_f)) {
        throw IntegrationBlowup(grid.n_steps(), "terminal value is not finite");
    }
    const double h  = grid.dt();
    const double h2 = 0.5 * h;
    auto l          = lambda_f;
    for (std::size_t i = grid.n_steps(); i > 0; --i) {
        const double t  = grid.node(i);
        const auto& xi  = state.values[i];
        const auto& xim = state.values[i - 1];
        std::array<double, M> xmid;
        for (std::size_t j = 0; j < M; ++j) {
            xmid[j] = 0.5 * (xi[j] + xim[j]);
        }
        const auto k1 = g(t, l, xi);
        const auto k2 = g(t - h2, detail::axpy(l, -h2, k1), xmid);
        const auto k3 = g(t - h2, detail::axpy(l, -h2, k2), xmid);
        const auto k4 = g(grid.node(i - 1), detail::axpy(l, -h, k3), xim);
        l             = detail::rk4_combine(l, -h, k1, k2, k3, k4);
        if (!detail::all_finite(l)) {
            throw IntegrationBlowup(i - 1, "backward RK4 produced a non-finite value");
        }
        traj.values[i - 1] = l;
    }
    return traj;
}

} // namespace heroin_oc
