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
#include "heroin_oc/model.hpp"
#include "heroin_oc/params.hpp"
#include "heroin_oc/rk4.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <deque>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace heroin_oc {

using StateTrajectory   = Trajectory<5>;
using AdjointTrajectory = Trajectory<5>;

/// Costates (lambda1..lambda5), paired with (S, U1, U2, E, Z).
struct Adjoint5 {
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
    double l4 = 0.0;
    double l5 = 0.0;

    Vec5 to_vec() const noexcept { return {l1, l2, l3, l4, l5}; }
    static Adjoint5 from_vec(const Vec5& v) noexcept { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Node values of (u1, u2); linear between nodes.
struct ControlGrid {
    TimeGrid grid;
    std::vector<double> u1;
    std::vector<double> u2;

    static ControlGrid constant(const TimeGrid& grid, double u1, double u2)
    {
        return {grid, std::vector<double>(grid.n_nodes(), u1), std::vector<double>(grid.n_nodes(), u2)};
    }

    ControlPair at_node(std::size_t i) const { return {u1[i], u2[i]}; }
    ControlPair at(double t) const { return {grid.interpolate(u1, t), grid.interpolate(u2, t)}; }

    bool is_admissible(const ModelParams& params) const
    {
        if (u1.size() != grid.n_nodes() || u2.size() != grid.n_nodes()) {
            return false;
        }
        for (std::size_t i = 0; i < u1.size(); ++i) {
            if (!heroin_oc::is_admissible(at_node(i), params)) {
                return false;
            }
        }
        return true;
    }
};

enum class ControlCase {
    case1 = 1, ///< prevention information only, u2 = 0
    case2 = 2, ///< treatment only, u1 = 0
    case3 = 3, ///< both controls free
};

namespace detail {

inline void require_same_grid(const TimeGrid& a, std::size_t n_values, const TimeGrid& b)
{
    if (!(a == b) || n_values != b.n_nodes()) {
        throw DimensionError("trajectory and control grid do not match");
    }
}

inline void require_controls(const ControlGrid& u)
{
    if (u.u1.size() != u.grid.n_nodes() || u.u2.size() != u.grid.n_nodes()) {
        throw DimensionError("control arrays must have one value per grid node");
    }
}

} // namespace detail

/// Integrand B1*U1 + B2*u1^4 + B3*u2^2.
inline double running_cost(double U1, const ControlPair& u, const ModelParams& m) noexcept
{
    const double u1sq = u.u1 * u.u1;
    return m.B1 * U1 + m.B2 * u1sq * u1sq + m.B3 * u.u2 * u.u2;
}

/// Composite trapezoid rule for the cost functional on the shared grid.
inline double cost_functional(const StateTrajectory& state, const ControlGrid& controls, const ModelParams& params)
{
    detail::require_controls(controls);
    detail::require_same_grid(state.grid, state.values.size(), controls.grid);
    const std::size_t n = controls.grid.n_steps();
    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * running_cost(state.values[i][iU1], controls.at_node(i), params);
    }
    return sum * controls.grid.dt();
}

inline double hamiltonian(const State5& x, const ControlPair& u, const Adjoint5& l, const ModelParams& m)
{
    const Vec5 f = detail::model_rhs(m, x, u.u1, u.u2);
    return running_cost(x.U1, u, m) + l.l1 * f[0] + l.l2 * f[1] + l.l3 * f[2] + l.l4 * f[3] + l.l5 * f[4];
}

/// (dH/du1, dH/du2).
inline ControlPair hamiltonian_control_gradient(const State5& x, const ControlPair& u, const Adjoint5& l,
                                                const ModelParams& m) noexcept
{
    const double rsz = m.rho * x.S * x.Z;
    return {
        4.0 * m.B2 * u.u1 * u.u1 * u.u1 - (l.l1 - l.l4) * rsz,
        2.0 * m.B3 * u.u2 - (l.l2 - l.l3) * x.U1,
    };
}

/// d(lambda)/dt = -dH/dx.
inline Vec5 adjoint_rhs(const State5& x, const ControlPair& u, const Adjoint5& l, const ModelParams& m) noexcept
{
    const double ur = u.u1 * m.rho;
    const double den = 1.0 + m.b * x.U1;
    return {
        l.l1 * m.beta1 * x.U1 + l.l1 * m.mu + l.l1 * ur * x.Z - l.l2 * m.beta1 * x.U1 - l.l4 * ur * x.Z,
        l.l1 * m.beta1 * x.S - l.l2 * m.beta1 * x.S + l.l2 * u.u2 - l.l2 * m.beta2 * x.U2 + l.l2 * m.mu +
            l.l2 * m.delta1 - l.l3 * u.u2 + l.l3 * m.beta2 * x.U2 - l.l5 * m.a / (den * den) - m.B1,
        -l.l2 * m.beta2 * x.U1 + l.l3 * m.beta2 * x.U1 + l.l3 * m.mu + l.l3 * m.delta2,
        l.l4 * m.mu + l.l4 * m.theta - l.l1 * m.theta,
        l.l1 * ur * x.S - l.l4 * ur * x.S + l.l5 * m.a0,
    };
}

/// Pointwise minimiser of the Hamiltonian over the admissible box.
inline ControlPair characterize_controls(const State5& x, const Adjoint5& l, const ModelParams& m)
{
    if (!(m.B2 > 0.0) || !(m.B3 > 0.0)) {
        throw PreconditionError("control characterization requires B2, B3 > 0");
    }
    // std::cbrt is the real, sign-preserving cube root.
    const double raw1 = std::cbrt(m.rho * x.S * x.Z * (l.l1 - l.l4) / (4.0 * m.B2));
    const double raw2 = (l.l2 - l.l3) * x.U1 / (2.0 * m.B3);
    return {std::clamp(raw1, 0.0, m.u1max), std::clamp(raw2, 0.0, m.u2max)};
}

/// Forward RK4 of the controlled system under node-wise controls.
inline StateTrajectory simulate_controlled(const ModelParams& params, const State5& x0, const ControlGrid& controls)
{
    detail::require_controls(controls);
    if (!controls.is_admissible(params)) {
        throw PreconditionError("controls outside the admissible set [0, umax]");
    }
    auto f = [&](double t, const Vec5& x) {
        const ControlPair u = controls.at(t);
        return detail::model_rhs(params, State5::from_vec(x), u.u1, u.u2);
    };
    return rk4_forward(f, x0.to_vec(), controls.grid);
}

/// Backward RK4 of the adjoint system with lambda(tf) = 0.
inline AdjointTrajectory solve_adjoint(const ModelParams& params, const StateTrajectory& state,
                                       const ControlGrid& controls)
{
    detail::require_controls(controls);
    detail::require_same_grid(state.grid, state.values.size(), controls.grid);
    auto g = [&](double t, const Vec5& l, const Vec5& x) {
        return adjoint_rhs(State5::from_vec(x), controls.at(t), Adjoint5::from_vec(l), params);
    };
    return rk4_backward(g, Vec5{}, controls.grid, state);
}

struct SweepOptions {
    double delta = 1e-3;            ///< Lenhart relative tolerance
    double omega = 0.5;             ///< weight of the newly characterized control
    std::size_t max_iterations = 500;
    double fixed_point_tol = 1e-10; ///< max |u - characterize(x(u), lambda(u))|
    /// Number of past iterates mixed by Anderson acceleration of the relaxed
    /// update; 0 gives the plain relaxed sweep.
    std::size_t anderson_depth = 5;
};

struct SweepResult {
    StateTrajectory state;
    AdjointTrajectory adjoint;
    ControlGrid controls;
    double cost = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double fixed_point_residual = 0.0;
    /// Per iteration: the largest relative 1-norm change over u1, u2, state
    /// and adjoint (0 for the first iteration).
    std::vector<double> convergence_history;
};

namespace detail {

// ||new - old||_1 / ||new||_1, with 0/0 read as 0.
inline double relative_change(const std::vector<double>& now, const std::vector<double>& old)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < now.size(); ++i) {
        num += std::abs(now[i] - old[i]);
        den += std::abs(now[i]);
    }
    if (num == 0.0) {
        return 0.0;
    }
    return den == 0.0 ? INFINITY : num / den;
}

template <std::size_t N>
std::vector<double> flatten(const Trajectory<N>& t)
{
    std::vector<double> out;
    out.reserve(t.values.size() * N);
    for (const auto& v : t.values) {
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

inline ControlPair restrict_to_case(ControlPair u, ControlCase c) noexcept
{
    if (c == ControlCase::case1) {
        u.u2 = 0.0;
    }
    else if (c == ControlCase::case2) {
        u.u1 = 0.0;
    }
    return u;
}

} // namespace detail

/**
 * Forward-backward sweep for the optimality system.
 *
 * Starting from u = 0, each iteration integrates the state forward, the
 * adjoint backward from lambda(tf) = 0, characterizes the controls node by
 * node and relaxes u <- omega*u_new + (1 - omega)*u, optionally accelerated by
 * Anderson mixing of the last `anderson_depth` iterates. The sweep stops when the
 * Lenhart test delta*||v||_1 >= ||v - v_prev||_1 holds for u1, u2, the state
 * and the adjoint, and the current controls reproduce themselves through
 * characterize_controls to within fixed_point_tol. The returned state and
 * adjoint are the ones generated by the returned controls.
 *
 * Running out of iterations is not an error; `converged` is false then.
 */
inline SweepResult forward_backward_sweep(const ModelParams& params, const State5& x0, const TimeGrid& grid,
                                          ControlCase control_case, const SweepOptions& opts = {})
{
    if (!(opts.omega > 0.0 && opts.omega <= 1.0)) {
        throw PreconditionError("relaxation weight must lie in (0, 1]");
    }
    for (double v : x0.to_vec()) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw PreconditionError("initial state must be finite and nonnegative");
        }
    }
    if (!(params.B2 > 0.0) || !(params.B3 > 0.0)) {
        throw PreconditionError("sweep requires B2, B3 > 0");
    }

    const std::size_t n = grid.n_nodes();
    SweepResult res{StateTrajectory{grid, {}}, AdjointTrajectory{grid, {}}, ControlGrid::constant(grid, 0.0, 0.0),
                    0.0, 0, false, 0.0, {}};
    ControlGrid u = ControlGrid::constant(grid, 0.0, 0.0);
    std::vector<double> prev_u1, prev_u2, prev_x, prev_l;
    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> anderson; // newest first
    double best_residual = INFINITY;

    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        StateTrajectory x   = simulate_controlled(params, x0, u);
        AdjointTrajectory l = solve_adjoint(params, x, u);

        ControlGrid cand = u;
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const ControlPair c = detail::restrict_to_case(
                characterize_controls(State5::from_vec(x.values[i]), Adjoint5::from_vec(l.values[i]), params),
                control_case);
            cand.u1[i] = c.u1;
            cand.u2[i] = c.u2;
            residual = std::max({residual, std::abs(c.u1 - u.u1[i]), std::abs(c.u2 - u.u2[i])});
        }

        auto flat_x = detail::flatten(x);
        auto flat_l = detail::flatten(l);
        double change = 0.0;
        if (it > 1) {
            change = std::max({detail::relative_change(u.u1, prev_u1), detail::relative_change(u.u2, prev_u2),
                               detail::relative_change(flat_x, prev_x), detail::relative_change(flat_l, prev_l)});
        }
        res.convergence_history.push_back(change);
        res.iterations           = it;
        res.fixed_point_residual = residual;
        res.state                = std::move(x);
        res.adjoint              = std::move(l);
        res.controls             = u;

        if (it > 1 && change <= opts.delta && residual <= opts.fixed_point_tol) {
            res.converged = true;
            break;
        }

        prev_u1 = u.u1;
        prev_u2 = u.u2;
        prev_x  = std::move(flat_x);
        prev_l  = std::move(flat_l);

        // Relaxed update g = omega*T(u) + (1 - omega)*u, then Anderson mixing of
        // the last few (u, g) pairs.
        Eigen::VectorXd uk(2 * n), gk(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            uk[i]     = u.u1[i];
            uk[n + i] = u.u2[i];
            gk[i]     = opts.omega * cand.u1[i] + (1.0 - opts.omega) * u.u1[i];
            gk[n + i] = opts.omega * cand.u2[i] + (1.0 - opts.omega) * u.u2[i];
        }
        Eigen::VectorXd next = gk;
        if (opts.anderson_depth > 0) {
            const Eigen::VectorXd fk = gk - uk;
            if (residual > 2.0 * best_residual) {
                anderson.clear();
            }
            best_residual = std::min(best_residual, residual);
            if (!anderson.empty()) {
                const auto m = static_cast<Eigen::Index>(anderson.size());
                Eigen::MatrixXd dF(2 * n, m), dG(2 * n, m);
                for (Eigen::Index j = 0; j < m; ++j) {
                    const auto& [up, gp] = anderson[static_cast<std::size_t>(j)];
                    dF.col(j) = fk - (gp - up);
                    dG.col(j) = gk - gp;
                }
                const Eigen::VectorXd gamma = dF.colPivHouseholderQr().solve(fk);
                if (gamma.allFinite()) {
                    next = gk - dG * gamma;
                }
            }
            anderson.emplace_front(uk, gk);
            if (anderson.size() > opts.anderson_depth) {
                anderson.pop_back();
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const ControlPair c = detail::restrict_to_case(
                {std::clamp(next[static_cast<Eigen::Index>(i)], 0.0, params.u1max),
                 std::clamp(next[static_cast<Eigen::Index>(n + i)], 0.0, params.u2max)},
                control_case);
            u.u1[i] = c.u1;
            u.u2[i] = c.u2;
        }
    }
    res.cost = cost_functional(res.state, res.controls, params);
    return res;
}

/// Central difference of the discrete cost with respect to the node value
/// of one control (`which` = 1 or 2) under a hat bump of the given height.
inline double cost_gradient_fd(const ModelParams& params, const State5& x0, const ControlGrid& u, std::size_t node,
                               int which, double height)
{
    auto eval = [&](double h) {
        ControlGrid v = u;
        (which == 1 ? v.u1 : v.u2)[node] += h;
        return cost_functional(simulate_controlled(params, x0, v), v, params);
    };
    return (eval(height) - eval(-height)) / (2.0 * height);
}

/**
 * Compares the adjoint gradient dt * dH/du(t_i) with central differences of
 * the cost under hat bumps (half-width dt, height 1e-4) of each control at
 * `n_samples` evenly spaced interior nodes. Returns the largest relative
 * discrepancy. Requires controls at least 0.01 inside their bounds.
 */
inline double gradient_check(const ModelParams& params, const State5& x0, const TimeGrid& grid, const ControlGrid& u,
                             std::size_t n_samples = 10, double height = 1e-4)
{
    detail::require_controls(u);
    if (!(u.grid == grid)) {
        throw DimensionError("control grid does not match the requested grid");
    }
    constexpr double margin = 0.01;
    for (std::size_t i = 0; i < u.u1.size(); ++i) {
        if (u.u1[i] < margin || u.u1[i] > params.u1max - margin || u.u2[i] < margin ||
            u.u2[i] > params.u2max - margin) {
            throw PreconditionError("gradient check needs controls strictly inside the admissible set");
        }
    }
    if (grid.n_steps() < 2 || n_samples == 0) {
        throw PreconditionError("gradient check needs interior grid nodes");
    }
    const StateTrajectory x   = simulate_controlled(params, x0, u);
    const AdjointTrajectory l = solve_adjoint(params, x, u);

    double worst = 0.0;
    const std::size_t interior = grid.n_steps() - 1;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const std::size_t node = 1 + (k * interior) / n_samples + interior / (2 * n_samples);
        const ControlPair g = hamiltonian_control_gradient(State5::from_vec(x.values[node]), u.at_node(node),
                                                           Adjoint5::from_vec(l.values[node]), params);
        const double adj[2] = {g.u1 * grid.dt(), g.u2 * grid.dt()};
        for (int which = 1; which <= 2; ++which) {
            const double fd = cost_gradient_fd(params, x0, u, node, which, height);
            const double a = adj[which - 1];
            const double scale = std::max(std::abs(a), std::abs(fd));
            if (scale > 0.0) {
                worst = std::max(worst, std::abs(fd - a) / scale);
            }
        }
    }
    return worst;
}

struct SingularArc {
    int control;            ///< 1: lambda1 - lambda4 vanishes, 2: lambda2 - lambda3
    std::size_t first_node; ///< inclusive
    std::size_t last_node;  ///< inclusive
    double t_begin;
    double t_end;
};

/// Maximal runs of at least `min_nodes` consecutive nodes on which a
/// switching function stays within `tol` of zero. Detection only.
inline std::vector<SingularArc> detect_singular_arcs(const SweepResult& result, double tol,
                                                     std::size_t min_nodes = 5)
{
    if (!result.converged) {
        throw PreconditionError("singular-arc detection needs a converged sweep");
    }
    std::vector<SingularArc> arcs;
    const auto& grid = result.adjoint.grid;
    const auto& vals = result.adjoint.values;
    for (int control = 1; control <= 2; ++control) {
        const std::size_t ia = control == 1 ? 0 : 1;
        const std::size_t ib = control == 1 ? 3 : 2;
        std::size_t run_start = 0;
        std::size_t run_len = 0;
        for (std::size_t i = 0; i <= vals.size(); ++i) {
            const bool small = i < vals.size() && std::abs(vals[i][ia] - vals[i][ib]) <= tol;
            if (small) {
                if (run_len == 0) {
                    run_start = i;
                }
                ++run_len;
                continue;
            }
            if (run_len >= min_nodes) {
                const std::size_t last = run_start + run_len - 1;
                arcs.push_back({control, run_start, last, grid.node(run_start), grid.node(last)});
            }
            run_len = 0;
        }
    }
    return arcs;
}

} // namespace heroin_oc
