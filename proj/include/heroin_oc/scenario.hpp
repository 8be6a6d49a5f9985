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
#include "heroin_oc/io.hpp"
#include "heroin_oc/model.hpp"
#include "heroin_oc/optimal_control.hpp"
#include "heroin_oc/params.hpp"
#include "heroin_oc/rk4.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace heroin_oc {

/// Constant controls applied to the controlled system.
struct FixedControls {
    double u1 = 0.0;
    double u2 = 0.0;
};

/// The model with constant treatment rate p and response intensity u1_fixed,
/// i.e. fixed controls (u1_fixed, p) without the admissibility bound.
struct UncontrolledModel {};

using ScenarioMode = std::variant<UncontrolledModel, FixedControls, ControlCase>;

struct SweepAxis {
    std::string param; ///< a ModelParams field name or "u1_fixed"
    std::vector<double> values;
};

struct ScenarioSpec {
    std::string source = "table2"; ///< preset name or config path, for reports
    ModelParams params = presets::table2();
    double u1_fixed = 1.0;
    State5 initial_state = default_initial_state;
    double tf = 30.0;
    double dt = 0.03;
    ScenarioMode mode = UncontrolledModel{};
    std::optional<SweepAxis> sweep;
    std::filesystem::path output_dir; ///< empty: write nothing
    bool plot_script = false;         ///< also write a gnuplot script
    SweepOptions sweep_options;

    TimeGrid grid() const { return TimeGrid::with_step(0.0, tf, dt); }
};

inline std::string mode_label(const ScenarioMode& mode)
{
    if (std::holds_alternative<UncontrolledModel>(mode)) {
        return "uncontrolled";
    }
    if (std::holds_alternative<FixedControls>(mode)) {
        return "fixed";
    }
    return "case" + std::to_string(static_cast<int>(std::get<ControlCase>(mode)));
}

/// Throws ConfigError for any field of the spec that cannot be run.
inline void validate(const ScenarioSpec& spec)
{
    validate(spec.params);
    if (!std::isfinite(spec.u1_fixed) || spec.u1_fixed < 0.0) {
        throw ConfigError("u1_fixed", "must be finite and nonnegative");
    }
    const auto x0 = spec.initial_state.to_vec();
    for (std::size_t i = 0; i < 5; ++i) {
        if (!std::isfinite(x0[i]) || x0[i] < 0.0) {
            throw ConfigError(std::string("initial_state.") + io::state_columns[i], "must be finite and nonnegative");
        }
    }
    if (!std::isfinite(spec.tf) || !(spec.tf > 0.0)) {
        throw ConfigError("tf", "must be positive");
    }
    try {
        (void)spec.grid();
    }
    catch (const PreconditionError& e) {
        throw ConfigError("dt", e.what());
    }
    if (const auto* f = std::get_if<FixedControls>(&spec.mode)) {
        if (!is_admissible({f->u1, f->u2}, spec.params)) {
            throw ConfigError("controls", "fixed controls must lie in [0, umax]");
        }
    }
    if (spec.sweep) {
        if (spec.sweep->param != "u1_fixed" && !get_param(spec.params, spec.sweep->param)) {
            throw ConfigError("sweep.param", "unknown parameter '" + spec.sweep->param + "'");
        }
        if (spec.sweep->values.empty()) {
            throw ConfigError("sweep.values", "sweep needs at least one value");
        }
        for (double v : spec.sweep->values) {
            if (!std::isfinite(v)) {
                throw ConfigError("sweep.values", "values must be finite");
            }
        }
    }
}

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(where + it.key(), "unknown key");
        }
    }
}

inline double number_at(const json& obj, const std::string& key, const std::string& where)
{
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(where + key, "must be a number");
    }
    return v.get<double>();
}

} // namespace detail

/// ModelParams from a JSON object. With `base`, missing fields keep their
/// base value; without it every field is required.
inline ModelParams params_from_json(const nlohmann::json& obj, const std::optional<ModelParams>& base = std::nullopt,
                                    const std::string& where = "")
{
    if (!obj.is_object()) {
        throw ConfigError(where.empty() ? "params" : where.substr(0, where.size() - 1), "must be an object");
    }
    std::set<std::string> names;
    for (const auto& f : param_fields) {
        names.emplace(f.name);
    }
    detail::reject_unknown(obj, names, where);
    ModelParams m = base.value_or(ModelParams{});
    for (const auto& f : param_fields) {
        const std::string key(f.name);
        if (obj.contains(key)) {
            m.*f.member = detail::number_at(obj, key, where);
        }
        else if (!base) {
            throw ConfigError(where + key, "missing field");
        }
    }
    validate(m);
    return m;
}

/**
 * Scenario from a JSON document. Recognised keys: preset, params, u1_fixed,
 * initial_state, tf, dt, case, controls, sweep, output_dir, plot_script.
 * Unknown keys, missing parameters and out-of-range values raise ConfigError
 * naming the field.
 */
inline ScenarioSpec scenario_from_json(const nlohmann::json& doc, const std::string& source = "config")
{
    using detail::number_at;
    if (!doc.is_object()) {
        throw ConfigError("", "configuration must be a JSON object");
    }
    detail::reject_unknown(doc,
                           {"preset", "params", "u1_fixed", "initial_state", "tf", "dt", "case", "controls", "sweep",
                            "output_dir", "plot_script"},
                           "");
    ScenarioSpec spec;
    spec.source = source;

    std::optional<ModelParams> base;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string()) {
            throw ConfigError("preset", "must be a string");
        }
        const auto name = doc["preset"].get<std::string>();
        base = presets::by_name(name);
        if (!base) {
            throw ConfigError("preset", "unknown preset '" + name + "'");
        }
        spec.source = name;
    }
    if (doc.contains("params")) {
        spec.params = params_from_json(doc["params"], base, "params.");
    }
    else if (base) {
        spec.params = *base;
    }
    else {
        throw ConfigError("params", "missing field (give params or a preset)");
    }

    if (doc.contains("u1_fixed")) {
        spec.u1_fixed = number_at(doc, "u1_fixed", "");
    }
    if (doc.contains("initial_state")) {
        const auto& is = doc["initial_state"];
        if (!is.is_object()) {
            throw ConfigError("initial_state", "must be an object");
        }
        detail::reject_unknown(is, {"S", "U1", "U2", "E", "Z"}, "initial_state.");
        Vec5 v = spec.initial_state.to_vec();
        for (std::size_t i = 0; i < 5; ++i) {
            if (is.contains(io::state_columns[i])) {
                v[i] = number_at(is, io::state_columns[i], "initial_state.");
            }
        }
        spec.initial_state = State5::from_vec(v);
    }
    if (doc.contains("tf")) {
        spec.tf = number_at(doc, "tf", "");
    }
    if (doc.contains("dt")) {
        spec.dt = number_at(doc, "dt", "");
    }
    if (doc.contains("case") && doc.contains("controls")) {
        throw ConfigError("controls", "give either case or controls, not both");
    }
    if (doc.contains("case")) {
        const auto& c = doc["case"];
        if (!c.is_number_integer() || c.get<int>() < 1 || c.get<int>() > 3) {
            throw ConfigError("case", "must be 1, 2 or 3");
        }
        spec.mode = static_cast<ControlCase>(c.get<int>());
    }
    if (doc.contains("controls")) {
        const auto& c = doc["controls"];
        if (c.is_string() && c.get<std::string>() == "uncontrolled") {
            spec.mode = UncontrolledModel{};
        }
        else if (c.is_object()) {
            detail::reject_unknown(c, {"u1", "u2"}, "controls.");
            FixedControls f;
            f.u1 = c.contains("u1") ? number_at(c, "u1", "controls.") : 0.0;
            f.u2 = c.contains("u2") ? number_at(c, "u2", "controls.") : 0.0;
            spec.mode = f;
        }
        else {
            throw ConfigError("controls", "must be {\"u1\":..,\"u2\":..} or \"uncontrolled\"");
        }
    }
    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        if (!s.is_object()) {
            throw ConfigError("sweep", "must be an object");
        }
        detail::reject_unknown(s, {"param", "values"}, "sweep.");
        if (!s.contains("param") || !s["param"].is_string()) {
            throw ConfigError("sweep.param", "missing field");
        }
        if (!s.contains("values") || !s["values"].is_array()) {
            throw ConfigError("sweep.values", "missing field");
        }
        SweepAxis axis{s["param"].get<std::string>(), {}};
        for (const auto& v : s["values"]) {
            if (!v.is_number()) {
                throw ConfigError("sweep.values", "must be numbers");
            }
            axis.values.push_back(v.get<double>());
        }
        spec.sweep = std::move(axis);
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) {
            throw ConfigError("output_dir", "must be a string");
        }
        spec.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("plot_script")) {
        if (!doc["plot_script"].is_boolean()) {
            throw ConfigError("plot_script", "must be a boolean");
        }
        spec.plot_script = doc["plot_script"].get<bool>();
    }
    validate(spec);
    return spec;
}

/// Reads and parses a scenario file; see scenario_from_json.
inline std::pair<ModelParams, ScenarioSpec> load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot read config file " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    ScenarioSpec spec = scenario_from_json(doc, path.string());
    return {spec.params, std::move(spec)};
}

/// Outcome of one run.
struct RunReport {
    std::string label;
    std::optional<double> swept_value;
    double cost = 0.0;
    State5 final_state;
    double peak_U1 = 0.0;
    std::size_t iterations = 0; ///< 0 for plain simulations
    bool converged = true;
    std::string error;          ///< non-empty when the run failed

    StateTrajectory state{TimeGrid(0.0, 1.0, 1), {}};
    std::optional<AdjointTrajectory> adjoint;
    ControlGrid controls{TimeGrid(0.0, 1.0, 1), {}, {}};
    std::vector<double> convergence_history;
    double fixed_point_residual = 0.0;
};

struct ScenarioReport {
    std::vector<RunReport> runs;
    std::optional<std::string> sweep_param;

    bool all_converged() const
    {
        return std::all_of(runs.begin(), runs.end(), [](const RunReport& r) { return r.converged && r.error.empty(); });
    }
};

namespace detail {

inline nlohmann::json state_json(const State5& x)
{
    return {{"S", x.S}, {"U1", x.U1}, {"U2", x.U2}, {"E", x.E}, {"Z", x.Z}};
}

inline nlohmann::json run_json(const RunReport& r)
{
    nlohmann::json j;
    j["label"] = r.label;
    if (r.swept_value) {
        j["swept_value"] = *r.swept_value;
    }
    if (!r.error.empty()) {
        j["error"] = r.error;
        return j;
    }
    j["cost"]                 = r.cost;
    j["final_state"]          = state_json(r.final_state);
    j["peak_U1"]              = r.peak_U1;
    j["iterations"]           = r.iterations;
    j["converged"]            = r.converged;
    j["fixed_point_residual"] = r.fixed_point_residual;
    j["history"]              = r.convergence_history;
    return j;
}

inline void write_gnuplot(const std::filesystem::path& dir, bool with_controls)
{
    auto out = io::open_output(dir / "plot.gp");
    out << "set datafile separator ','\n"
           "set key autotitle columnhead\n"
           "set xlabel 't (days)'\n"
           "set terminal pngcairo size 1200,800\n"
           "set output 'states.png'\n"
           "plot for [c=2:6] 'states.csv' using 1:c with lines\n";
    if (with_controls) {
        out << "set output 'controls.png'\n"
               "plot for [c=2:3] 'controls.csv' using 1:c with lines\n";
    }
}

inline void write_artifacts(const ScenarioSpec& spec, const RunReport& r)
{
    if (spec.output_dir.empty()) {
        return;
    }
    std::filesystem::create_directories(spec.output_dir);
    {
        auto out = io::open_output(spec.output_dir / "states.csv");
        io::write_trajectory_csv(out, r.state, io::state_columns);
    }
    {
        auto out = io::open_output(spec.output_dir / "controls.csv");
        io::write_controls_csv(out, r.controls);
    }
    if (r.adjoint) {
        auto out = io::open_output(spec.output_dir / "adjoints.csv");
        io::write_trajectory_csv(out, *r.adjoint, io::adjoint_columns);
    }
    nlohmann::json summary = run_json(r);
    summary["mode"]   = mode_label(spec.mode);
    summary["source"] = spec.source;
    summary["tf"]     = spec.tf;
    summary["dt"]     = spec.dt;
    auto out = io::open_output(spec.output_dir / "summary.json");
    out << summary.dump(2) << '\n';
    if (spec.plot_script) {
        write_gnuplot(spec.output_dir, true);
    }
}

inline double peak(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

} // namespace detail

/**
 * Runs one scenario: a plain simulation for UncontrolledModel/FixedControls,
 * the forward-backward sweep for a ControlCase. Writes states.csv,
 * controls.csv, adjoints.csv (sweeps only) and summary.json when
 * spec.output_dir is set. Solver errors are rethrown with the scenario label
 * prepended.
 */
inline ScenarioReport run_scenario(const ScenarioSpec& spec)
{
    validate(spec);
    const TimeGrid grid = spec.grid();
    RunReport r;
    r.label = spec.source + "/" + mode_label(spec.mode);
    try {
        if (const auto* c = std::get_if<ControlCase>(&spec.mode)) {
            SweepResult s = forward_backward_sweep(spec.params, spec.initial_state, grid, *c, spec.sweep_options);
            r.cost                 = s.cost;
            r.iterations           = s.iterations;
            r.converged            = s.converged;
            r.convergence_history  = s.convergence_history;
            r.fixed_point_residual = s.fixed_point_residual;
            r.state                = std::move(s.state);
            r.adjoint              = std::move(s.adjoint);
            r.controls             = std::move(s.controls);
        }
        else {
            ControlPair u{spec.u1_fixed, spec.params.p};
            if (const auto* f = std::get_if<FixedControls>(&spec.mode)) {
                u = {f->u1, f->u2};
                r.controls = ControlGrid::constant(grid, u.u1, u.u2);
                r.state    = simulate_controlled(spec.params, spec.initial_state, r.controls);
            }
            else {
                r.controls = ControlGrid::constant(grid, u.u1, u.u2);
                auto rhs = [&](double, const Vec5& x) {
                    return rhs_uncontrolled(spec.params, State5::from_vec(x), spec.u1_fixed);
                };
                r.state = rk4_forward(rhs, spec.initial_state.to_vec(), grid);
            }
            r.cost = cost_functional(r.state, r.controls, spec.params);
        }
    }
    catch (const IntegrationBlowup& e) {
        throw IntegrationBlowup(e.step(), r.label + ": " + e.what());
    }
    catch (const Error& e) {
        throw Error(r.label + ": " + e.what());
    }
    r.final_state = State5::from_vec(r.state.back());
    r.peak_U1     = detail::peak(r.state.component(iU1));
    detail::write_artifacts(spec, r);
    return {{std::move(r)}, std::nullopt};
}

/// Spec for one point of a sweep: the swept value substituted, output
/// directory `<out>/run_<k>`.
inline ScenarioSpec sweep_point(const ScenarioSpec& spec, std::size_t k)
{
    ScenarioSpec point = spec;
    point.sweep.reset();
    const double v = spec.sweep->values.at(k);
    if (spec.sweep->param == "u1_fixed") {
        point.u1_fixed = v;
    }
    else {
        *find_param(point.params, spec.sweep->param) = v;
    }
    if (!spec.output_dir.empty()) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu", k);
        point.output_dir = spec.output_dir / name;
    }
    return point;
}

/**
 * One run per swept value on a bounded worker pool. A failed point is
 * recorded in its RunReport and the sweep continues. Writes sweep.csv
 * (`value,cost,U1_final,peak_U1,iterations,converged,failed`) and
 * sweep.json into spec.output_dir after all runs finish.
 */
inline ScenarioReport run_sweep(const ScenarioSpec& spec, std::size_t max_workers = 0)
{
    validate(spec);
    if (!spec.sweep) {
        throw ConfigError("sweep", "no sweep axis given");
    }
    const std::size_t n = spec.sweep->values.size();
    if (max_workers == 0) {
        max_workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    std::vector<RunReport> runs(n);
    auto job = [&](std::size_t k) {
        const double v = spec.sweep->values[k];
        try {
            ScenarioSpec point = sweep_point(spec, k);
            validate(point);
            runs[k] = std::move(run_scenario(point).runs.front());
        }
        catch (const std::exception& e) {
            runs[k].error     = e.what();
            runs[k].converged = false;
        }
        runs[k].label       = spec.source + "/" + mode_label(spec.mode) + "/" + spec.sweep->param + "=" +
                              io::format_double(v);
        runs[k].swept_value = v;
    };
    for (std::size_t start = 0; start < n; start += max_workers) {
        std::vector<std::future<void>> batch;
        for (std::size_t k = start; k < std::min(n, start + max_workers); ++k) {
            batch.push_back(std::async(std::launch::async, job, k));
        }
        for (auto& f : batch) {
            f.get();
        }
    }

    if (!spec.output_dir.empty()) {
        std::filesystem::create_directories(spec.output_dir);
        auto csv = io::open_output(spec.output_dir / "sweep.csv");
        csv << "value,cost,U1_final,peak_U1,iterations,converged,failed\n";
        nlohmann::json j;
        j["param"] = spec.sweep->param;
        j["mode"]  = mode_label(spec.mode);
        j["runs"]  = nlohmann::json::array();
        for (const auto& r : runs) {
            csv << io::format_double(*r.swept_value) << ',' << io::format_double(r.cost) << ','
                << io::format_double(r.final_state.U1) << ',' << io::format_double(r.peak_U1) << ','
                << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << (r.error.empty() ? 0 : 1) << '\n';
            j["runs"].push_back(detail::run_json(r));
        }
        auto js = io::open_output(spec.output_dir / "sweep.json");
        js << j.dump(2) << '\n';
    }
    return {std::move(runs), spec.sweep->param};
}

} // namespace heroin_oc
