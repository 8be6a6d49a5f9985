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

// epi-oc: command line front end for the heroin epidemic model.

#include "heroin_oc/heroin_oc.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace heroin_oc;

constexpr int exit_config_error = 2;
constexpr int exit_not_converged = 3;

struct Flags {
    std::string config;
    std::string preset;
    std::optional<double> tf;
    std::optional<double> dt;
    std::optional<int> case_number;
    std::optional<std::size_t> max_iterations;
    std::string out;
    std::string sweep;
    std::vector<std::string> set;
    std::optional<double> u1_fixed;
    std::optional<double> u1;
    std::optional<double> u2;
    bool no_control = false;
    bool plot = false;
};

std::pair<std::string, std::string> split_assignment(const std::string& s, const std::string& flag)
{
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(flag, "expected NAME=VALUE, got '" + s + "'");
    }
    return {s.substr(0, eq), s.substr(eq + 1)};
}

double parse_number(const std::string& s, const std::string& field)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    }
    catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + s + "'");
    }
}

// Config file (or preset) first, command line flags on top.
ScenarioSpec build_spec(const Flags& f)
{
    ScenarioSpec spec;
    if (!f.config.empty()) {
        spec = load_config(f.config).second;
    }
    if (!f.preset.empty()) {
        auto p = presets::by_name(f.preset);
        if (!p) {
            throw ConfigError("preset", "unknown preset '" + f.preset + "' (known: table1, table2)");
        }
        spec.params = *p;
        spec.source = f.preset;
    }
    for (const auto& s : f.set) {
        const auto [name, value] = split_assignment(s, "--set");
        if (name == "u1_fixed") {
            spec.u1_fixed = parse_number(value, name);
            continue;
        }
        double* slot = find_param(spec.params, name);
        if (!slot) {
            throw ConfigError(name, "unknown parameter");
        }
        *slot = parse_number(value, name);
    }
    if (f.u1_fixed) {
        spec.u1_fixed = *f.u1_fixed;
    }
    if (f.tf) {
        spec.tf = *f.tf;
    }
    if (f.dt) {
        spec.dt = *f.dt;
    }
    if (f.case_number) {
        spec.mode = static_cast<ControlCase>(*f.case_number);
    }
    if (f.no_control || f.u1 || f.u2) {
        if (f.case_number) {
            throw ConfigError("--case", "cannot be combined with fixed controls");
        }
        spec.mode = FixedControls{f.u1.value_or(0.0), f.u2.value_or(0.0)};
    }
    if (!f.sweep.empty()) {
        const auto [name, list] = split_assignment(f.sweep, "--sweep");
        SweepAxis axis{name, {}};
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            axis.values.push_back(parse_number(item, "sweep.values"));
        }
        spec.sweep = std::move(axis);
    }
    if (f.max_iterations) {
        spec.sweep_options.max_iterations = *f.max_iterations;
    }
    if (!f.out.empty()) {
        spec.output_dir = f.out;
    }
    spec.plot_script = spec.plot_script || f.plot;
    validate(spec);
    return spec;
}

void print_run(const RunReport& r)
{
    nlohmann::json j = heroin_oc::detail::run_json(r);
    j.erase("history");
    std::cout << j.dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Heroin epidemic model with information-driven prevention and treatment controls"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON scenario file");
        sub->add_option("--preset", f.preset, "parameter preset: table1 (R0 < 1) or table2 (endemic)");
        sub->add_option("--set", f.set,
                        "override a parameter, NAME=VALUE (repeatable). The treatment rate p defaults to 0 in both "
                        "presets; set it here, e.g. --set p=0.05");
        sub->add_option("--u1-fixed", f.u1_fixed, "response intensity of the uncontrolled model (default 1)");
    };
    auto add_time = [&](CLI::App* sub) {
        sub->add_option("--tf", f.tf, "final time in days (default 30)");
        sub->add_option("--dt", f.dt, "RK4 step in days (default 0.03)");
        sub->add_option("--out", f.out, "output directory for CSV/JSON artifacts");
        sub->add_flag("--plot", f.plot, "also write a gnuplot script");
    };

    auto* simulate = app.add_subcommand("simulate", "integrate the model");
    add_common(simulate);
    add_time(simulate);
    simulate->add_flag("--no-control", f.no_control, "controlled system with u1 = u2 = 0");
    simulate->add_option("--u1", f.u1, "constant u1 for the controlled system");
    simulate->add_option("--u2", f.u2, "constant u2 for the controlled system");

    auto* equilibria = app.add_subcommand("equilibria", "R0, drug-free and endemic equilibria as JSON");
    add_common(equilibria);
    auto* stability = app.add_subcommand("stability", "Routh-Hurwitz and eigenvalue verdicts as JSON");
    add_common(stability);
    auto* sensitivity = app.add_subcommand("sensitivity", "normalized sensitivity indices of R0 as CSV");
    add_common(sensitivity);

    auto* optimize = app.add_subcommand("optimize", "forward-backward sweep for one control case");
    add_common(optimize);
    add_time(optimize);
    optimize->add_option("--case", f.case_number, "1: u1 only, 2: u2 only, 3: both (default 3)")
        ->check(CLI::Range(1, 3));
    optimize->add_option("--max-iterations", f.max_iterations, "sweep iteration budget (default 500)")
        ->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "one run per value of a parameter");
    add_common(sweep);
    add_time(sweep);
    sweep->add_option("--case", f.case_number, "optimize this case at every point (default: simulate)")
        ->check(CLI::Range(1, 3));
    sweep->add_option("--sweep", f.sweep, "PARAM=v1,v2,...");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config_error;
    }

    try {
        if (*optimize && !f.case_number) {
            f.case_number = 3;
        }
        ScenarioSpec spec = build_spec(f);

        if (*equilibria) {
            std::cout << report::equilibria_json(spec.params, spec.u1_fixed).dump(2) << '\n';
            return 0;
        }
        if (*stability) {
            std::cout << report::stability_json(spec.params, spec.u1_fixed).dump(2) << '\n';
            return 0;
        }
        if (*sensitivity) {
            report::write_sensitivity_csv(std::cout, sensitivity_indices(spec.params));
            return 0;
        }
        if (*sweep) {
            if (!spec.sweep) {
                throw ConfigError("--sweep", "sweep needs PARAM=v1,v2,...");
            }
            const auto rep = run_sweep(spec);
            for (const auto& r : rep.runs) {
                std::cout << r.label << ": "
                          << (r.error.empty() ? "cost=" + io::format_double(r.cost) : "error: " + r.error) << '\n';
            }
            return rep.all_converged() ? 0 : exit_not_converged;
        }
        if (*optimize && spec.output_dir.empty()) {
            spec.output_dir = ".";
        }
        spec.sweep.reset();
        const auto rep = run_scenario(spec);
        print_run(rep.runs.front());
        return rep.all_converged() ? 0 : exit_not_converged;
    }
    catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_FAILURE;
    }
}
