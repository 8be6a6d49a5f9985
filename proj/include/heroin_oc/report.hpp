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
#include "heroin_oc/io.hpp"
#include "heroin_oc/sensitivity.hpp"
#include "heroin_oc/stability.hpp"

#include "json.hpp"

#include <ostream>

namespace heroin_oc::report {

using nlohmann::json;

inline json state_json(const State5& x)
{
    return {{"S", x.S}, {"U1", x.U1}, {"U2", x.U2}, {"E", x.E}, {"Z", x.Z}};
}

inline json equilibria_json(const ModelParams& params, double u1_fixed)
{
    const auto ng = next_generation(params);
    const double R0 = basic_reproduction_number(params);
    json j;
    j["R0"] = R0;
    j["R0_spectral_radius"] = ng.R0;
    j["dfe"] = state_json(drug_free_equilibrium(params));
    const auto A = endemic_cubic_coeffs(params, u1_fixed);
    j["cubic_coeffs"] = {A[0], A[1], A[2], A[3]};
    j["descartes_case"] = std::string(to_string(classify_descartes(A, R0)));
    j["endemic"] = json::array();
    for (const auto& eq : endemic_equilibrium(params, u1_fixed)) {
        json e = state_json(eq.point);
        e["descartes_case"] = std::string(to_string(eq.descartes_case));
        e["multiplicity"] = eq.multiplicity;
        e["residual"] = eq.residual;
        j["endemic"].push_back(e);
    }
    return j;
}

inline json verdict_json(const StabilityVerdict& v)
{
    json j;
    j["point_kind"] = v.point_kind == PointKind::dfe ? "DFE" : "endemic";
    j["rh_holds"] = v.rh_holds;
    j["max_re_eig"] = v.max_re_eig;
    j["eigenvalues"] = json::array();
    for (const auto& z : v.eigenvalues) {
        j["eigenvalues"].push_back({{"re", z.real()}, {"im", z.imag()}});
    }
    j["conditions"] = json::object();
    for (const auto& c : v.conditions) {
        j["conditions"][c.name] = {{"margin", c.margin}, {"holds", c.holds}, {"informational", c.informational}};
    }
    return j;
}

/// One verdict for E0 and one per endemic equilibrium.
inline json stability_json(const ModelParams& params, double u1_fixed)
{
    json j;
    j["R0"] = basic_reproduction_number(params);
    const auto g = global_stability_condition(params);
    j["global_condition"] = {{"value", g.value}, {"holds", g.holds}};
    j["verdicts"] = json::array();
    json dfe = verdict_json(dfe_local_stability(params, u1_fixed));
    dfe["point"] = state_json(drug_free_equilibrium(params));
    j["verdicts"].push_back(dfe);
    for (const auto& eq : endemic_equilibrium(params, u1_fixed)) {
        json e = verdict_json(endemic_local_stability(params, eq, u1_fixed));
        e["point"] = state_json(eq.point);
        j["verdicts"].push_back(e);
    }
    return j;
}

/// `param,derivative,index,sign`, one row per parameter.
inline void write_sensitivity_csv(std::ostream& os, const SensitivityReport& rep)
{
    os << "param,derivative,index,sign\n";
    for (const auto& e : rep.entries) {
        os << e.param << ',' << io::format_double(e.derivative) << ',' << io::format_double(e.index) << ','
           << e.sign << '\n';
    }
}

} // namespace heroin_oc::report
