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
#include "heroin_oc/optimal_control.hpp"
#include "heroin_oc/rk4.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace heroin_oc::io {

/// Round-trip text for a double (17 significant digits).
inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const std::array<const char*, 5> state_columns{"S", "U1", "U2", "E", "Z"};
inline const std::array<const char*, 5> adjoint_columns{"l1", "l2", "l3", "l4", "l5"};

/// Header `t,<names>` then one LF-terminated row per grid node.
template <std::size_t N>
void write_trajectory_csv(std::ostream& os, const Trajectory<N>& traj, const std::array<const char*, N>& names)
{
    os << 't';
    for (const char* n : names) {
        os << ',' << n;
    }
    os << '\n';
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        os << format_double(traj.grid.node(i));
        for (double v : traj.values[i]) {
            os << ',' << format_double(v);
        }
        os << '\n';
    }
}

inline void write_controls_csv(std::ostream& os, const ControlGrid& u)
{
    os << "t,u1,u2\n";
    for (std::size_t i = 0; i < u.u1.size(); ++i) {
        os << format_double(u.grid.node(i)) << ',' << format_double(u.u1[i]) << ',' << format_double(u.u2[i])
           << '\n';
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const
    {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (header[j] == name) {
                std::vector<double> out;
                out.reserve(rows.size());
                for (const auto& r : rows) {
                    out.push_back(r.at(j));
                }
                return out;
            }
        }
        throw DimensionError("no column named " + name);
    }
};

/// Reads a numeric CSV with a header row.
inline CsvTable read_csv(std::istream& is)
{
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            out.push_back(cell);
        }
        return out;
    };
    if (!std::getline(is, line)) {
        throw DomainError("empty CSV");
    }
    t.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split(line)) {
            row.push_back(std::stod(cell));
        }
        if (row.size() != t.header.size()) {
            throw DimensionError("CSV row width does not match the header");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path.string());
    }
    return read_csv(in);
}

/// Opens `path` for writing in binary mode (LF stays LF) or throws.
inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DomainError("cannot write " + path.string());
    }
    return out;
}

} // namespace heroin_oc::io
