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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args)
{
    const std::string cmd = std::string(EPI_OC_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {-1, {}};
    }
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
        out.append(buf, n);
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string first_line(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::current_path() / "cli_scratch";
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

} // namespace

TEST_F(Cli, Equilibria)
{
    const auto r = run("equilibria --preset table2 --set beta1=0.05");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["R0"].get<double>(), 0.05 * 0.7 / (0.07 * 0.12), 1e-12);
    ASSERT_EQ(j["endemic"].size(), 1u);
    EXPECT_EQ(j["endemic"][0]["descartes_case"], "ii");
}

TEST_F(Cli, Stability)
{
    const auto r = run("stability --preset table1");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["verdicts"].size(), 1u);
    EXPECT_EQ(j["verdicts"][0]["point_kind"], "DFE");
    EXPECT_TRUE(j["verdicts"][0]["rh_holds"].get<bool>());
}

TEST_F(Cli, Sensitivity)
{
    const auto r = run("sensitivity --preset table2 --set p=0.05");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "param,derivative,index,sign");
    EXPECT_NE(r.out.find("beta1,"), std::string::npos);
}

TEST_F(Cli, SimulateWritesCsv)
{
    const auto out = dir_ / "sim";
    const auto r = run("simulate --preset table1 --tf 200 --out " + out.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(first_line(out / "states.csv"), "t,S,U1,U2,E,Z");
    EXPECT_EQ(first_line(out / "controls.csv"), "t,u1,u2");
    EXPECT_TRUE(fs::exists(out / "summary.json"));
}

TEST_F(Cli, OptimizeWritesArtifacts)
{
    const auto out = dir_ / "opt";
    const auto r = run("optimize --case 1 --preset table2 --tf 30 --dt 0.03 --plot --out " + out.string());
    ASSERT_EQ(r.code, 0);
    for (const char* f : {"states.csv", "controls.csv", "adjoints.csv", "summary.json", "plot.gp"}) {
        EXPECT_TRUE(fs::exists(out / f)) << f;
    }
    EXPECT_EQ(first_line(out / "adjoints.csv"), "t,l1,l2,l3,l4,l5");
    std::ifstream in(out / "summary.json");
    const auto j = nlohmann::json::parse(in);
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_GT(j["history"].size(), 1u);
}

TEST_F(Cli, SweepFromConfig)
{
    const auto cfg = dir_ / "sweep.json";
    std::ofstream(cfg) << R"({"preset": "table2", "case": 1, "sweep": {"param": "rho", "values": [0.02, 0.04]}})";
    const auto out = dir_ / "sw";
    const auto r = run("sweep --config " + cfg.string() + " --out " + out.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(first_line(out / "sweep.csv"), "value,cost,U1_final,peak_U1,iterations,converged,failed");
    EXPECT_TRUE(fs::exists(out / "run_001" / "states.csv"));
}

TEST_F(Cli, ConfigErrorsExitTwo)
{
    EXPECT_EQ(run("simulate --preset table9").code, 2);
    EXPECT_EQ(run("simulate --preset table2 --set nope=1").code, 2);
    EXPECT_EQ(run("simulate --preset table2 --set u1max=1.5").code, 2);
    EXPECT_EQ(run("optimize --case 4").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("sweep --preset table2").code, 2);
    const auto cfg = dir_ / "bad.json";
    std::ofstream(cfg) << R"({"preset": "table2", "unknown_key": 1})";
    EXPECT_EQ(run("simulate --config " + cfg.string()).code, 2);
}

TEST_F(Cli, NonConvergenceExitThree)
{
    const auto r = run("optimize --preset table2 --max-iterations 2 --out " + (dir_ / "nc").string());
    EXPECT_EQ(r.code, 3);
    std::ifstream in(dir_ / "nc" / "summary.json");
    EXPECT_FALSE(nlohmann::json::parse(in)["converged"].get<bool>());
}
