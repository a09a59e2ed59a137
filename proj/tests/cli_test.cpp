// Copyright 2026 The qbanyan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "banyan_oracle.hpp"
#include "qbanyan/cli.hpp"

namespace qbanyan::cli {
namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qbanyan");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Json report_of(const CliRun &r) {
    EXPECT_EQ(r.code, 0) << r.err;
    return Json::parse(r.out);
}

std::string without_volatile(const std::string &text) {
    Json j = Json::parse(text);
    j.erase("duration_ms");
    j.erase("version");
    return j.dump();
}

std::filesystem::path temp_file(const std::string &name, const std::string &content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

TEST(Cli, FredkinCrossSwapsAmplitudes) {
    const auto j = report_of(run_cli({"gate", "--fredkin", "--control", "1", "--in1", "H", "--in2", "D"}));
    const auto &out = j["results"]["output"];
    EXPECT_EQ(out["probability"].get<double>(), 0.25);
    EXPECT_TRUE(out["success"].get<bool>());
    // |H>_a1 (|H>+|V>)_a2 / sqrt2 crossed: a1's photon leaves on b2.
    const double r = 1 / std::sqrt(2.0);
    const Json want = Json::array({Json::array({"b1:H@0 b2:H@0", r, 0.0}), Json::array({"b1:V@0 b2:H@0", r, 0.0})});
    ASSERT_EQ(out["state"].size(), 2U);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(out["state"][i][0], want[i][0]);
        EXPECT_NEAR(out["state"][i][1].get<double>(), r, 1e-12);
        EXPECT_NEAR(out["state"][i][2].get<double>(), 0.0, 1e-12);
    }
}

TEST(Cli, FuseAndFissionReports) {
    auto fuse = report_of(run_cli({"gate", "--fuse", "--in1", "D", "--in2", "V"}));
    EXPECT_EQ(fuse["results"]["output"]["probability"].get<double>(), 0.125);
    auto slow = report_of(run_cli({"gate", "--fuse", "--no-ff"}));
    EXPECT_EQ(slow["results"]["output"]["probability"].get<double>(), 1.0 / 32);
    // in2 = V sets bin 1; in1 = D spreads polarization.
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(fuse["results"]["fused"]["bin1_H"][0].get<double>(), r, 1e-12);
    EXPECT_NEAR(fuse["results"]["fused"]["bin1_V"][0].get<double>(), r, 1e-12);
    EXPECT_NEAR(fuse["results"]["fused"]["bin0_H"][0].get<double>(), 0.0, 1e-12);
    auto fis = report_of(run_cli({"gate", "--fission", "--in1", "V", "--in2", "H"}));
    EXPECT_EQ(fis["results"]["output"]["probability"].get<double>(), 0.125);
    EXPECT_EQ(fis["results"]["b5"]["kind"], "qubit");
    EXPECT_NEAR(std::abs(fis["results"]["b5"]["qubit"]["V"][0].get<double>()), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(fis["results"]["b6"]["qubit"]["H"][0].get<double>()), 1.0, 1e-12);
}

TEST(Cli, ControlTableAllRowsPass) {
    const auto j = report_of(run_cli({"unit", "--table1"}));
    ASSERT_EQ(j["results"]["rows"].size(), 8U);
    for (const auto &row : j["results"]["rows"]) {
        EXPECT_TRUE(row["pass"].get<bool>()) << row["controls"];
    }
    EXPECT_TRUE(j["results"]["all_pass"].get<bool>());
    EXPECT_DOUBLE_EQ(j["results"]["mean_probability_uniform_f"].get<double>(), 3.0 / 16);
}

TEST(Cli, RouteExample) {
    const auto j = report_of(run_cli({"route", "--n", "8", "--perm", "0,1,2,3,4,5,6,7", "--mode", "quantum", "--seed", "7"}));
    EXPECT_EQ(j["results"]["route"]["status"], "Delivered");
    EXPECT_EQ(j["results"]["route"]["settings"].size(), 12U);
    // Delivered payloads are reported in the input's phase.
    for (const auto &d : j["results"]["route"]["delivered"]) {
        const auto &in = j["results"]["packets"][d["packet"].get<std::size_t>()]["payload"];
        for (const char *k : {"H", "V"}) {
            for (int c = 0; c < 2; ++c) {
                EXPECT_NEAR(d["payload"]["qubit"][k][c].get<double>(), in[k][c].get<double>(), 1e-10);
            }
        }
    }
}

TEST(Cli, RouteBlockedAndFused) {
    const auto load = test_util::one_conflict_load(Wiring::OmegaShuffle, 8);
    std::vector<std::string> perm(8, "-");
    for (const auto &[s, d] : load) {
        perm[static_cast<std::size_t>(s)] = std::to_string(d);
    }
    std::string p;
    for (const auto &x : perm) {
        p += (p.empty() ? "" : ",") + x;
    }
    auto cl = report_of(run_cli({"route", "--perm", p, "--mode", "classical"}));
    EXPECT_EQ(cl["results"]["route"]["status"], "BlockedClassical");
    auto qu = report_of(run_cli({"route", "--perm", p}));
    EXPECT_EQ(qu["results"]["route"]["status"], "Delivered");
    EXPECT_EQ(qu["results"]["route"]["fused_segment_count"], 1);
}

TEST(Cli, EnumerateMatchesOracle) {
    int blocked = 0;
    for (const auto &perm : test_util::all_perms(4)) {
        blocked += test_util::oracle(Wiring::OmegaShuffle, 2, test_util::full_load(perm)).blocked;
    }
    const auto j = report_of(run_cli({"enumerate", "--n", "4"}));
    EXPECT_DOUBLE_EQ(j["results"]["blocking"]["blocked_fraction_classical"].get<double>(), blocked / 24.0);
}

TEST(Cli, UsageErrors) {
    auto missing_seed = run_cli({"stats", "--unit", "--trials", "10"});
    EXPECT_EQ(missing_seed.code, kExitUsage);
    EXPECT_NE(missing_seed.err.find("seed"), std::string::npos);
    EXPECT_EQ(run_cli({}).code, kExitUsage);
    EXPECT_EQ(run_cli({"route", "--n", "6", "--perm", "0,1,2,3,4,5"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"route", "--n", "4", "--perm", "0,0,1,2"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"route", "--n", "4"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"gate", "--fredkin", "--fuse"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"gate", "--fredkin", "--in1", "1,0,1,0"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"gate", "--fredkin", "--eta", "1.5"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"unit", "-f", "2"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"enumerate", "--n", "16"}).code, kExitUsage);
    EXPECT_EQ(run_cli({"stats", "--network", "--f", "1", "--seed", "1"}).code, kExitUsage);
}

TEST(Cli, DomainErrorExitsOne) {
    auto r = run_cli({"unit", "-f", "1", "-d", "0"});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_NE(r.err.find("unit"), std::string::npos);
}

TEST(Cli, ConfigFile) {
    const auto good = temp_file("qbanyan_good.toml", "[enumerate]\nn = 8\nwiring = \"butterfly\"\n");
    auto j = report_of(run_cli({"--config", good.string(), "enumerate"}));
    EXPECT_EQ(j["config"]["n"], 8);
    EXPECT_EQ(j["config"]["wiring"], "butterfly");
    // Flags override the file.
    j = report_of(run_cli({"--config", good.string(), "enumerate", "--n", "4"}));
    EXPECT_EQ(j["config"]["n"], 4);
    EXPECT_EQ(j["config"]["wiring"], "butterfly");

    const auto bad = temp_file("qbanyan_bad.toml", "[enumerate]\nn = 8\nfrobnicate = 3\n");
    auto r = run_cli({"--config", bad.string(), "enumerate"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("frobnicate"), std::string::npos);
    std::filesystem::remove(good);
    std::filesystem::remove(bad);
}

TEST(Cli, IdenticalSeedsGiveIdenticalReports) {
    const std::vector<std::vector<std::string>> cases{
        {"stats", "--unit", "--trials", "2000", "--seed", "3"},
        {"stats", "--network", "--n", "8", "--trials", "300", "--seed", "3", "--threads", "3"},
        {"route", "--n", "8", "--seed", "11", "--sample"},
        {"route", "--n", "16", "--seed", "5", "--wiring", "butterfly"},
        {"enumerate", "--n", "16", "--samples", "200", "--seed", "2"},
        {"unit", "--table1", "--in1", "0.6,0,0,0.8"},
    };
    for (const auto &args : cases) {
        const CliRun a = run_cli(args);
        const CliRun b = run_cli(args);
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(without_volatile(a.out), without_volatile(b.out)) << args[0];
    }
    auto serial = report_of(run_cli({"stats", "--unit", "--trials", "5000", "--seed", "9", "--threads", "1"}));
    auto parallel = report_of(run_cli({"stats", "--unit", "--trials", "5000", "--seed", "9", "--threads", "7"}));
    EXPECT_EQ(serial["results"].dump(), parallel["results"].dump());
}

TEST(Cli, ReportRoundTrip) {
    for (const auto &args : std::vector<std::vector<std::string>>{
             {"gate", "--fission", "--in1", "R", "--in2", "A"},
             {"route", "--n", "8", "--seed", "4"},
             {"stats", "--unit", "--f", "1", "--trials", "100", "--seed", "1"},
         }) {
        const CliRun r = run_cli(args);
        ASSERT_EQ(r.code, 0) << r.err;
        const Report rep = parse_report(r.out);
        EXPECT_EQ(to_json_string(rep), r.out);
        EXPECT_EQ(parse_report(to_json_string(rep)), rep);
    }
}

TEST(Cli, CsvHasScalarsOnly) {
    const CliRun r = run_cli({"gate", "--fredkin", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("key,value\n", 0), 0U);
    EXPECT_NE(r.out.find("results.output.probability,0.25"), std::string::npos);
    EXPECT_EQ(r.out.find("a1:H@0"), std::string::npos);
}

TEST(Cli, OutputFile) {
    const auto p = std::filesystem::temp_directory_path() / "qbanyan_report.json";
    const CliRun r = run_cli({"enumerate", "--n", "4", "-o", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(parse_report(ss.str()).command, "enumerate");
    std::filesystem::remove(p);
}

TEST(Cli, Help) {
    const CliRun r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("route"), std::string::npos);
}

}  // namespace
}  // namespace qbanyan::cli
