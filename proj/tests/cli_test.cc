// Copyright 2026 The amlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <gtest/gtest.h>

#include "amlkit/standard_form.h"
#include "json.hpp"

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout when `merge` is set.
CliRun run(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(AMLKIT_CLI_PATH) + " " + args +
                          (merge ? " 2>&1" : " 2>/dev/null");
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof(buf), p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         (name + "." + std::to_string(::getpid()));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("solve").code, 2);
  EXPECT_EQ(run("solve nosuchfamily").code, 2);
  EXPECT_EQ(run("solve l2ball --n 2 --method nosuch").code, 2);
  EXPECT_EQ(run("solve clnlbeam --n 5 --method simplex").code, 2);
  EXPECT_EQ(run("bench --sizes 1,x").code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, SolveFiveNodeFlow) {
  const CliRun r = run("solve mincostflow --default");
  ASSERT_EQ(r.code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_NEAR(j["objective"].get<double>(), 4.0, 1e-9);
  EXPECT_EQ(j["x"].size(), 6u);
}

TEST(Cli, SolveL2BallWithTrace) {
  const CliRun quiet = run("solve l2ball --n 2");
  ASSERT_EQ(quiet.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(quiet.out)["objective"].get<double>(),
              1.4142135623730951, 1e-5);
  const CliRun traced = run("solve l2ball --n 2 --trace", true);
  ASSERT_EQ(traced.code, 0);
  EXPECT_NE(traced.out.find("iteration 0 objective 2"), std::string::npos)
      << traced.out;
}

TEST(Cli, GenerateAndSolveFromFile) {
  const auto path = temp_file("amlkit_flow.json");
  ASSERT_EQ(run("generate mincostflow --default --out " + path.string()).code, 0);
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const amlkit::StandardForm sf = amlkit::standard_form_from_json(text);
  EXPECT_EQ(sf.num_vars, 6);
  EXPECT_EQ(sf.num_rows(), 4);
  const CliRun r = run("solve --file " + path.string());
  std::filesystem::remove(path);
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["objective"].get<double>(), 4.0, 1e-9);
  EXPECT_EQ(run("solve --file /nonexistent/form.json").code, 2);
}

TEST(Cli, GenerateNonlinearFamilyWritesStructure) {
  const CliRun r = run("generate clnlbeam --n 5");
  ASSERT_EQ(r.code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["num_vars"], 18);
  EXPECT_EQ(j["m_h"], 10);
  EXPECT_EQ(j["hessian"].size(), 12u);
}

TEST(Cli, CheckExitCodes) {
  const CliRun ok = run("check fig4 --dump-coloring");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("colors: 2"), std::string::npos) << ok.out;
  EXPECT_EQ(run("check fig4 --corrupt-derivative").code, 1);
  const CliRun beam = run("check clnlbeam --n 5");
  EXPECT_EQ(beam.code, 0);
  EXPECT_NE(beam.out.find("diagonal"), std::string::npos) << beam.out;
  EXPECT_EQ(run("check lqcp --corrupt-derivative").code, 1);
}

TEST(Cli, BenchCsv) {
  const CliRun r = run("bench --family lqcp,quadexample --sizes 4,6");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("family,size,build_ms,extract_ms,eval3_ms\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto path = temp_file("amlkit_cfg.json");
  {
    std::ofstream(path) << R"({"lqcp": {"b": 1}})";
  }
  EXPECT_EQ(run("bench --family lqcp --sizes 4 --config " + path.string()).code, 2);
  {
    std::ofstream(path) << R"({"lqcp": {"a": 0.5}})";
  }
  EXPECT_EQ(run("bench --family lqcp --sizes 4 --config " + path.string()).code, 0);
  std::filesystem::remove(path);
}

TEST(Cli, Sweep) {
  const CliRun r = run("solve l2ball --sweep n=2,3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("param,value,status,objective,pivots,cuts,nodes\n", 0), 0u);
  EXPECT_NE(r.out.find("n,2,optimal,1.41421"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n,3,optimal,1.73205"), std::string::npos) << r.out;
}

}  // namespace
