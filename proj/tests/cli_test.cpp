// Copyright 2026 The netext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "netext/fixture.hpp"
#include "netext/topology.hpp"

namespace fs = std::filesystem;

namespace netext {
namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result Exec(const std::string& args) {
  const std::string cmd = std::string(NETEXT_BIN) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;
  std::string topo, pol;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("netext_cli_" + std::to_string(getpid()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
    ASSERT_EQ(Exec("fixture --out-dir " + dir.string()).code, 0);
    topo = (dir / "fixture.topology.json").string();
    pol = (dir / "fixture.policies").string();
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string Files() const { return "--topology " + topo + " --policies " + pol; }
};

TEST_F(CliTest, CheckFixture) {
  Result r = Exec("check " + Files());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("no violations"), std::string::npos);
  Result j = Exec("check --json " + Files());
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out)["totals"]["total"], 0);
}

TEST_F(CliTest, CheckDetachedIps) {
  Topology t = fixture_motivating_example().topology;
  t.Detach("IPS1");
  t.PruneStaleForwarding();
  const std::string broken = (dir / "broken.json").string();
  std::ofstream(broken) << render_topology(t).dump(2);
  Result r = Exec("check --json --topology " + broken + " --policies " + pol);
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_GE(j["totals"]["by_policy"].value("P2", 0), 1) << r.out;
}

TEST_F(CliTest, InputErrors) {
  EXPECT_EQ(Exec("check --topology " + (dir / "nope.json").string() + " --policies " + pol).code, 2);
  EXPECT_EQ(Exec("check --topology " + topo).code, 2);
  EXPECT_EQ(Exec("frobnicate").code, 2);
  std::ofstream(dir / "bad.policies") << "policy P1 [u_e, L_1, *, 80, TCP]\n";
  EXPECT_EQ(Exec("check --topology " + topo + " --policies " + (dir / "bad.policies").string()).code, 2);
  std::ofstream(dir / "bad.json") << "{\"nodes\": [";
  EXPECT_EQ(Exec("check --topology " + (dir / "bad.json").string() + " --policies " + pol).code, 2);
  EXPECT_EQ(Exec("extend " + Files() + " --hosts F1").code, 2);
  EXPECT_EQ(Exec("extend " + Files() + " --hosts u_1 --site mars").code, 2);
  EXPECT_EQ(Exec("eval --subnets 0 --trials 1").code, 2);
}

TEST_F(CliTest, ExtendWritesPlan) {
  const std::string plan = (dir / "plan.json").string();
  Result r = Exec("extend " + Files() + " --hosts u_1 --plan-out " + plan + " --compare-naive");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("homomorphism: holds"), std::string::npos);
  EXPECT_NE(r.out.find("naive"), std::string::npos);
  auto j = nlohmann::json::parse(Slurp(plan));
  EXPECT_GE(j["actions"].size(), 1u);
  // The written plan replays to a clean report.
  Result c = Exec("check " + Files() + " --plan " + plan);
  EXPECT_EQ(c.code, 0) << c.out;
}

TEST_F(CliTest, ExtendRestricted) {
  const std::string plan = (dir / "plan.json").string();
  Result r = Exec("extend --json " + Files() + " --hosts u_1,v_1 --restricted --plan-out " + plan);
  EXPECT_EQ(r.code, 0) << r.out;
  auto out = nlohmann::json::parse(r.out);
  EXPECT_EQ(out["homomorphism"], "holds");
  EXPECT_EQ(out["post_check"]["totals"]["total"], 0);
  for (const auto& a : nlohmann::json::parse(Slurp(plan))["actions"]) {
    EXPECT_NE(a["type"], "mirror");
  }
}

TEST_F(CliTest, ExtendInfeasible) {
  // Hairpinned paths do not fit under a nine-hop limit.
  Result r = Exec("extend " + Files() + " --hosts u_1 --hop-limit 9");
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, ExtendNonConformantStart) {
  Topology t = fixture_motivating_example().topology;
  t.Detach("IPS1");
  t.PruneStaleForwarding();
  const std::string broken = (dir / "broken.json").string();
  std::ofstream(broken) << render_topology(t).dump(2);
  EXPECT_EQ(Exec("extend --topology " + broken + " --policies " + pol + " --hosts v_1").code, 1);
}

TEST_F(CliTest, EvalZeroTrials) {
  const std::string csv = (dir / "eval.csv").string();
  Result r = Exec("eval --trials 0 --csv " + csv);
  EXPECT_EQ(r.code, 0);
  const std::string body = Slurp(csv);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 1);
}

TEST_F(CliTest, Deterministic) {
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  Result r1 = Exec("eval --seed 7 --trials 3 --csv " + a);
  Result r2 = Exec("eval --seed 7 --trials 3 --csv " + b);
  EXPECT_EQ(r1.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(Slurp(a), Slurp(b));
  EXPECT_FALSE(Slurp(a).empty());
  Result e1 = Exec("extend --json " + Files() + " --hosts u_1,v_1 --compare-naive");
  Result e2 = Exec("extend --json " + Files() + " --hosts u_1,v_1 --compare-naive");
  EXPECT_EQ(e1.out, e2.out);
  Result f1 = Exec("fixture");
  EXPECT_EQ(f1.out, Exec("fixture").out);
}

}  // namespace
}  // namespace netext
