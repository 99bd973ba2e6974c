// Copyright 2026 The Satpath Authors
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

#include "satpath/cli.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "satpath/dynamics.h"
#include "satpath/serialization.h"

namespace satpath {
namespace {

int RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "satpath");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return CliMain(static_cast<int>(argv.size()), argv.data());
}

std::string Temp(const std::string& name) { return ::testing::TempDir() + "/cli_" + name; }

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(CliTest, GenThenPathEndToEnd) {
  const std::string game = Temp("mp.json"), path = Temp("mp_path.json");
  ASSERT_EQ(RunCli({"gen", "--named", "matching_pennies", "--out", game}), kExitSuccess);
  ASSERT_EQ(RunCli({"path", "--game", game, "--start", "pure:0,0", "--epsilon", "1e-6",
                 "--out", path}),
            kExitSuccess);
  const Json j = ReadJsonFile(path);
  EXPECT_TRUE(j["terminal_is_equilibrium"].get<bool>());
  EXPECT_TRUE(ValidatePath(GameFromJson(ReadJsonFile(game)), PathFromJson(j)));
}

TEST(CliTest, EvalGeometricSeries) {
  const std::string game = Temp("one.json"), out = Temp("one_values.json");
  WriteTextFile(game, R"({"players":1,"states":1,"actions":[1],"discounts":[0.75],)"
                      R"("transitions":[[[1.0]]],"payoffs":[[[2.0]]]})");
  ASSERT_EQ(RunCli({"eval", "--game", game, "--out", out}), kExitSuccess);
  EXPECT_NEAR(ReadJsonFile(out)["values"][0][0].get<double>(), 8.0, 1e-9);
}

TEST(CliTest, MalformedGameIsDomainError) {
  const std::string game = Temp("bad.json");
  WriteTextFile(game, R"({"players":2,"actions":[2,2],"payoffs":[1,2,3]})");
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(RunCli({"path", "--game", game}), kExitDomainError);
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(err.find("/payoffs"), std::string::npos) << err;
  WriteTextFile(game, "{ not json");
  EXPECT_EQ(RunCli({"solve", "--game", game}), kExitDomainError);
  EXPECT_EQ(RunCli({"solve", "--game", Temp("missing.json")}), kExitDomainError);
}

TEST(CliTest, UsageErrors) {
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(RunCli({"path", "--game", "x.json", "--no-such-flag"}), kExitUsageError);
  EXPECT_EQ(RunCli({}), kExitUsageError);
  EXPECT_EQ(RunCli({"frobnicate"}), kExitUsageError);
  EXPECT_EQ(RunCli({"gen", "--named", "matching_pennies", "--format", "xml"}), kExitUsageError);
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(err.find("Usage"), std::string::npos);
}

TEST(CliTest, OtherSubcommands) {
  const std::string game = Temp("rps.json"), sw = Temp("switch.json");
  ASSERT_EQ(RunCli({"gen", "--named", "rock_paper_scissors", "--out", game}), kExitSuccess);
  ASSERT_EQ(RunCli({"solve", "--game", game, "--out", Temp("solve.json")}), kExitSuccess);
  EXPECT_EQ(ReadJsonFile(Temp("solve.json"))["method"], "support_enum");
  ASSERT_EQ(RunCli({"check-topology", "--game", game, "--start", "pure:0,0", "--out",
                 Temp("topo.json")}),
            kExitSuccess);
  ASSERT_EQ(RunCli({"gen", "--named", "two_state_switch", "--out", sw}), kExitSuccess);
  ASSERT_EQ(RunCli({"compile-kstep", "--game", sw, "--k", "1", "--out", Temp("k.json")}),
            kExitSuccess);
  EXPECT_EQ(ReadJsonFile(Temp("k.json"))["state_index"].size(), 4u);
  ASSERT_EQ(RunCli({"path", "--game", sw, "--start", "pure:1", "--out", Temp("sp.json")}),
            kExitSuccess);
  EXPECT_EQ(RunCli({"path", "--game", game, "--start", "pure:0", "--out", Temp("x.json")}),
            kExitDomainError);
}

TEST(CliTest, ReportIsByteIdentical) {
  const std::vector<std::string> args = {"--seed", "5", "report", "--kind", "normal_form_path",
                                         "--seeds", "6", "--players", "2-3"};
  auto first = args, second = args;
  first.insert(first.end(), {"--out", Temp("r1.json"), "--csv-out", Temp("r1.csv")});
  second.insert(second.end(), {"--out", Temp("r2.json")});
  ASSERT_EQ(RunCli(first), kExitSuccess);
  ASSERT_EQ(RunCli(second), kExitSuccess);
  EXPECT_EQ(Slurp(Temp("r1.json")), Slurp(Temp("r2.json")));
  EXPECT_EQ(Slurp(Temp("r1.csv")).rfind("seed,kind,steps,residual,success,millis\n", 0), 0u);
}

}  // namespace
}  // namespace satpath
