// Copyright 2026 The hetpred Authors
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

#include "commands.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace hetpred::cli
{
namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
      ("hetpred_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cmd(const std::vector<std::string> & args)
  {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string path(const std::string & name) const { return (dir_ / name).string(); }

  static std::vector<std::string> lines(const std::string & file)
  {
    std::ifstream in(file);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
      out.push_back(line);
    }
    return out;
  }

  static std::string slurp(const std::string & file)
  {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  void write(const std::string & name, const std::string & text) const
  {
    std::ofstream(path(name)) << text;
  }

  // Two small scenes plus a matching model config.
  void small_setup(int epochs, bool use_map = true)
  {
    ASSERT_EQ(run_cmd({"gen-synthetic", "--scenes", "2", "--agents", "2", "--lanes", "1", "--t-obs",
                "3", "--t-f", "4", "--seed", "3", "--out", path("data.jsonl")}),
      kSuccess);
    json cfg;
    cfg["model"] = {{"hidden", 8}, {"heads", 2}, {"modes", 2}, {"t_f", 4}, {"n_agent_layers", 3},
      {"n_map_layers", 1}, {"n_fusion_layers", 1}, {"use_map", use_map}};
    cfg["optim"] = {{"epochs", epochs}, {"batch_size", 1}};
    write("config.json", cfg.dump());
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, GenSyntheticCounts)
{
  ASSERT_EQ(run_cmd({"gen-synthetic", "--scenes", "8", "--agents", "4", "--seed", "1", "--out",
              path("a.jsonl")}),
    kSuccess);
  const auto rows = lines(path("a.jsonl"));
  ASSERT_EQ(rows.size(), 8u);
  std::size_t tracks = 0;
  for (const auto & row : rows) {
    tracks += json::parse(row)["tracks"].size();
  }
  EXPECT_EQ(tracks, 32u);
}

TEST_F(CliTest, GenSyntheticDeterministic)
{
  for (const char * name : {"a.jsonl", "b.jsonl"}) {
    ASSERT_EQ(run_cmd({"gen-synthetic", "--scenes", "3", "--noise", "0.4", "--seed", "7", "--out",
                path(name)}),
      kSuccess);
  }
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
}

TEST_F(CliTest, GenSyntheticZeroScenes)
{
  ASSERT_EQ(run_cmd({"gen-synthetic", "--scenes", "0", "--out", path("e.jsonl")}), kSuccess);
  EXPECT_TRUE(fs::exists(path("e.jsonl")));
  EXPECT_EQ(fs::file_size(path("e.jsonl")), 0u);
}

TEST_F(CliTest, UsageErrors)
{
  EXPECT_EQ(run_cmd({}), kUsage);
  EXPECT_EQ(run_cmd({"fly"}), kUsage);
  EXPECT_EQ(run_cmd({"gen-synthetic", "--scenes", "2"}), kUsage);
  EXPECT_EQ(run_cmd({"gen-synthetic", "--scenes", "many", "--out", path("x")}), kUsage);
  EXPECT_EQ(run_cmd({"eval", "--checkpoint", "c"}), kUsage);
}

TEST_F(CliTest, DataErrors)
{
  write("bad.jsonl", "{\"scene_id\": 1}\n");
  EXPECT_EQ(run_cmd({"train", "--data", path("bad.jsonl"), "--out", path("run")}), kDataError);
  EXPECT_EQ(run_cmd({"train", "--data", path("missing.jsonl"), "--out", path("run")}), kDataError);
  EXPECT_NE(err_.str().find("missing.jsonl"), std::string::npos);
}

TEST_F(CliTest, TrainOneEpochOneScene)
{
  small_setup(1);
  const auto all = lines(path("data.jsonl"));
  write("one.jsonl", all[0] + "\n");
  ASSERT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("one.jsonl"), "--out",
              path("run"), "--seed", "4"}),
    kSuccess) << err_.str();
  EXPECT_TRUE(fs::exists(path("run/checkpoint.bin")));
  EXPECT_TRUE(fs::exists(path("run/checkpoint_epoch_0.bin")));
  EXPECT_TRUE(fs::exists(path("run/config.json")));
  EXPECT_EQ(lines(path("run/train_log.tsv")).size(), 2u);  // header + 1 epoch
}

TEST_F(CliTest, LearningRateColumn)
{
  small_setup(6);
  ASSERT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("data.jsonl"), "--out",
              path("run")}),
    kSuccess) << err_.str();
  const auto rows = lines(path("run/train_log.tsv"));
  ASSERT_EQ(rows.size(), 7u);
  auto lr_of = [](const std::string & row) {
    std::istringstream in(row);
    std::string epoch, lr;
    std::getline(in, epoch, '\t');
    std::getline(in, lr, '\t');
    return std::stod(lr);
  };
  EXPECT_EQ(lr_of(rows[1]), 1e-3);
  EXPECT_EQ(lr_of(rows[6]), 5e-4);
}

TEST_F(CliTest, TrainIsReproducible)
{
  small_setup(2);
  for (const char * out : {"r1", "r2"}) {
    ASSERT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("data.jsonl"),
                "--out", path(out), "--seed", "9"}),
      kSuccess);
  }
  EXPECT_EQ(slurp(path("r1/checkpoint.bin")), slurp(path("r2/checkpoint.bin")));
}

TEST_F(CliTest, EvalReproducesLoggedMetrics)
{
  small_setup(2);
  ASSERT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("data.jsonl"), "--out",
              path("run")}),
    kSuccess);
  ASSERT_EQ(run_cmd({"eval", "--checkpoint", path("run/checkpoint.bin"), "--data",
              path("data.jsonl"), "--report", path("report.jsonl")}),
    kSuccess) << err_.str();
  const auto report = lines(path("report.jsonl"));
  ASSERT_EQ(report.size(), 3u);  // two scenes + aggregate
  const auto agg = json::parse(report.back());
  EXPECT_TRUE(agg["aggregate"].get<bool>());

  const auto log = lines(path("run/train_log.tsv"));
  std::istringstream in(log.back());
  std::vector<std::string> cols;
  for (std::string c; std::getline(in, c, '\t');) {
    cols.push_back(c);
  }
  ASSERT_EQ(cols.size(), 10u);
  EXPECT_EQ(std::stod(cols[4]), agg["minADE"].get<double>());
  EXPECT_EQ(std::stod(cols[7]), agg["minJADE"].get<double>());
  EXPECT_EQ(std::stod(cols[8]), agg["minJFDE"].get<double>());
}

TEST_F(CliTest, EvalRefusesMismatchedAblation)
{
  small_setup(1);
  ASSERT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("data.jsonl"), "--out",
              path("run")}),
    kSuccess);
  EXPECT_EQ(run_cmd({"eval", "--checkpoint", path("run/checkpoint.bin"), "--data",
              path("data.jsonl"), "--report", path("r.jsonl"), "--no-map"}),
    kDataError);
  EXPECT_NE(err_.str().find("embed.map"), std::string::npos);
  EXPECT_EQ(run_cmd({"eval", "--checkpoint", path("run/checkpoint.bin"), "--data",
              path("data.jsonl"), "--report", path("r.jsonl"), "--no-residual"}),
    kDataError);
}

TEST_F(CliTest, VacuousAblationFlag)
{
  small_setup(1, false);
  ASSERT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("data.jsonl"), "--out",
              path("run")}),
    kSuccess);
  ASSERT_EQ(run_cmd({"eval", "--checkpoint", path("run/checkpoint.bin"), "--data",
              path("data.jsonl"), "--report", path("a.jsonl")}),
    kSuccess);
  ASSERT_EQ(run_cmd({"eval", "--checkpoint", path("run/checkpoint.bin"), "--data",
              path("data.jsonl"), "--report", path("b.jsonl"), "--no-map"}),
    kSuccess);
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
}

TEST_F(CliTest, PredictExport)
{
  small_setup(1);
  ASSERT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("data.jsonl"), "--out",
              path("run")}),
    kSuccess);
  const std::string scene_id = json::parse(lines(path("data.jsonl"))[1])["scene_id"];
  ASSERT_EQ(run_cmd({"predict", "--checkpoint", path("run/checkpoint.bin"), "--data",
              path("data.jsonl"), "--scene-id", scene_id, "--plot", path("plot.jsonl")}),
    kSuccess) << err_.str();
  const auto result = json::parse(out_.str());
  EXPECT_EQ(result["scene_id"], scene_id);

  std::map<std::string, std::map<std::string, json>> by_agent;  // agent -> role -> points
  std::size_t map_nodes = 0;
  for (const auto & row : lines(path("plot.jsonl"))) {
    const auto j = json::parse(row);
    if (j["role"] == "map-node") {
      ++map_nodes;
      continue;
    }
    by_agent[j["agent_id"]][j["role"]] = j["points"];
  }
  EXPECT_GT(map_nodes, 0u);
  for (const auto & agent : result["agents"]) {
    const auto & roles = by_agent.at(agent["agent_id"]);
    EXPECT_EQ(roles.size(), 2u + 2u + 1u);  // history, gt, mode-0, mode-1, best
    const auto scores = agent["scores"].get<std::vector<double>>();
    const std::size_t best = std::max_element(scores.begin(), scores.end()) - scores.begin();
    EXPECT_EQ(agent["best_mode"].get<std::size_t>(), best);
    EXPECT_EQ(roles.at("best"), roles.at("mode-" + std::to_string(best)));
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_EQ(roles.at("mode-" + std::to_string(k)), agent["modes"][k]);
    }
  }
  EXPECT_EQ(run_cmd({"predict", "--checkpoint", path("run/checkpoint.bin"), "--data",
              path("data.jsonl"), "--scene-id", "nope"}),
    kDataError);
}

TEST_F(CliTest, NumericFailureExitCode)
{
  small_setup(3);
  json cfg = json::parse(slurp(path("config.json")));
  cfg["optim"]["lr0"] = 1e300;
  write("config.json", cfg.dump());
  EXPECT_EQ(run_cmd({"train", "--config", path("config.json"), "--data", path("data.jsonl"), "--out",
              path("run")}),
    kNumericError);
}

}  // namespace
}  // namespace hetpred::cli
