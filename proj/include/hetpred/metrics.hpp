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

#pragma once

#include "hetpred/loss.hpp"
#include "hetpred/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hetpred
{

inline constexpr double kMissThreshold = 2.0;  // meters

/// Displacement metrics. Marginal variants pick the best mode per agent; joint
/// variants pick one mode index for all agents of the scene.
struct MetricReport
{
  double min_ade = 0.0;
  double min_fde = 0.0;
  double min_mr = 0.0;  // fraction of agents whose minFDE exceeds the threshold
  double min_jade = 0.0;
  double min_jfde = 0.0;
  double min_jmr = 0.0;  // 1 when the scene's minJFDE exceeds the threshold
};

/// Metrics over the masked agents of one scene; nullopt when none is masked.
std::optional<MetricReport> compute_metrics(
  const Prediction & pred, const GroundTruth & gt, double threshold = kMissThreshold);

/// Mean of each field over scenes; all zeros for an empty list.
MetricReport aggregate_metrics(const std::vector<MetricReport> & reports);

/// Line-delimited text object, e.g. {"scene_id":"s","minADE":...}.
std::string metrics_to_line(const std::string & scene_id, const MetricReport & report);
/// Aggregate summary line: {"aggregate":true,"scenes":n,...}.
std::string aggregate_to_line(std::size_t scenes, const MetricReport & report);

}  // namespace hetpred
