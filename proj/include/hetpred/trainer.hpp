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

#include "hetpred/config.hpp"
#include "hetpred/graph.hpp"
#include "hetpred/loss.hpp"
#include "hetpred/metrics.hpp"
#include "hetpred/model.hpp"
#include "hetpred/scene.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hetpred
{

/// A normalized scene with its graph and supervision targets.
struct Sample
{
  Scene scene;
  HeteroGraph graph;
  GroundTruth truth;
};

/// Normalizes each scene by its origin rule, builds its graph and targets.
/// Throws ConfigError when a scene's t_obs or t_f disagrees with the model.
std::vector<Sample> prepare_samples(
  const std::vector<Scene> & scenes, const RunConfig & cfg);

struct SceneMetrics
{
  std::string scene_id;
  MetricReport report;
};

/// Per-scene metrics for scenes with at least one evaluated agent.
std::vector<SceneMetrics> evaluate(const Model & model, const std::vector<Sample> & samples);
MetricReport evaluate_aggregate(const Model & model, const std::vector<Sample> & samples);

struct EpochRecord
{
  int epoch = 0;
  double lr = 0.0;
  double mean_loss = 0.0;
  std::size_t steps = 0;  // optimizer steps so far
  std::optional<MetricReport> validation;
};

std::string log_header();
std::string log_row(const EpochRecord & record);

/// Mini-batch training loop with a deterministic shuffle drawn from the seed.
class Trainer
{
public:
  Trainer(const RunConfig & cfg, Model & model);

  /// One pass over the samples. The loss of each batch is the mean of its
  /// scene losses; a non-finite scene loss throws NumericError naming it.
  double train_epoch(const std::vector<Sample> & samples, int epoch);

  /// Runs cfg.optim.epochs epochs, validating after each on val (skipped
  /// when empty) and invoking on_epoch with the record.
  std::vector<EpochRecord> fit(const std::vector<Sample> & train, const std::vector<Sample> & val,
    const std::function<void(const EpochRecord &)> & on_epoch = {});

  std::size_t steps() const { return adam_.steps(); }

private:
  RunConfig cfg_;
  Model & model_;
  Adam adam_;
  std::uint64_t shuffle_state_;
};

}  // namespace hetpred
