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

#include "hetpred/model.hpp"
#include "hetpred/scene.hpp"
#include "hetpred/tensor.hpp"

#include <vector>

namespace hetpred
{

struct LossConfig
{
  double lambda = 1.0;  // weight of the classification term
  double margin = 0.2;
  bool supervise_all_agents = true;

  void validate() const;
  bool operator==(const LossConfig &) const = default;
};

/// Future positions per track plus which tracks are supervised / evaluated.
struct GroundTruth
{
  Tensor positions;  // [A, T_f, 2]; rows of unmasked agents are zero
  std::vector<bool> mask;

  std::size_t agents() const { return mask.size(); }
  std::size_t supervised() const;
};

/// Tracks with a future are masked in; with supervise_all == false only the ego.
GroundTruth make_ground_truth(const Scene & scene, bool supervise_all);

/// Per agent, the mode with the smallest final-step Euclidean error; ties go to
/// the lowest mode index.
std::vector<std::size_t> closest_modes(const Prediction & pred, const GroundTruth & gt);

/// Mean smooth-L1 over masked agents, timesteps and both coordinates, taken
/// only at each agent's closest mode. Throws ValidationError with no masked agent.
Tensor regression_loss(const Prediction & pred, const GroundTruth & gt);

/// 1/(A(K-1)) * sum over masked agents and k != k_min of
/// max(0, s_k + margin - s_kmin). Zero when K == 1.
Tensor classification_loss(const Prediction & pred, const GroundTruth & gt, double margin);

struct LossTerms
{
  Tensor total;
  Tensor regression;
  Tensor classification;
};

LossTerms compute_loss(const Prediction & pred, const GroundTruth & gt, const LossConfig & cfg);

}  // namespace hetpred
