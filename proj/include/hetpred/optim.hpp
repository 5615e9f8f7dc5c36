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

#include "hetpred/params.hpp"

#include <map>
#include <string>
#include <vector>

namespace hetpred
{

struct OptimConfig
{
  double lr0 = 1e-3;
  double decay_factor = 0.5;
  int decay_period = 5;  // epochs
  std::size_t batch_size = 8;
  int epochs = 40;
  double weight_decay = 0.005;  // skipped for normalization parameters
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
  bool operator==(const OptimConfig &) const = default;
};

/// lr0 * decay_factor^floor(epoch / decay_period).
double learning_rate(const OptimConfig & cfg, int epoch);

/// Adam with bias correction and decoupled weight decay.
class Adam
{
public:
  explicit Adam(OptimConfig cfg) : cfg_(std::move(cfg)) {}

  /// Applies one update from the accumulated gradients. Every gradient is
  /// checked first; a non-finite one aborts the step with NumericError naming
  /// the parameter, leaving parameters and moments untouched.
  void step(ParameterStore & params, int epoch);

  std::size_t steps() const { return steps_; }

private:
  struct Moments
  {
    std::vector<double> m;
    std::vector<double> v;
  };

  OptimConfig cfg_;
  std::map<std::string, Moments> moments_;
  std::size_t steps_ = 0;
};

}  // namespace hetpred
