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

#include "hetpred/optim.hpp"

#include "hetpred/errors.hpp"

#include <cmath>

namespace hetpred
{

void OptimConfig::validate() const
{
  if (!(lr0 > 0.0) || !(decay_factor > 0.0) || decay_period < 1) {
    throw ConfigError("learning-rate schedule needs lr0 > 0, decay_factor > 0, decay_period >= 1");
  }
  if (batch_size == 0 || epochs < 0) {
    throw ConfigError("batch_size must be positive and epochs non-negative");
  }
  if (!(weight_decay >= 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
    !(epsilon > 0.0))
  {
    throw ConfigError("invalid Adam hyperparameters");
  }
}

double learning_rate(const OptimConfig & cfg, int epoch)
{
  return cfg.lr0 * std::pow(cfg.decay_factor, epoch / cfg.decay_period);
}

void Adam::step(ParameterStore & params, int epoch)
{
  for (const auto & [path, tensor] : params) {
    if (!tensor.has_grad()) {
      continue;
    }
    for (double g : tensor.node()->grad) {
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient in parameter '" + path + "'");
      }
    }
  }
  ++steps_;
  const double lr = learning_rate(cfg_, epoch);
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(cfg_.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg_.beta2, t);
  for (auto & [path, tensor] : params) {
    auto & mom = moments_[path];
    const std::size_t n = tensor.numel();
    if (mom.m.size() != n) {
      mom.m.assign(n, 0.0);
      mom.v.assign(n, 0.0);
    }
    const bool decay = !is_normalization_parameter(path) && cfg_.weight_decay > 0.0;
    const auto & grad = tensor.node()->grad;
    auto values = tensor.mutable_values();
    for (std::size_t i = 0; i < n; ++i) {
      const double g = grad.empty() ? 0.0 : grad[i];
      mom.m[i] = cfg_.beta1 * mom.m[i] + (1.0 - cfg_.beta1) * g;
      mom.v[i] = cfg_.beta2 * mom.v[i] + (1.0 - cfg_.beta2) * g * g;
      const double m_hat = mom.m[i] / correction1;
      const double v_hat = mom.v[i] / correction2;
      double update = m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
      if (decay) {
        update += cfg_.weight_decay * values[i];
      }
      values[i] -= lr * update;
    }
  }
}

}  // namespace hetpred
