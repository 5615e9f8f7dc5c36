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

#include "hetpred/loss.hpp"

#include "hetpred/errors.hpp"

#include <cmath>
#include <limits>

namespace hetpred
{

void LossConfig::validate() const
{
  if (!(lambda >= 0.0)) {
    throw ConfigError("loss lambda must be non-negative");
  }
  if (!(margin > 0.0)) {
    throw ConfigError("loss margin must be positive");
  }
}

std::size_t GroundTruth::supervised() const
{
  std::size_t n = 0;
  for (bool m : mask) {
    n += m ? 1 : 0;
  }
  return n;
}

GroundTruth make_ground_truth(const Scene & scene, bool supervise_all)
{
  const auto t_f = static_cast<std::size_t>(scene.t_f);
  const std::size_t n = scene.tracks.size();
  std::vector<double> values(n * t_f * 2, 0.0);
  GroundTruth gt;
  gt.mask.assign(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    const auto & track = scene.tracks[a];
    if (!track.future || (!supervise_all && !track.is_ego)) {
      continue;
    }
    gt.mask[a] = true;
    for (std::size_t t = 0; t < t_f; ++t) {
      values[(a * t_f + t) * 2] = (*track.future)[t].x;
      values[(a * t_f + t) * 2 + 1] = (*track.future)[t].y;
    }
  }
  gt.positions = Tensor(Shape{n, t_f, 2}, std::move(values));
  return gt;
}

namespace
{

void check_compatible(const Prediction & pred, const GroundTruth & gt)
{
  if (pred.agents() != gt.agents() || gt.positions.dim(1) != pred.horizon()) {
    throw DimensionError("prediction " + pred.trajectories.shape().to_string() +
      " does not match ground truth " + gt.positions.shape().to_string());
  }
}

}  // namespace

std::vector<std::size_t> closest_modes(const Prediction & pred, const GroundTruth & gt)
{
  check_compatible(pred, gt);
  const std::size_t t_last = pred.horizon() - 1;
  const auto g = gt.positions.values();
  std::vector<std::size_t> best(pred.agents(), 0);
  for (std::size_t a = 0; a < pred.agents(); ++a) {
    const double gx = g[(a * pred.horizon() + t_last) * 2];
    const double gy = g[(a * pred.horizon() + t_last) * 2 + 1];
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pred.modes(); ++k) {
      const Point2 p = pred.position(a, k, t_last);
      const double err = std::hypot(p.x - gx, p.y - gy);
      if (err < best_err) {
        best_err = err;
        best[a] = k;
      }
    }
  }
  return best;
}

Tensor regression_loss(const Prediction & pred, const GroundTruth & gt)
{
  const auto k_min = closest_modes(pred, gt);
  const std::size_t horizon = pred.horizon();
  const std::size_t supervised = gt.supervised();
  if (supervised == 0) {
    throw ValidationError("regression loss undefined: no supervised agent");
  }
  std::vector<std::size_t> index;
  std::vector<double> target;
  const auto g = gt.positions.values();
  for (std::size_t a = 0; a < pred.agents(); ++a) {
    if (!gt.mask[a]) {
      continue;
    }
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t c = 0; c < 2; ++c) {
        index.push_back(((a * pred.modes() + k_min[a]) * horizon + t) * 2 + c);
        target.push_back(g[(a * horizon + t) * 2 + c]);
      }
    }
  }
  const std::size_t count = target.size();
  const Tensor residual = sub(take(pred.trajectories, index), Tensor(Shape{count}, std::move(target)));
  return scale(sum(smooth_l1(residual)), 1.0 / static_cast<double>(count));
}

Tensor classification_loss(const Prediction & pred, const GroundTruth & gt, double margin)
{
  const std::size_t modes = pred.modes();
  const std::size_t supervised = gt.supervised();
  if (supervised == 0) {
    throw ValidationError("classification loss undefined: no supervised agent");
  }
  if (modes < 2) {
    return Tensor::scalar(0.0);
  }
  const auto k_min = closest_modes(pred, gt);
  std::vector<std::size_t> other, best;
  for (std::size_t a = 0; a < pred.agents(); ++a) {
    if (!gt.mask[a]) {
      continue;
    }
    for (std::size_t k = 0; k < modes; ++k) {
      if (k != k_min[a]) {
        other.push_back(a * modes + k);
        best.push_back(a * modes + k_min[a]);
      }
    }
  }
  const Tensor hinge = relu(add_scalar(sub(take(pred.scores, other), take(pred.scores, best)), margin));
  return scale(sum(hinge), 1.0 / static_cast<double>(supervised * (modes - 1)));
}

LossTerms compute_loss(const Prediction & pred, const GroundTruth & gt, const LossConfig & cfg)
{
  LossTerms terms;
  terms.regression = regression_loss(pred, gt);
  terms.classification = classification_loss(pred, gt, cfg.margin);
  terms.total = add(terms.regression, scale(terms.classification, cfg.lambda));
  return terms;
}

}  // namespace hetpred
