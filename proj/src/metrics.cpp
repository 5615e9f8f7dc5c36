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

#include "hetpred/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetpred
{

std::optional<MetricReport> compute_metrics(
  const Prediction & pred, const GroundTruth & gt, double threshold)
{
  const std::size_t horizon = pred.horizon();
  const std::size_t modes = pred.modes();
  std::vector<std::size_t> agents;
  for (std::size_t a = 0; a < gt.agents(); ++a) {
    if (gt.mask[a]) {
      agents.push_back(a);
    }
  }
  if (agents.empty() || modes == 0 || horizon == 0) {
    return std::nullopt;
  }
  const auto g = gt.positions.values();
  // ade[a][k], fde[a][k] over masked agents
  std::vector<std::vector<double>> ade(agents.size(), std::vector<double>(modes));
  std::vector<std::vector<double>> fde(agents.size(), std::vector<double>(modes));
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::size_t a = agents[i];
    for (std::size_t k = 0; k < modes; ++k) {
      double total = 0.0;
      for (std::size_t t = 0; t < horizon; ++t) {
        const Point2 p = pred.position(a, k, t);
        total += std::hypot(p.x - g[(a * horizon + t) * 2], p.y - g[(a * horizon + t) * 2 + 1]);
        if (t + 1 == horizon) {
          fde[i][k] = std::hypot(p.x - g[(a * horizon + t) * 2], p.y - g[(a * horizon + t) * 2 + 1]);
        }
      }
      ade[i][k] = total / static_cast<double>(horizon);
    }
  }

  MetricReport r;
  const double n = static_cast<double>(agents.size());
  double misses = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    r.min_ade += *std::min_element(ade[i].begin(), ade[i].end());
    const double best_fde = *std::min_element(fde[i].begin(), fde[i].end());
    r.min_fde += best_fde;
    misses += best_fde > threshold ? 1.0 : 0.0;
  }
  r.min_ade /= n;
  r.min_fde /= n;
  r.min_mr = misses / n;

  r.min_jade = std::numeric_limits<double>::infinity();
  r.min_jfde = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < modes; ++k) {
    double jade = 0.0, jfde = 0.0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      jade += ade[i][k];
      jfde += fde[i][k];
    }
    r.min_jade = std::min(r.min_jade, jade / n);
    r.min_jfde = std::min(r.min_jfde, jfde / n);
  }
  r.min_jmr = r.min_jfde > threshold ? 1.0 : 0.0;
  return r;
}

MetricReport aggregate_metrics(const std::vector<MetricReport> & reports)
{
  MetricReport mean;
  if (reports.empty()) {
    return mean;
  }
  for (const auto & r : reports) {
    mean.min_ade += r.min_ade;
    mean.min_fde += r.min_fde;
    mean.min_mr += r.min_mr;
    mean.min_jade += r.min_jade;
    mean.min_jfde += r.min_jfde;
    mean.min_jmr += r.min_jmr;
  }
  const double n = static_cast<double>(reports.size());
  mean.min_ade /= n;
  mean.min_fde /= n;
  mean.min_mr /= n;
  mean.min_jade /= n;
  mean.min_jfde /= n;
  mean.min_jmr /= n;
  return mean;
}

namespace
{

nlohmann::ordered_json to_json(const MetricReport & r)
{
  nlohmann::ordered_json j;
  j["minADE"] = r.min_ade;
  j["minFDE"] = r.min_fde;
  j["minMR"] = r.min_mr;
  j["minJADE"] = r.min_jade;
  j["minJFDE"] = r.min_jfde;
  j["minJMR"] = r.min_jmr;
  return j;
}

}  // namespace

std::string metrics_to_line(const std::string & scene_id, const MetricReport & report)
{
  nlohmann::ordered_json j;
  j["scene_id"] = scene_id;
  j.update(to_json(report));
  return j.dump();
}

std::string aggregate_to_line(std::size_t scenes, const MetricReport & report)
{
  nlohmann::ordered_json j;
  j["aggregate"] = true;
  j["scenes"] = scenes;
  j.update(to_json(report));
  return j.dump();
}

}  // namespace hetpred
