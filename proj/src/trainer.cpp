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

#include "hetpred/trainer.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numeric>
#include <random>

namespace hetpred
{

std::vector<Sample> prepare_samples(const std::vector<Scene> & scenes, const RunConfig & cfg)
{
  std::vector<Sample> samples;
  samples.reserve(scenes.size());
  for (const auto & raw : scenes) {
    if (raw.t_obs != cfg.model.n_agent_layers) {
      throw ConfigError("scene '" + raw.scene_id + "' has t_obs " + std::to_string(raw.t_obs) +
        " but the model expects " + std::to_string(cfg.model.n_agent_layers));
    }
    if (raw.t_f != cfg.model.t_f) {
      throw ConfigError("scene '" + raw.scene_id + "' has t_f " + std::to_string(raw.t_f) +
        " but the model expects " + std::to_string(cfg.model.t_f));
    }
    Sample s;
    s.scene = normalize_scene(raw);
    s.graph = build_graph(s.scene, cfg.graph);
    s.truth = make_ground_truth(s.scene, cfg.loss.supervise_all_agents);
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<SceneMetrics> evaluate(const Model & model, const std::vector<Sample> & samples)
{
  std::vector<SceneMetrics> out;
  for (const auto & s : samples) {
    GroundTruth eval_truth = make_ground_truth(s.scene, true);
    const Prediction pred = model.forward(s.graph);
    if (auto report = compute_metrics(pred, eval_truth)) {
      out.push_back({s.scene.scene_id, *report});
    }
  }
  return out;
}

MetricReport evaluate_aggregate(const Model & model, const std::vector<Sample> & samples)
{
  std::vector<MetricReport> reports;
  for (const auto & m : evaluate(model, samples)) {
    reports.push_back(m.report);
  }
  return aggregate_metrics(reports);
}

std::string log_header()
{
  return "epoch\tlr\tmean_loss\tsteps\tminADE\tminFDE\tminMR\tminJADE\tminJFDE\tminJMR";
}

std::string log_row(const EpochRecord & r)
{
  // shortest text that parses back to the same double
  auto fmt = [](double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  std::string row = std::to_string(r.epoch) + "\t" + fmt(r.lr) + "\t" + fmt(r.mean_loss) + "\t" +
    std::to_string(r.steps);
  if (r.validation) {
    const auto & v = *r.validation;
    for (double x : {v.min_ade, v.min_fde, v.min_mr, v.min_jade, v.min_jfde, v.min_jmr}) {
      row += "\t" + fmt(x);
    }
  } else {
    for (int i = 0; i < 6; ++i) {
      row += "\t-";
    }
  }
  return row;
}

Trainer::Trainer(const RunConfig & cfg, Model & model)
: cfg_(cfg), model_(model), adam_(cfg.optim), shuffle_state_(cfg.seed)
{
  cfg_.validate();
}

double Trainer::train_epoch(const std::vector<Sample> & samples, int epoch)
{
  if (samples.empty()) {
    throw ValidationError("no training scenes");
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(shuffle_state_ + static_cast<std::uint64_t>(epoch));
  std::shuffle(order.begin(), order.end(), rng);

  auto & params = model_.parameters();
  const std::size_t batch = cfg_.optim.batch_size;
  double loss_sum = 0.0;
  for (std::size_t begin = 0; begin < order.size(); begin += batch) {
    const std::size_t end = std::min(order.size(), begin + batch);
    const double scale = 1.0 / static_cast<double>(end - begin);
    params.zero_grad();
    for (std::size_t i = begin; i < end; ++i) {
      const Sample & s = samples[order[i]];
      Tape tape;
      const Prediction pred = model_.forward(s.graph);
      const LossTerms loss = compute_loss(pred, s.truth, cfg_.loss);
      const double value = loss.total.item();
      if (!std::isfinite(value)) {
        throw NumericError("non-finite loss on scene '" + s.scene.scene_id + "'");
      }
      loss_sum += value;
      tape.backward(loss.total, scale);
    }
    adam_.step(params, epoch);
  }
  return loss_sum / static_cast<double>(samples.size());
}

std::vector<EpochRecord> Trainer::fit(const std::vector<Sample> & train,
  const std::vector<Sample> & val, const std::function<void(const EpochRecord &)> & on_epoch)
{
  std::vector<EpochRecord> records;
  for (int epoch = 0; epoch < cfg_.optim.epochs; ++epoch) {
    EpochRecord r;
    r.epoch = epoch;
    r.lr = learning_rate(cfg_.optim, epoch);
    r.mean_loss = train_epoch(train, epoch);
    r.steps = adam_.steps();
    if (!val.empty()) {
      r.validation = evaluate_aggregate(model_, val);
    }
    if (on_epoch) {
      on_epoch(r);
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace hetpred
