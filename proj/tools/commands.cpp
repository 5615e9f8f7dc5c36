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

#include "hetpred/checkpoint.hpp"
#include "hetpred/config.hpp"
#include "hetpred/errors.hpp"
#include "hetpred/metrics.hpp"
#include "hetpred/scene_io.hpp"
#include "hetpred/synthetic.hpp"
#include "hetpred/trainer.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace hetpred::cli
{

namespace
{

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct GenArgs
{
  SyntheticSpec spec;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainArgs
{
  std::string config;
  std::string data;
  std::string val_data;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct EvalArgs
{
  std::string checkpoint;
  std::string data;
  std::string report;
  bool no_map = false;
  bool no_social = false;
  bool no_relational = false;
  bool no_residual = false;
  bool no_temporal = false;
};

struct PredictArgs
{
  std::string checkpoint;
  std::string data;
  std::string scene_id;
  std::string plot;
};

std::ofstream open_output(const fs::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw LoadError("cannot write '" + path.string() + "'");
  }
  return out;
}

int gen_synthetic(const GenArgs & a, std::ostream & out)
{
  const auto scenes = generate_synthetic(a.spec, a.seed);
  save_scenes(a.out, scenes);
  std::size_t tracks = 0;
  for (const auto & s : scenes) {
    tracks += s.tracks.size();
  }
  out << "wrote " << scenes.size() << " scenes, " << tracks << " tracks to " << a.out << "\n";
  return kSuccess;
}

int train(const TrainArgs & a, std::ostream & out)
{
  auto scenes = load_scenes(a.data);
  RunConfig cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
  } else if (!scenes.empty()) {
    cfg.model.n_agent_layers = scenes.front().t_obs;
    cfg.model.t_f = scenes.front().t_f;
  }
  cfg.train_data = a.data;
  cfg.val_data = a.val_data;
  cfg.out_dir = a.out;
  if (a.seed) {
    cfg.seed = *a.seed;
  }
  cfg.validate();
  const auto train_samples = prepare_samples(scenes, cfg);
  const auto val_samples =
    a.val_data.empty() ? train_samples : prepare_samples(load_scenes(a.val_data, cfg.graph.segment_length), cfg);

  fs::create_directories(a.out);
  save_config(fs::path(a.out) / "config.json", cfg);
  Model model(cfg.model, cfg.seed);
  Trainer trainer(cfg, model);
  auto log = open_output(fs::path(a.out) / "train_log.tsv");
  log << log_header() << "\n";
  trainer.fit(train_samples, val_samples, [&](const EpochRecord & r) {
    log << log_row(r) << "\n" << std::flush;
    save_checkpoint(
      fs::path(a.out) / ("checkpoint_epoch_" + std::to_string(r.epoch) + ".bin"), model.parameters());
    out << log_row(r) << "\n";
  });
  save_checkpoint(fs::path(a.out) / "checkpoint.bin", model.parameters());
  out << "checkpoint written to " << (fs::path(a.out) / "checkpoint.bin").string() << "\n";
  return kSuccess;
}

/// Config saved next to the checkpoint by train.
RunConfig checkpoint_config(const std::string & checkpoint)
{
  const fs::path cfg_path = fs::path(checkpoint).parent_path() / "config.json";
  if (!fs::exists(cfg_path)) {
    throw LoadError("missing '" + cfg_path.string() + "' next to the checkpoint");
  }
  return load_config(cfg_path);
}

int eval(const EvalArgs & a, std::ostream & out)
{
  RunConfig cfg = checkpoint_config(a.checkpoint);
  ModelConfig requested = cfg.model;
  requested.use_map &= !a.no_map;
  requested.use_social &= !a.no_social;
  requested.use_relational &= !a.no_relational;
  requested.use_residual &= !a.no_residual;
  requested.use_temporal &= !a.no_temporal;
  if (!(requested == cfg.model)) {
    std::string msg = "ablation flags do not match the checkpoint's configuration";
    try {
      Model probe(requested, load_checkpoint(a.checkpoint));
    } catch (const LoadError & e) {
      msg += ": ";
      msg += e.what();
    }
    throw LoadError(msg);
  }
  Model model(cfg.model, load_checkpoint(a.checkpoint));
  const auto samples = prepare_samples(load_scenes(a.data, cfg.graph.segment_length), cfg);
  const auto per_scene = evaluate(model, samples);
  std::vector<MetricReport> reports;
  auto report = open_output(a.report);
  for (const auto & m : per_scene) {
    report << metrics_to_line(m.scene_id, m.report) << "\n";
    reports.push_back(m.report);
  }
  const std::string summary = aggregate_to_line(reports.size(), aggregate_metrics(reports));
  report << summary << "\n";
  out << summary << "\n";
  return kSuccess;
}

Json polyline(const std::string & role, const std::string & agent_id, const std::vector<Point2> & pts)
{
  Json line;
  line["role"] = role;
  if (!agent_id.empty()) {
    line["agent_id"] = agent_id;
  }
  Json points = Json::array();
  for (const auto & p : pts) {
    points.push_back({p.x, p.y});
  }
  line["points"] = std::move(points);
  return line;
}

int predict(const PredictArgs & a, std::ostream & out)
{
  RunConfig cfg = checkpoint_config(a.checkpoint);
  Model model(cfg.model, load_checkpoint(a.checkpoint));
  const auto scenes = load_scenes(a.data, cfg.graph.segment_length);
  const Scene & raw = find_scene(scenes, a.scene_id);
  const auto samples = prepare_samples({raw}, cfg);
  const Sample & s = samples.front();
  const Prediction pred = model.forward(s.graph);

  Json result;
  result["scene_id"] = s.scene.scene_id;
  result["frame"] = "local";
  Json agents = Json::array();
  std::vector<Json> plot;
  for (std::size_t a_idx = 0; a_idx < pred.agents(); ++a_idx) {
    const auto & track = s.scene.tracks[a_idx];
    Json agent;
    agent["agent_id"] = track.agent_id;
    agent["best_mode"] = pred.best_mode(a_idx);
    Json scores = Json::array();
    Json modes = Json::array();
    std::vector<Point2> history;
    for (const auto & st : track.past) {
      history.push_back({st.state.x, st.state.y});
    }
    plot.push_back(polyline("history", track.agent_id, history));
    if (track.future) {
      std::vector<Point2> gt;
      for (const auto & p : *track.future) {
        gt.push_back(p);
      }
      plot.push_back(polyline("gt", track.agent_id, gt));
    }
    for (std::size_t k = 0; k < pred.modes(); ++k) {
      scores.push_back(pred.score(a_idx, k));
      std::vector<Point2> traj;
      for (std::size_t t = 0; t < pred.horizon(); ++t) {
        traj.push_back(pred.position(a_idx, k, t));
      }
      Json mode = Json::array();
      for (const auto & p : traj) {
        mode.push_back({p.x, p.y});
      }
      modes.push_back(std::move(mode));
      plot.push_back(polyline("mode-" + std::to_string(k), track.agent_id, traj));
      if (k == pred.best_mode(a_idx)) {
        plot.push_back(polyline("best", track.agent_id, traj));
      }
    }
    agent["scores"] = std::move(scores);
    agent["modes"] = std::move(modes);
    agents.push_back(std::move(agent));
  }
  result["agents"] = std::move(agents);
  out << result.dump() << "\n";

  if (!a.plot.empty()) {
    auto file = open_output(a.plot);
    for (const auto & seg : s.scene.segments) {
      file << polyline("map-node", "", {{seg.x, seg.y}, {seg.x + seg.dx, seg.y + seg.dy}}).dump()
           << "\n";
    }
    for (const auto & line : plot) {
      file << line.dump() << "\n";
    }
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"hetpred: heterogeneous graph motion prediction"};
  app.require_subcommand(1);

  GenArgs gen;
  auto * gen_cmd = app.add_subcommand("gen-synthetic", "Write synthetic scenes");
  gen_cmd->add_option("--scenes", gen.spec.scenes)->capture_default_str();
  gen_cmd->add_option("--agents", gen.spec.agents)->capture_default_str();
  gen_cmd->add_option("--lanes", gen.spec.lanes)->capture_default_str();
  gen_cmd->add_option("--t-obs", gen.spec.t_obs)->capture_default_str();
  gen_cmd->add_option("--t-f", gen.spec.t_f)->capture_default_str();
  gen_cmd->add_option("--dt", gen.spec.dt)->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.noise)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out)->required();

  TrainArgs tr;
  std::uint64_t train_seed = 0;
  auto * train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--config", tr.config);
  train_cmd->add_option("--data", tr.data)->required();
  train_cmd->add_option("--val-data", tr.val_data);
  train_cmd->add_option("--out", tr.out)->required();
  auto * seed_opt = train_cmd->add_option("--seed", train_seed);

  EvalArgs ev;
  auto * eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", ev.checkpoint)->required();
  eval_cmd->add_option("--data", ev.data)->required();
  eval_cmd->add_option("--report", ev.report)->required();
  eval_cmd->add_flag("--no-map", ev.no_map);
  eval_cmd->add_flag("--no-social", ev.no_social);
  eval_cmd->add_flag("--no-relational", ev.no_relational);
  eval_cmd->add_flag("--no-residual", ev.no_residual);
  eval_cmd->add_flag("--no-temporal", ev.no_temporal);

  PredictArgs pr;
  auto * predict_cmd = app.add_subcommand("predict", "Predict one scene");
  predict_cmd->add_option("--checkpoint", pr.checkpoint)->required();
  predict_cmd->add_option("--data", pr.data)->required();
  predict_cmd->add_option("--scene-id", pr.scene_id)->required();
  predict_cmd->add_option("--plot", pr.plot);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError & e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*gen_cmd) {
      return gen_synthetic(gen, out);
    }
    if (*train_cmd) {
      if (*seed_opt) {
        tr.seed = train_seed;
      }
      return train(tr, out);
    }
    if (*eval_cmd) {
      return eval(ev, out);
    }
    return predict(pr, out);
  } catch (const NumericError & e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const Error & e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::filesystem::filesystem_error & e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace hetpred::cli
