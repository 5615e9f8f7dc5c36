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

#include "hetpred/config.hpp"

#include "hetpred/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace hetpred
{

namespace
{

using Json = nlohmann::ordered_json;

Json graph_json(const GraphConfig & g)
{
  return Json{{"dilation", g.dilation}, {"t_th", g.t_th}, {"d_min", g.d_min},
    {"segment_length", g.segment_length}};
}

Json model_json(const ModelConfig & m)
{
  return Json{{"hidden", m.hidden}, {"heads", m.heads}, {"modes", m.modes}, {"t_f", m.t_f},
    {"dilation", m.dilation}, {"n_map_layers", m.n_map_layers},
    {"n_agent_layers", m.n_agent_layers}, {"n_fusion_layers", m.n_fusion_layers},
    {"leaky_slope", m.leaky_slope}, {"use_map", m.use_map}, {"use_social", m.use_social},
    {"use_relational", m.use_relational}, {"use_residual", m.use_residual},
    {"use_temporal", m.use_temporal}};
}

Json loss_json(const LossConfig & l)
{
  return Json{{"lambda", l.lambda}, {"margin", l.margin},
    {"supervise_all_agents", l.supervise_all_agents}};
}

Json optim_json(const OptimConfig & o)
{
  return Json{{"lr0", o.lr0}, {"decay_factor", o.decay_factor},
    {"decay_period", o.decay_period}, {"batch_size", o.batch_size}, {"epochs", o.epochs},
    {"weight_decay", o.weight_decay}, {"beta1", o.beta1}, {"beta2", o.beta2},
    {"epsilon", o.epsilon}};
}

// Reads the keys of obj into the targets registered with field().
class Reader
{
public:
  Reader(const Json & obj, std::string section) : obj_(obj), section_(std::move(section))
  {
    if (!obj_.is_object()) {
      throw ConfigError("config section '" + section_ + "' must be an object");
    }
  }

  template <typename T>
  Reader & field(const std::string & key, T & target)
  {
    known_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) {
      return *this;
    }
    try {
      target = it->template get<T>();
    } catch (const nlohmann::json::exception &) {
      throw ConfigError("config key '" + section_ + "." + key + "' has the wrong type");
    }
    return *this;
  }

  Reader & section(const std::string & key)
  {
    known_.insert(key);
    return *this;
  }

  void finish() const
  {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!known_.count(it.key())) {
        throw ConfigError("unknown config key '" + section_ + "." + it.key() + "'");
      }
    }
  }

private:
  const Json & obj_;
  std::string section_;
  std::set<std::string> known_;
};

const Json & subobject(const Json & root, const std::string & key)
{
  static const Json empty = Json::object();
  auto it = root.find(key);
  return it == root.end() ? empty : *it;
}

}  // namespace

void RunConfig::validate() const
{
  model.validate();
  loss.validate();
  optim.validate();
  if (graph.dilation < 1 || !(graph.t_th >= 0.0) || !(graph.d_min >= 0.0) ||
    !(graph.segment_length > 0.0))
  {
    throw ConfigError("graph config needs dilation >= 1, t_th >= 0, d_min >= 0, segment_length > 0");
  }
  if (graph.dilation != model.dilation) {
    throw ConfigError("graph.dilation and model.dilation differ");
  }
}

std::string config_to_json(const RunConfig & cfg)
{
  Json j;
  j["graph"] = graph_json(cfg.graph);
  j["model"] = model_json(cfg.model);
  j["loss"] = loss_json(cfg.loss);
  j["optim"] = optim_json(cfg.optim);
  j["data"] = Json{{"train", cfg.train_data}, {"val", cfg.val_data}};
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string & text)
{
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  RunConfig cfg;
  Reader(root, "")
    .section("graph")
    .section("model")
    .section("loss")
    .section("optim")
    .section("data")
    .field("out_dir", cfg.out_dir)
    .field("seed", cfg.seed)
    .finish();

  auto & g = cfg.graph;
  Reader(subobject(root, "graph"), "graph")
    .field("dilation", g.dilation)
    .field("t_th", g.t_th)
    .field("d_min", g.d_min)
    .field("segment_length", g.segment_length)
    .finish();

  auto & m = cfg.model;
  Reader(subobject(root, "model"), "model")
    .field("hidden", m.hidden)
    .field("heads", m.heads)
    .field("modes", m.modes)
    .field("t_f", m.t_f)
    .field("dilation", m.dilation)
    .field("n_map_layers", m.n_map_layers)
    .field("n_agent_layers", m.n_agent_layers)
    .field("n_fusion_layers", m.n_fusion_layers)
    .field("leaky_slope", m.leaky_slope)
    .field("use_map", m.use_map)
    .field("use_social", m.use_social)
    .field("use_relational", m.use_relational)
    .field("use_residual", m.use_residual)
    .field("use_temporal", m.use_temporal)
    .finish();

  auto & l = cfg.loss;
  Reader(subobject(root, "loss"), "loss")
    .field("lambda", l.lambda)
    .field("margin", l.margin)
    .field("supervise_all_agents", l.supervise_all_agents)
    .finish();

  auto & o = cfg.optim;
  Reader(subobject(root, "optim"), "optim")
    .field("lr0", o.lr0)
    .field("decay_factor", o.decay_factor)
    .field("decay_period", o.decay_period)
    .field("batch_size", o.batch_size)
    .field("epochs", o.epochs)
    .field("weight_decay", o.weight_decay)
    .field("beta1", o.beta1)
    .field("beta2", o.beta2)
    .field("epsilon", o.epsilon)
    .finish();

  Reader(subobject(root, "data"), "data")
    .field("train", cfg.train_data)
    .field("val", cfg.val_data)
    .finish();

  cfg.validate();
  return cfg;
}

void save_config(const std::filesystem::path & path, const RunConfig & cfg)
{
  std::ofstream out(path);
  if (!out) {
    throw LoadError("cannot write config '" + path.string() + "'");
  }
  out << config_to_json(cfg);
}

RunConfig load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot read config '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

}  // namespace hetpred
