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


#include "hetpred/checkpoint.hpp"
#include "hetpred/config.hpp"
#include "hetpred/errors.hpp"
#include "hetpred/graph.hpp"
#include "hetpred/loss.hpp"
#include "hetpred/metrics.hpp"
#include "hetpred/model.hpp"
#include "hetpred/scene_io.hpp"
#include "hetpred/synthetic.hpp"
#include "hetpred/trainer.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace hetpred;

namespace
{

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const Tensor & t)
{
  Array out(std::vector<py::ssize_t>(t.shape().dims().begin(), t.shape().dims().end()));
  std::copy(t.values().begin(), t.values().end(), out.mutable_data());
  return out;
}

Tensor from_array(const Array & a)
{
  Shape shape(std::vector<std::size_t>(a.shape(), a.shape() + a.ndim()));
  return Tensor(std::move(shape), std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict report_dict(const MetricReport & r)
{
  py::dict d;
  d["minADE"] = r.min_ade;
  d["minFDE"] = r.min_fde;
  d["minMR"] = r.min_mr;
  d["minJADE"] = r.min_jade;
  d["minJFDE"] = r.min_jfde;
  d["minJMR"] = r.min_jmr;
  return d;
}

const EdgeList & find_relation(const HeteroGraph & graph, const std::string & name)
{
  for (const auto & [rel, list] : graph.edges) {
    if (rel.name() == name) {
      return list;
    }
  }
  throw py::key_error("unknown relation: " + name);
}

py::tuple forward(const Model & model, const HeteroGraph & graph)
{
  const auto pred = model.forward(graph);
  return py::make_tuple(to_array(pred.trajectories), to_array(pred.scores));
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Heterogeneous graph motion prediction";

  py::register_exception<Error>(m, "Error");

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
    .def(py::init<>())
    .def_readwrite("scenes", &SyntheticSpec::scenes)
    .def_readwrite("agents", &SyntheticSpec::agents)
    .def_readwrite("lanes", &SyntheticSpec::lanes)
    .def_readwrite("t_obs", &SyntheticSpec::t_obs)
    .def_readwrite("t_f", &SyntheticSpec::t_f)
    .def_readwrite("dt", &SyntheticSpec::dt)
    .def_readwrite("noise", &SyntheticSpec::noise);

  py::class_<Scene>(m, "Scene")
    .def_readonly("scene_id", &Scene::scene_id)
    .def_readonly("t_obs", &Scene::t_obs)
    .def_readonly("t_f", &Scene::t_f)
    .def_readonly("dt", &Scene::dt)
    .def_property_readonly("num_tracks", [](const Scene & s) { return s.tracks.size(); })
    .def_property_readonly("num_segments", [](const Scene & s) { return s.segments.size(); })
    .def_property_readonly("agent_ids",
      [](const Scene & s) {
        std::vector<std::string> ids;
        for (const auto & t : s.tracks) {
          ids.push_back(t.agent_id);
        }
        return ids;
      })
    .def("to_json", &scene_to_line);

  m.def("generate_synthetic", &generate_synthetic, py::arg("spec"), py::arg("seed"));
  m.def("load_scenes", [](const std::filesystem::path & p) { return load_scenes(p); }, py::arg("path"));
  m.def("save_scenes", &save_scenes, py::arg("path"), py::arg("scenes"));
  m.def("normalize_scene", py::overload_cast<const Scene &>(&normalize_scene), py::arg("scene"));

  py::class_<HeteroGraph>(m, "Graph")
    .def_property_readonly("num_agent_nodes", &HeteroGraph::num_agent_nodes)
    .def_property_readonly("num_map_nodes", &HeteroGraph::num_map_nodes)
    .def_property_readonly("num_tracks", &HeteroGraph::num_tracks)
    .def("relations",
      [](const HeteroGraph & g) {
        std::vector<std::string> names;
        for (const auto & [rel, list] : g.edges) {
          names.push_back(rel.name());
        }
        return names;
      })
    .def("edges",
      [](const HeteroGraph & g, const std::string & name) {
        const auto & list = find_relation(g, name);
        Array feats({static_cast<py::ssize_t>(list.size()), py::ssize_t{2}});
        std::copy(list.features.begin(), list.features.end(), feats.mutable_data());
        return py::make_tuple(py::array(py::cast(list.source)), py::array(py::cast(list.target)), feats);
      },
      py::arg("relation"))
    .def("dump", &dump_graph);

  m.def(
    "build_graph",
    [](const Scene & scene, int dilation, double t_th, double d_min) {
      GraphConfig cfg;
      cfg.dilation = dilation;
      cfg.t_th = t_th;
      cfg.d_min = d_min;
      return build_graph(scene, cfg);
    },
    py::arg("scene"), py::arg("dilation") = 4, py::arg("t_th") = 2.0, py::arg("d_min") = 5.0);

  m.def("default_config", [] { return config_to_json(RunConfig{}); });
  m.def("check_config", [](const std::string & text) { return config_to_json(config_from_json(text)); },
    py::arg("config_json"));

  py::class_<Model>(m, "Model")
    .def(py::init([](const std::string & text, std::uint64_t seed) {
      return Model(config_from_json(text).model, seed);
    }),
      py::arg("config_json"), py::arg("seed"))
    .def_static(
      "load",
      [](const std::string & text, const std::filesystem::path & path) {
        return Model(config_from_json(text).model, load_checkpoint(path));
      },
      py::arg("config_json"), py::arg("checkpoint"))
    .def("save", [](const Model & model, const std::filesystem::path & p) { save_checkpoint(p, model.parameters()); },
      py::arg("path"))
    .def_property_readonly("num_parameters",
      [](const Model & model) {
        std::size_t n = 0;
        for (const auto & [path, t] : model.parameters()) {
          n += t.numel();
        }
        return n;
      })
    .def("forward", &forward, py::arg("graph"));

  m.def(
    "compute_metrics",
    [](const Array & trajectories, const Array & gt, std::vector<bool> mask, double threshold) -> py::object {
      Prediction pred;
      pred.trajectories = from_array(trajectories);
      pred.scores = Tensor::zeros({pred.agents(), pred.modes()});
      GroundTruth truth{from_array(gt), std::move(mask)};
      const auto report = compute_metrics(pred, truth, threshold);
      return report ? py::object(report_dict(*report)) : py::object(py::none());
    },
    py::arg("trajectories"), py::arg("ground_truth"), py::arg("mask"), py::arg("threshold") = kMissThreshold);

  m.def(
    "train",
    [](const std::string & text, const std::vector<Scene> & train_scenes, const std::vector<Scene> & val_scenes) {
      const RunConfig cfg = config_from_json(text);
      const auto train = prepare_samples(train_scenes, cfg);
      const auto val = prepare_samples(val_scenes, cfg);
      Model model(cfg.model, cfg.seed);
      std::vector<py::dict> log;
      {
        py::gil_scoped_release release;
        Trainer trainer(cfg, model);
        for (const auto & r : trainer.fit(train, val)) {
          py::gil_scoped_acquire acquire;
          py::dict row;
          row["epoch"] = r.epoch;
          row["lr"] = r.lr;
          row["mean_loss"] = r.mean_loss;
          row["steps"] = r.steps;
          row["validation"] = r.validation ? py::object(report_dict(*r.validation)) : py::object(py::none());
          log.push_back(std::move(row));
        }
      }
      return py::make_tuple(std::move(model), std::move(log));
    },
    py::arg("config_json"), py::arg("train_scenes"), py::arg("val_scenes") = std::vector<Scene>{});

  m.def(
    "evaluate",
    [](const Model & model, const std::string & text, const std::vector<Scene> & scenes) {
      const auto samples = prepare_samples(scenes, config_from_json(text));
      std::vector<py::tuple> out;
      for (const auto & s : evaluate(model, samples)) {
        out.push_back(py::make_tuple(s.scene_id, report_dict(s.report)));
      }
      return py::make_tuple(out, report_dict(evaluate_aggregate(model, samples)));
    },
    py::arg("model"), py::arg("config_json"), py::arg("scenes"));
}
