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

#include "hetpred/graph.hpp"
#include "hetpred/params.hpp"
#include "hetpred/tensor.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hetpred
{

struct ModelConfig
{
  std::size_t hidden = 64;  // f
  std::size_t heads = 4;
  std::size_t modes = 6;  // K
  int t_f = 30;
  int dilation = 4;
  int n_map_layers = 5;
  int n_agent_layers = 10;  // must equal t_obs of the data
  int n_fusion_layers = 2;
  double leaky_slope = 0.2;
  bool use_map = true;
  bool use_social = true;
  bool use_relational = true;
  bool use_residual = true;
  bool use_temporal = true;

  /// Throws ConfigError on inconsistent values (e.g. hidden % heads != 0).
  void validate() const;
  bool operator==(const ModelConfig &) const = default;
};

/// K trajectories per agent in the local frame plus unnormalized scores.
struct Prediction
{
  Tensor trajectories;  // [A, K, T_f, 2]
  Tensor scores;  // [A, K]

  std::size_t agents() const { return trajectories.dim(0); }
  std::size_t modes() const { return trajectories.dim(1); }
  std::size_t horizon() const { return trajectories.dim(2); }
  Point2 position(std::size_t agent, std::size_t mode, std::size_t step) const;
  double score(std::size_t agent, std::size_t mode) const;
  std::size_t best_mode(std::size_t agent) const;
};

struct Embedding
{
  Tensor agent;  // [N_A, f]
  Tensor map;  // [N_M, f]
  std::map<Relation, Tensor> edge;  // [E_r, f]; zeros when relational features are off
};

/// Sinusoidal timestep code: even i -> sin(t / 10000^(i/width)),
/// odd i -> cos(t / 10000^(i/width)).
std::vector<double> temporal_encoding(int t, std::size_t width);

/// Weights of one GATv2 relation. The attention projection W_3 of
/// [x_i || x_j || e] is stored as its three row blocks.
struct GatWeights
{
  const Tensor * self = nullptr;  // W_1, [f, f]
  const Tensor * source = nullptr;  // W_2, [f, f]
  const Tensor * att_dst = nullptr;  // W_3 rows for x_i
  const Tensor * att_src = nullptr;  // W_3 rows for x_j
  const Tensor * att_edge = nullptr;  // W_3 rows for e; null without relational features
  const Tensor * att_vec = nullptr;  // w, [f], one block of f/heads per head
};

/// Degree-normalized sum of (x_j + e_ji) W over in-edges plus bias b.
/// deg(i) is the in-degree of i and deg(j) the out-degree of j within the relation.
Tensor gcn_edge_conv(const Tensor & h_src, std::size_t n_dst, const EdgeList & edges,
  const Tensor * edge_h, const Tensor & weight, const Tensor & bias);

/// Multi-head GATv2 update with an implicit self edge per destination
/// (x_j := x_i, e := 0) that shares the softmax with the in-edges. Head
/// outputs are concatenated. When attention is non-null it receives the
/// weights as [N_dst + E, heads]: self rows first, then edges in order.
Tensor gatv2_conv(const Tensor & h_src, const Tensor & h_dst, const EdgeList & edges,
  const Tensor * edge_h, const GatWeights & w, std::size_t heads, double slope,
  Tensor * attention = nullptr);

/// norm(ReLU(sum of updates) + h_prev), the residual term dropped when !residual.
Tensor layer_merge(const std::vector<Tensor> & updates, const Tensor & h_prev,
  const Tensor & gain, const Tensor & offset, bool residual);

/// Heterogeneous encoder and multi-modal head.
class Model
{
public:
  /// Fresh model with Glorot-uniform weights drawn in lexicographic path order.
  Model(ModelConfig cfg, std::uint64_t seed);
  /// Model around existing parameters; throws LoadError listing missing and
  /// extra paths (or shape mismatches) against the config-derived layout.
  Model(ModelConfig cfg, ParameterStore params);

  static std::map<std::string, Shape> parameter_layout(const ModelConfig & cfg);

  const ModelConfig & config() const { return cfg_; }
  ParameterStore & parameters() { return params_; }
  const ParameterStore & parameters() const { return params_; }

  Embedding embed(const HeteroGraph & graph) const;
  /// One latent row per track, in track order.
  Tensor encode(const HeteroGraph & graph) const;
  /// anchors holds [A, 2] last observed positions added to every regressed
  /// offset; pass an empty span to regress positions directly.
  Prediction predict_head(const Tensor & latent, std::span<const double> anchors = {}) const;
  Prediction forward(const HeteroGraph & graph) const;

private:
  const Tensor & p(const std::string & path) const { return params_.get(path); }
  GatWeights gat(const std::string & prefix) const;
  Tensor gcn(const std::string & prefix, const Tensor & h_src, std::size_t n_dst,
    const HeteroGraph & graph, const Embedding & emb, const Relation & rel) const;
  Tensor attend(const std::string & prefix, const Tensor & h_src, const Tensor & h_dst,
    const HeteroGraph & graph, const Embedding & emb, const Relation & rel) const;

  ModelConfig cfg_;
  ParameterStore params_;
};

/// Relations whose edge features are embedded under the config's flags.
std::vector<Relation> embedded_relations(const ModelConfig & cfg);

}  // namespace hetpred
