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

#include "hetpred/model.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hetpred
{

namespace
{

const Relation kPre(RelationKind::kAgentPre);
const Relation kSuc(RelationKind::kAgentSuc);
const Relation kSocial(RelationKind::kAgentSocial);
const Relation kMerge(RelationKind::kAgentMerge);
const Relation kDrivesOn(RelationKind::kDrivesOn);
const Relation kGivesInfo(RelationKind::kGivesTrafficInfo);

std::string rel_prefix(const std::string & layer, const Relation & r)
{
  return layer + ".rel." + r.name();
}

bool is_social_layer(const ModelConfig & cfg, int layer)
{
  return cfg.use_social && layer >= cfg.n_agent_layers - 2;
}

class LayoutBuilder
{
public:
  explicit LayoutBuilder(const ModelConfig & cfg) : cfg_(cfg), f_(cfg.hidden) {}

  void linear(const std::string & prefix, std::size_t in, std::size_t out)
  {
    add(prefix + ".weight", {in, out});
    add(prefix + ".bias", {out});
  }
  void norm(const std::string & prefix, std::size_t width)
  {
    add(prefix + ".gain", {width});
    add(prefix + ".offset", {width});
  }
  void weight(const std::string & prefix, std::size_t in, std::size_t out)
  {
    add(prefix + ".weight", {in, out});
  }
  void gcn(const std::string & prefix) { linear(prefix, f_, f_); }
  void gat(const std::string & prefix)
  {
    add(prefix + ".self.weight", {f_, f_});
    add(prefix + ".src.weight", {f_, f_});
    add(prefix + ".att_dst.weight", {f_, f_});
    add(prefix + ".att_src.weight", {f_, f_});
    if (cfg_.use_relational) {
      add(prefix + ".att_edge.weight", {f_, f_});
    }
    add(prefix + ".att_vec", {f_});
  }

  std::map<std::string, Shape> take() { return std::move(layout_); }

private:
  void add(const std::string & path, Shape shape)
  {
    if (!layout_.emplace(path, std::move(shape)).second) {
      throw ConfigError("duplicate parameter path " + path);
    }
  }

  const ModelConfig & cfg_;
  std::size_t f_;
  std::map<std::string, Shape> layout_;
};

Tensor linear(const Tensor & x, const Tensor & weight, const Tensor & bias)
{
  return add(matmul(x, weight), bias);
}

Tensor feature_tensor(const std::vector<double> & values, std::size_t width)
{
  return Tensor(Shape{values.size() / width, width}, values);
}

}  // namespace

void ModelConfig::validate() const
{
  if (hidden == 0 || heads == 0 || hidden % heads != 0) {
    throw ConfigError("hidden width " + std::to_string(hidden) + " must be a positive multiple of heads " +
      std::to_string(heads));
  }
  if (modes == 0) {
    throw ConfigError("mode count K must be at least 1");
  }
  if (t_f < 1) {
    throw ConfigError("t_f must be at least 1");
  }
  if (dilation < 1) {
    throw ConfigError("dilation order must be at least 1");
  }
  if (n_map_layers < 0 || n_agent_layers < 1 || n_fusion_layers < 0) {
    throw ConfigError("layer counts must be non-negative (agent layers at least 1)");
  }
  if (!(leaky_slope >= 0.0)) {
    throw ConfigError("leaky_slope must be non-negative");
  }
}

Point2 Prediction::position(std::size_t agent, std::size_t mode, std::size_t step) const
{
  const std::size_t base = ((agent * modes() + mode) * horizon() + step) * 2;
  const auto v = trajectories.values();
  return {v[base], v[base + 1]};
}

double Prediction::score(std::size_t agent, std::size_t mode) const
{
  return scores.values()[agent * modes() + mode];
}

std::size_t Prediction::best_mode(std::size_t agent) const
{
  std::size_t best = 0;
  for (std::size_t k = 1; k < modes(); ++k) {
    if (score(agent, k) > score(agent, best)) {
      best = k;
    }
  }
  return best;
}

std::vector<double> temporal_encoding(int t, std::size_t width)
{
  std::vector<double> code(width);
  for (std::size_t j = 0; j < width; ++j) {
    const double angle =
      static_cast<double>(t) / std::pow(10000.0, static_cast<double>(j) / static_cast<double>(width));
    code[j] = j % 2 == 0 ? std::sin(angle) : std::cos(angle);
  }
  return code;
}

Tensor gcn_edge_conv(const Tensor & h_src, std::size_t n_dst, const EdgeList & edges,
  const Tensor * edge_h, const Tensor & weight, const Tensor & bias)
{
  const std::size_t f = h_src.dim(1);
  const std::size_t n_edges = edges.size();
  std::vector<double> deg_in(n_dst, 0.0), deg_out(h_src.dim(0), 0.0);
  for (std::size_t e = 0; e < n_edges; ++e) {
    deg_in.at(edges.target[e]) += 1.0;
    deg_out.at(edges.source[e]) += 1.0;
  }
  std::vector<double> coeff(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) {
    coeff[e] = 1.0 / (std::sqrt(deg_in[edges.target[e]]) * std::sqrt(deg_out[edges.source[e]]));
  }
  Tensor messages = gather_rows(h_src, edges.source);
  if (edge_h != nullptr) {
    messages = add(messages, *edge_h);
  }
  messages = mul(messages, block_repeat(Tensor(Shape{n_edges, 1}, std::move(coeff)), f));
  const Tensor aggregated = segment_sum(messages, edges.target, n_dst);
  return linear(aggregated, weight, bias);
}

Tensor gatv2_conv(const Tensor & h_src, const Tensor & h_dst, const EdgeList & edges,
  const Tensor * edge_h, const GatWeights & w, std::size_t heads, double slope, Tensor * attention)
{
  const std::size_t n_dst = h_dst.dim(0);
  const std::size_t f = h_dst.dim(1);
  const std::size_t width = f / heads;

  // Attention pre-activations: [x_i || x_j || e] W_3 split into row blocks.
  const Tensor dst_att = matmul(h_dst, *w.att_dst);
  const Tensor src_att = matmul(h_src, *w.att_src);
  const Tensor self_src_att = matmul(h_dst, *w.att_src);
  Tensor edge_pre = add(gather_rows(dst_att, edges.target), gather_rows(src_att, edges.source));
  if (edge_h != nullptr && w.att_edge != nullptr) {
    edge_pre = add(edge_pre, matmul(*edge_h, *w.att_edge));
  }
  const Tensor self_pre = add(dst_att, self_src_att);

  const Tensor pre = concat_rows({self_pre, edge_pre});
  const Tensor logits = block_sum(mul(leaky_relu(pre, slope), *w.att_vec), heads);

  std::vector<std::size_t> groups(n_dst + edges.size());
  for (std::size_t i = 0; i < n_dst; ++i) {
    groups[i] = i;
  }
  std::copy(edges.target.begin(), edges.target.end(), groups.begin() + static_cast<std::ptrdiff_t>(n_dst));
  const Tensor alpha = segment_softmax(logits, groups, n_dst);
  if (attention != nullptr) {
    *attention = alpha;
  }

  std::vector<std::size_t> self_rows(n_dst), edge_rows(edges.size());
  for (std::size_t i = 0; i < n_dst; ++i) {
    self_rows[i] = i;
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    edge_rows[e] = n_dst + e;
  }
  const Tensor alpha_self = block_repeat(gather_rows(alpha, self_rows), width);
  const Tensor alpha_edge = block_repeat(gather_rows(alpha, edge_rows), width);

  const Tensor self_term = mul(alpha_self, matmul(h_dst, *w.self));
  const Tensor values = gather_rows(matmul(h_src, *w.source), edges.source);
  const Tensor neighbour_term = segment_sum(mul(alpha_edge, values), edges.target, n_dst);
  return add(self_term, neighbour_term);
}

Tensor layer_merge(const std::vector<Tensor> & updates, const Tensor & h_prev,
  const Tensor & gain, const Tensor & offset, bool residual)
{
  Tensor total = updates.empty() ? Tensor::zeros(h_prev.shape()) : updates.front();
  for (std::size_t r = 1; r < updates.size(); ++r) {
    total = add(total, updates[r]);
  }
  Tensor activated = relu(total);
  if (residual) {
    activated = add(activated, h_prev);
  }
  return layer_norm(activated, gain, offset);
}

std::vector<Relation> embedded_relations(const ModelConfig & cfg)
{
  std::vector<Relation> rels = {kPre, kSuc, kMerge};
  if (cfg.use_social) {
    rels.push_back(kSocial);
  }
  if (cfg.use_map) {
    for (const auto & r : map_relations(cfg.dilation)) {
      rels.push_back(r);
    }
    rels.push_back(kDrivesOn);
    rels.push_back(kGivesInfo);
  }
  return rels;
}

std::map<std::string, Shape> Model::parameter_layout(const ModelConfig & cfg)
{
  cfg.validate();
  const std::size_t f = cfg.hidden;
  LayoutBuilder b(cfg);

  b.linear("embed.agent.linear", kAgentFeatureDim, f);
  b.norm("embed.agent.norm", f);
  if (cfg.use_temporal) {
    b.weight("embed.temporal", 2 * f, f);
  }
  if (cfg.use_map) {
    b.linear("embed.map.linear", kMapFeatureDim, f);
    b.norm("embed.map.norm", f);
  }
  if (cfg.use_relational) {
    for (const auto & r : embedded_relations(cfg)) {
      b.linear("embed.edge." + r.name() + ".linear", 2, f);
      b.norm("embed.edge." + r.name() + ".norm", f);
    }
  }

  if (cfg.use_map) {
    for (int l = 0; l < cfg.n_map_layers; ++l) {
      const std::string layer = "map_layer." + std::to_string(l);
      for (const auto & r : map_relations(cfg.dilation)) {
        b.gcn(rel_prefix(layer, r));
      }
      b.norm(layer + ".norm", f);
    }
  }
  for (int l = 0; l < cfg.n_agent_layers; ++l) {
    const std::string layer = "agent_layer." + std::to_string(l);
    b.gcn(rel_prefix(layer, kPre));
    b.gcn(rel_prefix(layer, kSuc));
    if (is_social_layer(cfg, l)) {
      b.gat(rel_prefix(layer, kSocial));
    }
    b.norm(layer + ".norm", f);
  }
  if (cfg.use_map) {
    for (int l = 0; l < cfg.n_fusion_layers; ++l) {
      const std::string layer = "fusion_layer." + std::to_string(l);
      b.gcn(rel_prefix(layer, kPre));
      b.gcn(rel_prefix(layer, kSuc));
      if (cfg.use_social) {
        b.gat(rel_prefix(layer, kSocial));
      }
      b.gat(rel_prefix(layer, kGivesInfo));
      for (const auto & r : map_relations(cfg.dilation)) {
        b.gcn(rel_prefix(layer, r));
      }
      b.gat(rel_prefix(layer, kDrivesOn));
      b.norm(layer + ".norm.agent", f);
      b.norm(layer + ".norm.map", f);
    }
  }
  b.gat(rel_prefix("merge_layer", kMerge));
  b.norm("merge_layer.norm", f);

  const std::size_t out = 2 * static_cast<std::size_t>(cfg.t_f);
  const std::size_t score_in = f + out;
  for (std::size_t k = 0; k < cfg.modes; ++k) {
    const std::string reg = "head.reg.k" + std::to_string(k);
    b.linear(reg + ".l1", f, f);
    b.norm(reg + ".norm", f);
    b.linear(reg + ".l2", f, out);
    const std::string cls = "head.cls.k" + std::to_string(k);
    b.linear(cls + ".l1", score_in, score_in);
    b.norm(cls + ".norm", score_in);
    b.linear(cls + ".l2", score_in, 1);
  }
  return b.take();
}

Model::Model(ModelConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg))
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto & [path, shape] : parameter_layout(cfg_)) {
    Tensor & t = params_.add(path, shape);
    auto v = t.mutable_values();
    const auto ends_with = [&](std::string_view suffix) {
      return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".weight")) {
      const double limit = std::sqrt(6.0 / static_cast<double>(shape[0] + shape[1]));
      for (auto & x : v) {
        x = limit * unit(rng);
      }
    } else if (ends_with(".att_vec")) {
      const double limit = std::sqrt(6.0 / static_cast<double>(cfg_.hidden / cfg_.heads + 1));
      for (auto & x : v) {
        x = limit * unit(rng);
      }
    } else if (ends_with(".gain")) {
      std::fill(v.begin(), v.end(), 1.0);
    }
  }
}

Model::Model(ModelConfig cfg, ParameterStore params) : cfg_(std::move(cfg)), params_(std::move(params))
{
  const auto expected = parameter_layout(cfg_);
  std::string missing, extra, mismatched;
  for (const auto & [path, shape] : expected) {
    if (!params_.contains(path)) {
      missing += " " + path;
    } else if (!(params_.get(path).shape() == shape)) {
      mismatched += " " + path + params_.get(path).shape().to_string() + "!=" + shape.to_string();
    }
  }
  for (const auto & path : params_.paths()) {
    if (!expected.contains(path)) {
      extra += " " + path;
    }
  }
  if (!missing.empty() || !extra.empty() || !mismatched.empty()) {
    std::string msg = "parameter set does not match the model configuration";
    if (!missing.empty()) {
      msg += "; missing:" + missing;
    }
    if (!extra.empty()) {
      msg += "; extra:" + extra;
    }
    if (!mismatched.empty()) {
      msg += "; shape mismatch:" + mismatched;
    }
    throw LoadError(msg);
  }
}

GatWeights Model::gat(const std::string & prefix) const
{
  GatWeights w;
  w.self = &p(prefix + ".self.weight");
  w.source = &p(prefix + ".src.weight");
  w.att_dst = &p(prefix + ".att_dst.weight");
  w.att_src = &p(prefix + ".att_src.weight");
  w.att_edge = cfg_.use_relational ? &p(prefix + ".att_edge.weight") : nullptr;
  w.att_vec = &p(prefix + ".att_vec");
  return w;
}

Tensor Model::gcn(const std::string & prefix, const Tensor & h_src, std::size_t n_dst,
  const HeteroGraph & graph, const Embedding & emb, const Relation & rel) const
{
  const Tensor * edge_h = cfg_.use_relational ? &emb.edge.at(rel) : nullptr;
  return gcn_edge_conv(h_src, n_dst, graph.relation(rel), edge_h, p(prefix + ".weight"), p(prefix + ".bias"));
}

Tensor Model::attend(const std::string & prefix, const Tensor & h_src, const Tensor & h_dst,
  const HeteroGraph & graph, const Embedding & emb, const Relation & rel) const
{
  const Tensor * edge_h = cfg_.use_relational ? &emb.edge.at(rel) : nullptr;
  return gatv2_conv(h_src, h_dst, graph.relation(rel), edge_h, gat(prefix), cfg_.heads, cfg_.leaky_slope);
}

Embedding Model::embed(const HeteroGraph & graph) const
{
  auto block = [&](const Tensor & x, const std::string & prefix) {
    return layer_norm(relu(linear(x, p(prefix + ".linear.weight"), p(prefix + ".linear.bias"))),
      p(prefix + ".norm.gain"), p(prefix + ".norm.offset"));
  };
  const std::size_t f = cfg_.hidden;
  Embedding emb;
  emb.agent = block(feature_tensor(graph.agent_feats, kAgentFeatureDim), "embed.agent");
  if (cfg_.use_temporal) {
    std::vector<double> codes;
    codes.reserve(graph.num_agent_nodes() * f);
    for (const auto & meta : graph.agent_meta) {
      const auto code = temporal_encoding(meta.t, f);
      codes.insert(codes.end(), code.begin(), code.end());
    }
    const Tensor tau(Shape{graph.num_agent_nodes(), f}, std::move(codes));
    emb.agent = matmul(concat_cols({emb.agent, tau}), p("embed.temporal.weight"));
  }
  if (cfg_.use_map) {
    emb.map = block(feature_tensor(graph.map_feats, kMapFeatureDim), "embed.map");
  } else {
    emb.map = Tensor::zeros(Shape{graph.num_map_nodes(), f});
  }
  for (const auto & r : embedded_relations(cfg_)) {
    const auto & list = graph.relation(r);
    if (cfg_.use_relational) {
      emb.edge.emplace(r, block(feature_tensor(list.features, 2), "embed.edge." + r.name()));
    } else {
      emb.edge.emplace(r, Tensor::zeros(Shape{list.size(), f}));
    }
  }
  return emb;
}

Tensor Model::encode(const HeteroGraph & graph) const
{
  const Embedding emb = embed(graph);
  const std::size_t n_agent = graph.num_agent_nodes();
  const std::size_t n_map = graph.num_map_nodes();
  Tensor agent = emb.agent;
  Tensor map = emb.map;

  if (cfg_.use_map) {
    for (int l = 0; l < cfg_.n_map_layers; ++l) {
      const std::string layer = "map_layer." + std::to_string(l);
      std::vector<Tensor> updates;
      for (const auto & r : map_relations(cfg_.dilation)) {
        updates.push_back(gcn(rel_prefix(layer, r), map, n_map, graph, emb, r));
      }
      map = layer_merge(updates, map, p(layer + ".norm.gain"), p(layer + ".norm.offset"), cfg_.use_residual);
    }
  }

  for (int l = 0; l < cfg_.n_agent_layers; ++l) {
    const std::string layer = "agent_layer." + std::to_string(l);
    std::vector<Tensor> updates = {
      gcn(rel_prefix(layer, kPre), agent, n_agent, graph, emb, kPre),
      gcn(rel_prefix(layer, kSuc), agent, n_agent, graph, emb, kSuc)};
    if (is_social_layer(cfg_, l)) {
      updates.push_back(attend(rel_prefix(layer, kSocial), agent, agent, graph, emb, kSocial));
    }
    agent = layer_merge(updates, agent, p(layer + ".norm.gain"), p(layer + ".norm.offset"), cfg_.use_residual);
  }

  if (cfg_.use_map) {
    for (int l = 0; l < cfg_.n_fusion_layers; ++l) {
      const std::string layer = "fusion_layer." + std::to_string(l);
      std::vector<Tensor> agent_updates = {
        gcn(rel_prefix(layer, kPre), agent, n_agent, graph, emb, kPre),
        gcn(rel_prefix(layer, kSuc), agent, n_agent, graph, emb, kSuc)};
      if (cfg_.use_social) {
        agent_updates.push_back(attend(rel_prefix(layer, kSocial), agent, agent, graph, emb, kSocial));
      }
      agent_updates.push_back(attend(rel_prefix(layer, kGivesInfo), map, agent, graph, emb, kGivesInfo));

      std::vector<Tensor> map_updates;
      for (const auto & r : map_relations(cfg_.dilation)) {
        map_updates.push_back(gcn(rel_prefix(layer, r), map, n_map, graph, emb, r));
      }
      map_updates.push_back(attend(rel_prefix(layer, kDrivesOn), agent, map, graph, emb, kDrivesOn));

      const Tensor next_agent = layer_merge(agent_updates, agent, p(layer + ".norm.agent.gain"),
        p(layer + ".norm.agent.offset"), cfg_.use_residual);
      map = layer_merge(map_updates, map, p(layer + ".norm.map.gain"), p(layer + ".norm.map.offset"),
        cfg_.use_residual);
      agent = next_agent;
    }
  }

  const Tensor merged = attend(rel_prefix("merge_layer", kMerge), agent, agent, graph, emb, kMerge);
  agent = layer_merge({merged}, agent, p("merge_layer.norm.gain"), p("merge_layer.norm.offset"), cfg_.use_residual);
  return gather_rows(agent, graph.readout_index);
}

Prediction Model::predict_head(const Tensor & latent, std::span<const double> anchors) const
{
  const std::size_t n = latent.dim(0);
  const std::size_t out = 2 * static_cast<std::size_t>(cfg_.t_f);
  if (!anchors.empty() && anchors.size() != 2 * n) {
    throw DimensionError("predict_head: " + std::to_string(anchors.size()) + " anchor values for " +
      std::to_string(n) + " agents");
  }
  std::vector<double> anchor_rep(n * out, 0.0);
  if (!anchors.empty()) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t j = 0; j < out; ++j) {
        anchor_rep[a * out + j] = anchors[2 * a + j % 2];
      }
    }
  }
  const Tensor anchor_tensor(Shape{n, out}, std::move(anchor_rep));

  // linear with residual -> ReLU -> LayerNorm -> linear
  auto mlp = [&](const Tensor & x, const std::string & prefix) {
    const Tensor hidden = add(linear(x, p(prefix + ".l1.weight"), p(prefix + ".l1.bias")), x);
    const Tensor normed = layer_norm(relu(hidden), p(prefix + ".norm.gain"), p(prefix + ".norm.offset"));
    return linear(normed, p(prefix + ".l2.weight"), p(prefix + ".l2.bias"));
  };

  std::vector<Tensor> trajectories, scores;
  for (std::size_t k = 0; k < cfg_.modes; ++k) {
    const std::string suffix = ".k" + std::to_string(k);
    const Tensor offsets = mlp(latent, "head.reg" + suffix);
    trajectories.push_back(add(offsets, anchor_tensor));
    scores.push_back(mlp(concat_cols({latent, offsets}), "head.cls" + suffix));
  }
  Prediction pred;
  pred.trajectories = reshape(concat_cols(trajectories),
    Shape{n, cfg_.modes, static_cast<std::size_t>(cfg_.t_f), 2});
  pred.scores = concat_cols(scores);
  return pred;
}

Prediction Model::forward(const HeteroGraph & graph) const
{
  std::vector<double> anchors;
  anchors.reserve(2 * graph.num_tracks());
  for (auto node : graph.readout_index) {
    const Point2 pos = graph.agent_position(node);
    anchors.push_back(pos.x);
    anchors.push_back(pos.y);
  }
  return predict_head(encode(graph), anchors);
}

}  // namespace hetpred
