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

#include "hetpred/graph.hpp"

#include "hetpred/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <utility>

namespace hetpred
{

NodeType Relation::source_type() const
{
  switch (kind_) {
    case RelationKind::kAgentPre:
    case RelationKind::kAgentSuc:
    case RelationKind::kAgentSocial:
    case RelationKind::kAgentMerge:
    case RelationKind::kDrivesOn:
      return NodeType::kAgent;
    default:
      return NodeType::kMap;
  }
}

NodeType Relation::target_type() const
{
  switch (kind_) {
    case RelationKind::kAgentPre:
    case RelationKind::kAgentSuc:
    case RelationKind::kAgentSocial:
    case RelationKind::kAgentMerge:
    case RelationKind::kGivesTrafficInfo:
      return NodeType::kAgent;
    default:
      return NodeType::kMap;
  }
}

std::string Relation::name() const
{
  switch (kind_) {
    case RelationKind::kAgentPre: return "agent.pre.agent";
    case RelationKind::kAgentSuc: return "agent.suc.agent";
    case RelationKind::kAgentSocial: return "agent.social.agent";
    case RelationKind::kAgentMerge: return "agent.merge.agent";
    case RelationKind::kMapPre: return "map.pre-" + std::to_string(dilation_) + ".map";
    case RelationKind::kMapSuc: return "map.suc-" + std::to_string(dilation_) + ".map";
    case RelationKind::kMapLeft: return "map.left.map";
    case RelationKind::kMapRight: return "map.right.map";
    case RelationKind::kDrivesOn: return "agent.drives-on.map";
    case RelationKind::kGivesTrafficInfo: return "map.gives-traffic-info.agent";
  }
  return "unknown";
}

std::vector<Relation> map_relations(int dilation_order)
{
  std::vector<Relation> out;
  for (int i = 1; i <= dilation_order; ++i) {
    out.emplace_back(RelationKind::kMapPre, i);
    out.emplace_back(RelationKind::kMapSuc, i);
  }
  out.emplace_back(RelationKind::kMapLeft);
  out.emplace_back(RelationKind::kMapRight);
  return out;
}

std::vector<Relation> all_relations(int dilation_order)
{
  std::vector<Relation> out = {
    Relation(RelationKind::kAgentPre), Relation(RelationKind::kAgentSuc),
    Relation(RelationKind::kAgentSocial), Relation(RelationKind::kAgentMerge)};
  for (const auto & r : map_relations(dilation_order)) {
    out.push_back(r);
  }
  out.emplace_back(RelationKind::kDrivesOn);
  out.emplace_back(RelationKind::kGivesTrafficInfo);
  return out;
}

Point2 HeteroGraph::agent_position(std::size_t node) const
{
  return {agent_feats.at(node * kAgentFeatureDim), agent_feats.at(node * kAgentFeatureDim + 1)};
}

Point2 HeteroGraph::map_position(std::size_t node) const
{
  return {map_feats.at(node * kMapFeatureDim), map_feats.at(node * kMapFeatureDim + 1)};
}

Point2 HeteroGraph::node_position(NodeType type, std::size_t node) const
{
  return type == NodeType::kAgent ? agent_position(node) : map_position(node);
}

const EdgeList & HeteroGraph::relation(const Relation & r) const
{
  static const EdgeList kEmpty;
  auto it = edges.find(r);
  return it == edges.end() ? kEmpty : it->second;
}

NodeIndex::NodeIndex(const Scene & scene)
{
  for (std::size_t ti = 0; ti < scene.tracks.size(); ++ti) {
    std::vector<std::size_t> nodes;
    for (const auto & ts : scene.tracks[ti].past) {
      nodes.push_back(agent_meta.size());
      agent_meta.push_back({ti, ts.t});
      agent_pos.push_back({ts.state.x, ts.state.y});
      agent_speed.push_back(std::hypot(ts.state.vx, ts.state.vy));
    }
    track_nodes.push_back(std::move(nodes));
  }
  for (const auto & seg : scene.segments) {
    map_pos.push_back({seg.x, seg.y});
  }
}

namespace
{

using EdgePairs = std::vector<std::pair<std::size_t, std::size_t>>;  // (source, target)

const std::vector<Point2> & positions(const NodeIndex & index, NodeType type)
{
  return type == NodeType::kAgent ? index.agent_pos : index.map_pos;
}

EdgeList finalize(const Relation & rel, EdgePairs pairs, const NodeIndex & index)
{
  const auto & src_pos = positions(index, rel.source_type());
  const auto & dst_pos = positions(index, rel.target_type());
  std::sort(pairs.begin(), pairs.end(), [&](const auto & a, const auto & b) {
    const auto & pa = src_pos[a.first];
    const auto & pb = src_pos[b.first];
    return std::tie(a.second, pa.x, pa.y, a.first) < std::tie(b.second, pb.x, pb.y, b.first);
  });
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  EdgeList list;
  for (const auto & [s, t] : pairs) {
    list.source.push_back(s);
    list.target.push_back(t);
    list.features.push_back(dst_pos[t].x - src_pos[s].x);
    list.features.push_back(dst_pos[t].y - src_pos[s].y);
  }
  return list;
}

}  // namespace

RelationEdges build_agent_edges(const Scene & scene)
{
  const NodeIndex index(scene);
  EdgePairs pre, suc, merge;
  for (const auto & nodes : index.track_nodes) {
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      pre.emplace_back(nodes[k], nodes[k + 1]);
      suc.emplace_back(nodes[k + 1], nodes[k]);
    }
    if (!nodes.empty()) {
      for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        merge.emplace_back(nodes[k], nodes.back());
      }
    }
  }
  RelationEdges out;
  const Relation r_pre(RelationKind::kAgentPre), r_suc(RelationKind::kAgentSuc),
    r_merge(RelationKind::kAgentMerge);
  out.emplace(r_pre, finalize(r_pre, std::move(pre), index));
  out.emplace(r_suc, finalize(r_suc, std::move(suc), index));
  out.emplace(r_merge, finalize(r_merge, std::move(merge), index));
  return out;
}

RelationEdges build_social_edges(const Scene & scene)
{
  const NodeIndex index(scene);
  EdgePairs social;
  for (std::size_t target = 0; target < index.agent_meta.size(); ++target) {
    const auto & tm = index.agent_meta[target];
    for (std::size_t source = 0; source < index.agent_meta.size(); ++source) {
      const auto & sm = index.agent_meta[source];
      if (sm.track != tm.track && std::abs(sm.t - tm.t) <= 1) {
        social.emplace_back(source, target);
      }
    }
  }
  RelationEdges out;
  const Relation rel(RelationKind::kAgentSocial);
  out.emplace(rel, finalize(rel, std::move(social), index));
  return out;
}

RelationEdges build_map_edges(const Scene & scene, int dilation)
{
  if (dilation < 1) {
    throw ConfigError("map dilation order must be at least 1");
  }
  const NodeIndex index(scene);
  std::map<std::pair<std::string, std::size_t>, std::size_t> node_of;
  for (std::size_t n = 0; n < scene.segments.size(); ++n) {
    node_of[{scene.segments[n].lane_id, scene.segments[n].index_in_lane}] = n;
  }
  auto lookup = [&](const std::string & lane, std::size_t k) -> std::optional<std::size_t> {
    auto it = node_of.find({lane, k});
    if (it == node_of.end()) {
      return std::nullopt;
    }
    return it->second;
  };

  // pre-1 adjacency: k -> k+1 inside a lane, and last -> first across links.
  std::vector<std::vector<std::size_t>> next(scene.segments.size());
  for (std::size_t n = 0; n < scene.segments.size(); ++n) {
    const auto & seg = scene.segments[n];
    if (auto succ = lookup(seg.lane_id, seg.index_in_lane + 1)) {
      next[n].push_back(*succ);
    }
  }
  for (const auto & [a, b] : lane_links(scene)) {
    const auto & la = scene.lanes[a];
    if (la.segment_count == 0) {
      continue;
    }
    auto from = lookup(la.lane_id, la.segment_count - 1);
    auto to = lookup(scene.lanes[b].lane_id, 0);
    if (from && to) {
      next[*from].push_back(*to);
    }
  }

  RelationEdges out;
  std::vector<EdgePairs> pre(static_cast<std::size_t>(dilation)), suc(static_cast<std::size_t>(dilation));
  for (std::size_t start = 0; start < next.size(); ++start) {
    std::set<std::size_t> frontier = {start};
    for (int i = 1; i <= dilation; ++i) {
      std::set<std::size_t> reached;
      for (auto n : frontier) {
        reached.insert(next[n].begin(), next[n].end());
      }
      for (auto n : reached) {
        if (n != start) {
          pre[static_cast<std::size_t>(i - 1)].emplace_back(start, n);
          suc[static_cast<std::size_t>(i - 1)].emplace_back(n, start);
        }
      }
      frontier = std::move(reached);
    }
  }
  for (int i = 1; i <= dilation; ++i) {
    const Relation rp(RelationKind::kMapPre, i), rs(RelationKind::kMapSuc, i);
    out.emplace(rp, finalize(rp, std::move(pre[static_cast<std::size_t>(i - 1)]), index));
    out.emplace(rs, finalize(rs, std::move(suc[static_cast<std::size_t>(i - 1)]), index));
  }

  std::set<std::string> lane_ids;
  for (const auto & lane : scene.lanes) {
    lane_ids.insert(lane.lane_id);
  }
  EdgePairs left, right;
  for (const auto & lane : scene.lanes) {
    auto connect = [&](const std::optional<std::string> & neighbour, EdgePairs & sink, const char * side) {
      if (!neighbour) {
        return;
      }
      if (!lane_ids.contains(*neighbour)) {
        throw ValidationError("scene '" + scene.scene_id + "' lane '" + lane.lane_id + "' " +
          side + "_lane_id refers to unknown lane '" + *neighbour + "'");
      }
      for (std::size_t n = 0; n < scene.segments.size(); ++n) {
        const auto & seg = scene.segments[n];
        if (seg.lane_id != lane.lane_id) {
          continue;
        }
        if (auto other = lookup(*neighbour, seg.index_in_lane)) {
          sink.emplace_back(*other, n);
        }
      }
    };
    connect(lane.left_lane_id, left, "left");
    connect(lane.right_lane_id, right, "right");
  }
  const Relation rl(RelationKind::kMapLeft), rr(RelationKind::kMapRight);
  out.emplace(rl, finalize(rl, std::move(left), index));
  out.emplace(rr, finalize(rr, std::move(right), index));
  return out;
}

RelationEdges build_fusion_edges(const Scene & scene, double t_th, double d_min)
{
  if (!(t_th > 0.0)) {
    throw ConfigError("fusion threshold time t_th must be positive");
  }
  const NodeIndex index(scene);
  EdgePairs drives_on, gives_info;
  for (std::size_t a = 0; a < index.agent_pos.size(); ++a) {
    const double d_th = std::max(index.agent_speed[a] * t_th, d_min);
    for (std::size_t m = 0; m < index.map_pos.size(); ++m) {
      const double d = std::hypot(
        index.map_pos[m].x - index.agent_pos[a].x, index.map_pos[m].y - index.agent_pos[a].y);
      if (d <= d_th) {
        drives_on.emplace_back(a, m);
        gives_info.emplace_back(m, a);
      }
    }
  }
  RelationEdges out;
  const Relation rd(RelationKind::kDrivesOn), rg(RelationKind::kGivesTrafficInfo);
  out.emplace(rd, finalize(rd, std::move(drives_on), index));
  out.emplace(rg, finalize(rg, std::move(gives_info), index));
  return out;
}

HeteroGraph build_graph(const Scene & scene, const GraphConfig & cfg)
{
  const NodeIndex index(scene);
  HeteroGraph graph;
  graph.agent_meta = index.agent_meta;
  for (const auto & track : scene.tracks) {
    for (const auto & ts : track.past) {
      const auto & s = ts.state;
      graph.agent_feats.insert(graph.agent_feats.end(), {s.x, s.y, s.vx, s.vy, s.heading});
    }
  }
  for (const auto & seg : scene.segments) {
    graph.map_feats.insert(graph.map_feats.end(), {seg.x, seg.y, seg.dx, seg.dy});
  }
  for (std::size_t ti = 0; ti < index.track_nodes.size(); ++ti) {
    if (index.track_nodes[ti].empty()) {
      throw ValidationError("scene '" + scene.scene_id + "' track '" +
        scene.tracks[ti].agent_id + "' has no observed state");
    }
    graph.readout_index.push_back(index.track_nodes[ti].back());
  }
  for (auto * builder : {&build_agent_edges, &build_social_edges}) {
    graph.edges.merge(builder(scene));
  }
  graph.edges.merge(build_map_edges(scene, cfg.dilation));
  graph.edges.merge(build_fusion_edges(scene, cfg.t_th, cfg.d_min));
  return graph;
}

std::string dump_graph(const HeteroGraph & graph)
{
  nlohmann::ordered_json j;
  j["agent_nodes"] = graph.num_agent_nodes();
  j["map_nodes"] = graph.num_map_nodes();
  j["readout_index"] = graph.readout_index;
  auto & rels = j["relations"];
  rels = nlohmann::ordered_json::object();
  for (const auto & [rel, list] : graph.edges) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t e = 0; e < list.size(); ++e) {
      arr.push_back({list.source[e], list.target[e]});
    }
    rels[rel.name()] = std::move(arr);
  }
  return j.dump();
}

}  // namespace hetpred
