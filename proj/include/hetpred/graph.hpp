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

#include "hetpred/scene.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace hetpred
{

enum class NodeType { kAgent, kMap };

enum class RelationKind {
  kAgentPre,
  kAgentSuc,
  kAgentSocial,
  kAgentMerge,
  kMapPre,
  kMapSuc,
  kMapLeft,
  kMapRight,
  kDrivesOn,
  kGivesTrafficInfo,
};

/// A directed edge type between two node types. Map pre/suc relations carry a
/// dilation i >= 1 (i-th predecessor / successor); every other relation has 0.
class Relation
{
public:
  constexpr Relation(RelationKind kind, int dilation = 0) : kind_(kind), dilation_(dilation) {}

  RelationKind kind() const { return kind_; }
  int dilation() const { return dilation_; }
  NodeType source_type() const;
  NodeType target_type() const;
  /// e.g. "agent.pre.agent", "map.pre-2.map", "map.gives-traffic-info.agent".
  std::string name() const;

  auto operator<=>(const Relation &) const = default;

private:
  RelationKind kind_;
  int dilation_;
};

/// Every relation of a graph built with dilation order D, in a fixed order.
std::vector<Relation> all_relations(int dilation_order);
std::vector<Relation> map_relations(int dilation_order);

/// Edges of one relation. features holds [E, 2] target-minus-source offsets.
struct EdgeList
{
  std::vector<std::size_t> source;
  std::vector<std::size_t> target;
  std::vector<double> features;

  std::size_t size() const { return source.size(); }
};

struct AgentNodeMeta
{
  std::size_t track = 0;
  int t = 0;
};

struct GraphConfig
{
  int dilation = 4;
  double t_th = 2.0;  // seconds
  double d_min = 5.0;  // meters
  double segment_length = kDefaultSegmentLength;

  bool operator==(const GraphConfig &) const = default;
};

inline constexpr std::size_t kAgentFeatureDim = 5;  // x, y, vx, vy, heading
inline constexpr std::size_t kMapFeatureDim = 4;  // x, y, dx, dy

struct HeteroGraph
{
  std::vector<double> agent_feats;  // [N_A, 5]
  std::vector<AgentNodeMeta> agent_meta;
  std::vector<double> map_feats;  // [N_M, 4]
  std::map<Relation, EdgeList> edges;
  std::vector<std::size_t> readout_index;  // per track: node at its last observed step

  std::size_t num_agent_nodes() const { return agent_meta.size(); }
  std::size_t num_map_nodes() const { return map_feats.size() / kMapFeatureDim; }
  std::size_t num_tracks() const { return readout_index.size(); }
  Point2 agent_position(std::size_t node) const;
  Point2 map_position(std::size_t node) const;
  Point2 node_position(NodeType type, std::size_t node) const;
  /// Relation edges, or an empty list when the relation is absent.
  const EdgeList & relation(const Relation & r) const;
};

/// Node numbering of a scene: tracks in input order then timestep; segments in
/// scene order (lanes in input order, then index_in_lane).
struct NodeIndex
{
  explicit NodeIndex(const Scene & scene);

  std::vector<std::vector<std::size_t>> track_nodes;  // per track, per past entry
  std::vector<AgentNodeMeta> agent_meta;
  std::vector<Point2> agent_pos;
  std::vector<double> agent_speed;
  std::vector<Point2> map_pos;
};

using RelationEdges = std::map<Relation, EdgeList>;

/// agent.pre.agent, agent.suc.agent and agent.merge.agent.
RelationEdges build_agent_edges(const Scene & scene);
/// agent.social.agent: into each agent-node from other tracks' nodes at t-1, t, t+1.
RelationEdges build_social_edges(const Scene & scene);
/// map.pre-i / map.suc-i for i in 1..dilation, map.left.map and map.right.map.
RelationEdges build_map_edges(const Scene & scene, int dilation);
/// agent.drives-on.map and map.gives-traffic-info.agent within
/// d_th = max(speed * t_th, d_min) of each agent-node.
RelationEdges build_fusion_edges(const Scene & scene, double t_th, double d_min);

/// Composite of the builders above on a normalized scene. Edges inside each
/// relation are ordered by target, then by source position, then by source
/// index, so per-target aggregation order does not depend on track order.
HeteroGraph build_graph(const Scene & scene, const GraphConfig & cfg);

/// JSON text object with node counts and per-relation edge lists.
std::string dump_graph(const HeteroGraph & graph);

}  // namespace hetpred
