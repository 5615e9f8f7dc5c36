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

// Reference implementations for tests. Each one is written directly from the
// definitions, without calling the library routine it checks.

#include "hetpred/graph.hpp"
#include "hetpred/metrics.hpp"
#include "hetpred/scene.hpp"
#include "hetpred/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hetpred::testing
{

// ---------------------------------------------------------------------------
// Finite differences

using ScalarFn = std::function<Tensor(const std::vector<Tensor> &)>;

/// Largest norm-wise relative error ||g_a - g_n|| / max(||g_a||, ||g_n||)
/// over the inputs, g_n from central differences with step h.
inline double gradcheck(const ScalarFn & fn, std::vector<Tensor> inputs, double h = 1e-6)
{
  for (auto & in : inputs) {
    in.set_requires_grad(true);
    in.zero_grad();
  }
  {
    Tape tape;
    Tensor out = fn(inputs);
    tape.backward(out);
  }
  double worst = 0.0;
  for (auto & in : inputs) {
    const std::vector<double> analytic = in.grad();
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    auto values = in.mutable_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double keep = values[i];
      values[i] = keep + h;
      const double up = fn(inputs).item();
      values[i] = keep - h;
      const double down = fn(inputs).item();
      values[i] = keep;
      const double numeric = (up - down) / (2.0 * h);
      diff2 += (analytic[i] - numeric) * (analytic[i] - numeric);
      a2 += analytic[i] * analytic[i];
      n2 += numeric * numeric;
    }
    const double denom = std::max(std::sqrt(a2), std::sqrt(n2));
    if (denom > 0.0) {
      worst = std::max(worst, std::sqrt(diff2) / denom);
    }
  }
  return worst;
}

/// Uniform values in [lo, hi], optionally pushed at least `gap` away from 0.
inline Tensor random_tensor(Shape shape, std::mt19937_64 & rng, double lo = -1.0, double hi = 1.0,
  double gap = 0.0)
{
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(shape.numel());
  for (auto & x : v) {
    do {
      x = u(rng);
    } while (std::abs(x) < gap);
  }
  return Tensor(std::move(shape), std::move(v));
}

/// Random projection to a scalar so every output element gets a distinct weight.
inline Tensor project(const Tensor & out, std::uint64_t seed = 99)
{
  std::mt19937_64 rng(seed);
  Tensor w = random_tensor(out.shape(), rng);
  return sum(mul(out, w));
}

// ---------------------------------------------------------------------------
// Metrics by exhaustive enumeration of per-agent mode tuples

struct MetricInstance
{
  std::size_t agents = 0;
  std::size_t modes = 0;
  std::size_t horizon = 0;
  std::vector<double> pred;  // [A, K, T, 2]
  std::vector<double> gt;  // [A, T, 2]
};

inline MetricReport brute_force_metrics(const MetricInstance & in, double threshold = 2.0)
{
  const std::size_t A = in.agents, K = in.modes, T = in.horizon;
  auto dist = [&](std::size_t a, std::size_t k, std::size_t t) {
    const double px = in.pred[((a * K + k) * T + t) * 2];
    const double py = in.pred[((a * K + k) * T + t) * 2 + 1];
    const double gx = in.gt[(a * T + t) * 2];
    const double gy = in.gt[(a * T + t) * 2 + 1];
    return std::sqrt((px - gx) * (px - gx) + (py - gy) * (py - gy));
  };
  auto ade = [&](std::size_t a, std::size_t k) {
    double s = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      s += dist(a, k, t);
    }
    return s / static_cast<double>(T);
  };
  auto fde = [&](std::size_t a, std::size_t k) { return dist(a, k, T - 1); };

  MetricReport r;
  const double inf = std::numeric_limits<double>::infinity();
  double best_ade = inf, best_fde = inf, best_jade = inf, best_jfde = inf;
  std::vector<double> agent_min_fde(A, inf);
  std::vector<std::size_t> tuple(A, 0);
  std::size_t total = 1;
  for (std::size_t a = 0; a < A; ++a) {
    total *= K;
  }
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    bool all_same = true;
    for (std::size_t a = 0; a < A; ++a) {
      tuple[a] = c % K;
      c /= K;
      all_same = all_same && tuple[a] == tuple[0];
    }
    double sa = 0.0, sf = 0.0;
    for (std::size_t a = 0; a < A; ++a) {
      sa += ade(a, tuple[a]);
      sf += fde(a, tuple[a]);
      agent_min_fde[a] = std::min(agent_min_fde[a], fde(a, tuple[a]));
    }
    sa /= static_cast<double>(A);
    sf /= static_cast<double>(A);
    // independent choices: the minimum over tuples is the marginal metric
    best_ade = std::min(best_ade, sa);
    best_fde = std::min(best_fde, sf);
    if (all_same) {
      best_jade = std::min(best_jade, sa);
      best_jfde = std::min(best_jfde, sf);
    }
  }
  double misses = 0.0;
  for (double f : agent_min_fde) {
    misses += f > threshold ? 1.0 : 0.0;
  }
  r.min_ade = best_ade;
  r.min_fde = best_fde;
  r.min_mr = misses / static_cast<double>(A);
  r.min_jade = best_jade;
  r.min_jfde = best_jfde;
  r.min_jmr = best_jfde > threshold ? 1.0 : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Graph edges by direct enumeration

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;  // (source, target)

struct OracleGraph
{
  std::vector<Point2> agent_pos;
  std::vector<Point2> map_pos;
  std::map<std::string, EdgeSet> edges;  // keyed by relation name
};

inline OracleGraph brute_force_graph(const Scene & scene, const GraphConfig & cfg)
{
  OracleGraph g;
  struct AgentNode
  {
    std::size_t track;
    int t;
    double speed;
  };
  std::vector<AgentNode> nodes;
  std::vector<std::vector<std::size_t>> per_track(scene.tracks.size());
  for (std::size_t ti = 0; ti < scene.tracks.size(); ++ti) {
    for (const auto & ts : scene.tracks[ti].past) {
      per_track[ti].push_back(nodes.size());
      nodes.push_back({ti, ts.t, std::sqrt(ts.state.vx * ts.state.vx + ts.state.vy * ts.state.vy)});
      g.agent_pos.push_back({ts.state.x, ts.state.y});
    }
  }
  for (const auto & seg : scene.segments) {
    g.map_pos.push_back({seg.x, seg.y});
  }

  auto & pre = g.edges["agent.pre.agent"];
  auto & suc = g.edges["agent.suc.agent"];
  auto & merge = g.edges["agent.merge.agent"];
  auto & social = g.edges["agent.social.agent"];
  for (const auto & list : per_track) {
    for (std::size_t k = 1; k < list.size(); ++k) {
      pre.insert({list[k - 1], list[k]});
      suc.insert({list[k], list[k - 1]});
    }
    for (std::size_t k = 0; k + 1 < list.size(); ++k) {
      merge.insert({list[k], list.back()});
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (nodes[i].track != nodes[j].track && std::abs(nodes[i].t - nodes[j].t) <= 1) {
        social.insert({j, i});
      }
    }
  }

  // one-step successor matrix over segments
  const std::size_t M = scene.segments.size();
  std::vector<std::vector<char>> adj(M, std::vector<char>(M, 0));
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      const auto & a = scene.segments[i];
      const auto & b = scene.segments[j];
      if (a.lane_id == b.lane_id && b.index_in_lane == a.index_in_lane + 1) {
        adj[i][j] = 1;
      }
    }
  }
  for (const auto & la : scene.lanes) {
    for (const auto & lb : scene.lanes) {
      if (la.centerline.empty() || lb.centerline.empty() || la.lane_id == lb.lane_id) {
        continue;
      }
      const Point2 end = la.centerline.back();
      const Point2 start = lb.centerline.front();
      if (std::hypot(end.x - start.x, end.y - start.y) > 1e-6) {
        continue;
      }
      for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
          if (scene.segments[i].lane_id == la.lane_id &&
            scene.segments[i].index_in_lane + 1 == la.segment_count &&
            scene.segments[j].lane_id == lb.lane_id && scene.segments[j].index_in_lane == 0)
          {
            adj[i][j] = 1;
          }
        }
      }
    }
  }
  std::vector<std::vector<char>> power = adj;
  for (int d = 1; d <= cfg.dilation; ++d) {
    auto & p = g.edges["map.pre-" + std::to_string(d) + ".map"];
    auto & s = g.edges["map.suc-" + std::to_string(d) + ".map"];
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t j = 0; j < M; ++j) {
        if (power[i][j] && i != j) {
          p.insert({i, j});
          s.insert({j, i});
        }
      }
    }
    std::vector<std::vector<char>> next(M, std::vector<char>(M, 0));
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t k = 0; k < M; ++k) {
        if (!power[i][k]) {
          continue;
        }
        for (std::size_t j = 0; j < M; ++j) {
          next[i][j] = next[i][j] || adj[k][j];
        }
      }
    }
    power = std::move(next);
  }

  auto & left = g.edges["map.left.map"];
  auto & right = g.edges["map.right.map"];
  for (std::size_t i = 0; i < M; ++i) {
    const auto & target = scene.segments[i];
    for (std::size_t j = 0; j < M; ++j) {
      const auto & source = scene.segments[j];
      if (source.index_in_lane != target.index_in_lane) {
        continue;
      }
      if (target.left_lane_id && source.lane_id == *target.left_lane_id) {
        left.insert({j, i});
      }
      if (target.right_lane_id && source.lane_id == *target.right_lane_id) {
        right.insert({j, i});
      }
    }
  }

  auto & drives = g.edges["agent.drives-on.map"];
  auto & gives = g.edges["map.gives-traffic-info.agent"];
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const double radius = std::max(nodes[a].speed * cfg.t_th, cfg.d_min);
    for (std::size_t m = 0; m < M; ++m) {
      const double dx = g.map_pos[m].x - g.agent_pos[a].x;
      const double dy = g.map_pos[m].y - g.agent_pos[a].y;
      if (std::sqrt(dx * dx + dy * dy) <= radius) {
        drives.insert({a, m});
        gives.insert({m, a});
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Small hand-made scenes

/// Straight lane along +x from x0 to x1 (sampled every metre).
inline Lane straight_lane(const std::string & id, double x0, double x1, double y)
{
  Lane lane;
  lane.lane_id = id;
  for (double x = x0; x <= x1 + 1e-9; x += 1.0) {
    lane.centerline.push_back({x, y});
  }
  return lane;
}

/// Track moving along +x at `speed` with the last observed state at (x_last, y).
inline AgentTrack straight_track(const std::string & id, int t_obs, int t_f, double dt, double x_last,
  double y, double speed)
{
  AgentTrack tr;
  tr.agent_id = id;
  for (int t = 0; t < t_obs; ++t) {
    const double x = x_last - speed * dt * (t_obs - 1 - t);
    tr.past.push_back({t, {x, y, speed, 0.0, 0.0}});
  }
  std::vector<Point2> fut;
  for (int t = 1; t <= t_f; ++t) {
    fut.push_back({x_last + speed * dt * t, y});
  }
  tr.future = fut;
  return tr;
}

}  // namespace hetpred::testing
