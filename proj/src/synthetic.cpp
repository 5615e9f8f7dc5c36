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

#include "hetpred/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace hetpred
{

namespace
{

constexpr double kSampleStep = 0.5;

struct Pose
{
  Point2 p;
  double heading = 0.0;
};

// Reference path: straight for `straight` meters, then an arc of curvature kappa.
Pose reference_pose(double s, double straight, double kappa)
{
  if (s <= straight || kappa == 0.0) {
    return {{s, 0.0}, 0.0};
  }
  const double u = s - straight;
  const double theta = kappa * u;
  return {{straight + std::sin(theta) / kappa, (1.0 - std::cos(theta)) / kappa}, theta};
}

// Dense polyline of a lane offset laterally (left positive) from the reference.
std::vector<Point2> lane_polyline(double length, double straight, double kappa, double offset)
{
  std::vector<Point2> points;
  const auto n = static_cast<std::size_t>(std::ceil(length / kSampleStep));
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = std::min(length, static_cast<double>(i) * kSampleStep);
    const Pose pose = reference_pose(s, straight, kappa);
    points.push_back({pose.p.x - offset * std::sin(pose.heading),
      pose.p.y + offset * std::cos(pose.heading)});
  }
  return points;
}

struct PolylineWalker
{
  explicit PolylineWalker(const std::vector<Point2> & pts) : points(pts), cum(pts.size(), 0.0)
  {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      cum[i] = cum[i - 1] + std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    }
  }

  // Position and unit tangent at arc length s (clamped to the polyline).
  std::pair<Point2, Point2> at(double s) const
  {
    std::size_t i = 0;
    while (i + 2 < points.size() && cum[i + 1] < s) {
      ++i;
    }
    const double len = cum[i + 1] - cum[i];
    const double frac = std::clamp((s - cum[i]) / len, 0.0, 1.0);
    const Point2 a = points[i], b = points[i + 1];
    return {{a.x + (b.x - a.x) * frac, a.y + (b.y - a.y) * frac},
      {(b.x - a.x) / len, (b.y - a.y) / len}};
  }

  const std::vector<Point2> & points;
  std::vector<double> cum;
};

Point2 transform(Point2 p, double rot, Point2 shift)
{
  const double c = std::cos(rot), s = std::sin(rot);
  return {c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y};
}

}  // namespace

std::vector<Scene> generate_synthetic(const SyntheticSpec & spec, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const double horizon = static_cast<double>(spec.t_obs + spec.t_f) * spec.dt;
  const double max_start = 20.0;
  const double length = max_start + spec.max_speed * horizon + 10.0;

  std::vector<Scene> scenes;
  for (std::size_t si = 0; si < spec.scenes; ++si) {
    Scene scene;
    scene.scene_id = "synth-" + std::to_string(seed) + "-" + std::to_string(si);
    scene.t_obs = spec.t_obs;
    scene.t_f = spec.t_f;
    scene.dt = spec.dt;
    scene.origin_rule = spec.origin_rule;

    const double straight = uniform(0.25, 0.6) * length;
    const double kappa = spec.max_curvature > 0.0 ? uniform(-spec.max_curvature, spec.max_curvature) : 0.0;
    const double rot = uniform(-std::numbers::pi, std::numbers::pi);
    const Point2 shift{uniform(-30.0, 30.0), uniform(-30.0, 30.0)};
    const double split = uniform(0.3, 0.7) * length;

    // Dense lane geometry in the reference frame; lane 0 is the rightmost.
    std::vector<std::vector<Point2>> dense;
    for (std::size_t li = 0; li < spec.lanes; ++li) {
      dense.push_back(lane_polyline(length, straight, kappa, static_cast<double>(li) * spec.lane_spacing));
    }
    auto lane_name = [&](std::size_t li, int piece) {
      return "L" + std::to_string(li) + (piece == 0 ? "a" : "b");
    };
    const auto split_index = static_cast<std::size_t>(std::round(split / kSampleStep));
    for (int piece = 0; piece < 2; ++piece) {
      for (std::size_t li = 0; li < spec.lanes; ++li) {
        Lane lane;
        lane.lane_id = lane_name(li, piece);
        if (li + 1 < spec.lanes) {
          lane.left_lane_id = lane_name(li + 1, piece);
        }
        if (li > 0) {
          lane.right_lane_id = lane_name(li - 1, piece);
        }
        const auto & pts = dense[li];
        const std::size_t begin = piece == 0 ? 0 : split_index;
        const std::size_t end = piece == 0 ? split_index + 1 : pts.size();
        for (std::size_t i = begin; i < end; ++i) {
          lane.centerline.push_back(transform(pts[i], rot, shift));
        }
        scene.lanes.push_back(std::move(lane));
      }
    }

    for (std::size_t ai = 0; ai < spec.agents; ++ai) {
      const std::size_t li = spec.lanes == 0 ? 0 : static_cast<std::size_t>(unit(rng) * static_cast<double>(spec.lanes)) % spec.lanes;
      const double s0 = uniform(0.0, max_start);
      const double speed = uniform(spec.min_speed, spec.max_speed);
      const auto ref = spec.lanes == 0 ? lane_polyline(length, straight, kappa, 0.0) : dense[li];
      const PolylineWalker walker(ref);

      AgentTrack track;
      track.agent_id = "a" + std::to_string(ai);
      track.is_ego = ai == 0;
      for (int t = 0; t < spec.t_obs; ++t) {
        const auto [p, tangent] = walker.at(s0 + speed * spec.dt * t);
        const Point2 world = transform(p, rot, shift);
        const Point2 dir = transform(tangent, rot, {0.0, 0.0});
        AgentState st;
        st.x = world.x;
        st.y = world.y;
        st.vx = speed * dir.x;
        st.vy = speed * dir.y;
        st.heading = std::atan2(dir.y, dir.x);
        if (spec.noise > 0.0) {
          st.x += spec.noise * gauss(rng);
          st.y += spec.noise * gauss(rng);
          st.vx += spec.noise * gauss(rng);
          st.vy += spec.noise * gauss(rng);
          st.heading += 0.1 * spec.noise * gauss(rng);
        }
        st.heading = wrap_angle(st.heading);
        track.past.push_back({t, st});
      }
      std::vector<Point2> future;
      const double s_last = s0 + speed * spec.dt * (spec.t_obs - 1);
      for (int k = 1; k <= spec.t_f; ++k) {
        const auto [p, tangent] = walker.at(s_last + speed * spec.dt * k);
        future.push_back(transform(p, rot, shift));
      }
      track.future = std::move(future);
      scene.tracks.push_back(std::move(track));
    }
    segment_lanes(scene, spec.segment_length);
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

}  // namespace hetpred
