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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hetpred
{

/// Half side of the square region of interest around the scene origin, meters.
inline constexpr double kCropHalfExtent = 80.0;
/// Default chord length when cutting lane centerlines into map segments, meters.
inline constexpr double kDefaultSegmentLength = 3.0;

struct Point2
{
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2 &) const = default;
};

/// Kinematic measurement of one agent at one timestep, local frame.
struct AgentState
{
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double heading = 0.0;  // radians, (-pi, pi]
  bool operator==(const AgentState &) const = default;
};

struct TimedState
{
  int t = 0;
  AgentState state;
  bool operator==(const TimedState &) const = default;
};

struct AgentTrack
{
  std::string agent_id;
  std::vector<TimedState> past;  // strictly increasing t in [0, t_obs)
  std::optional<std::vector<Point2>> future;  // exactly t_f points when present
  bool is_ego = false;

  const TimedState & last() const { return past.back(); }
  bool operator==(const AgentTrack &) const = default;
};

/// Raw lane as stored in scenario files.
struct Lane
{
  std::string lane_id;
  std::optional<std::string> left_lane_id;
  std::optional<std::string> right_lane_id;
  std::vector<Point2> centerline;
  /// Number of segments the full centerline was cut into (before cropping).
  std::size_t segment_count = 0;
  bool operator==(const Lane &) const = default;
};

/// One chord of a lane centerline; becomes one map-node.
struct MapSegment
{
  double x = 0.0;  // chord midpoint
  double y = 0.0;
  double dx = 0.0;  // chord end minus chord start
  double dy = 0.0;
  std::string lane_id;
  std::size_t index_in_lane = 0;
  std::optional<std::string> left_lane_id;
  std::optional<std::string> right_lane_id;
  bool operator==(const MapSegment &) const = default;
};

enum class OriginRule { kEgoLastStep, kGeometricCenter };

std::string to_string(OriginRule rule);
OriginRule origin_rule_from_string(const std::string & text);

struct Scene
{
  std::string scene_id;
  int t_obs = 0;
  int t_f = 0;
  double dt = 0.1;
  OriginRule origin_rule = OriginRule::kGeometricCenter;
  std::vector<AgentTrack> tracks;
  std::vector<Lane> lanes;
  std::vector<MapSegment> segments;  // lanes in order, then index_in_lane
  bool operator==(const Scene &) const = default;
};

/// Resamples a polyline by arc length into consecutive chords of target_len
/// (the last chord may be shorter). Throws ValidationError for fewer than two
/// points, a non-positive target length or a zero-length polyline.
std::vector<MapSegment> segment_centerline(
  const std::vector<Point2> & polyline, double target_len, const std::string & lane_id = {});

/// Rebuilds scene.segments from scene.lanes and records each lane's segment count.
void segment_lanes(Scene & scene, double target_len);

/// Throws ValidationError naming the scene id and offending field.
void validate_scene(const Scene & scene);

/// Pairs (a, b) of lane indices where lane a's last centerline point coincides
/// with lane b's first point, i.e. traffic flows from a into b.
std::vector<std::pair<std::size_t, std::size_t>> lane_links(const Scene & scene);

/// Origin the rule would move to (0, 0). Throws ConfigError when ego-last-step
/// has no unique ego with a state at t_obs - 1.
Point2 scene_origin(const Scene & scene, OriginRule rule);

/// Translates the scene so the rule's origin is (0, 0) and crops to the
/// 160 m x 160 m square: tracks by their last observed state, map segments by
/// midpoint. Velocities, headings and directions are unchanged.
Scene normalize_scene(const Scene & scene, OriginRule rule);
Scene normalize_scene(const Scene & scene);

double wrap_angle(double radians);

}  // namespace hetpred
