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

#include "hetpred/scene.hpp"

#include "hetpred/errors.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace hetpred
{

namespace
{

constexpr double kLinkTolerance = 1e-6;
// Origins closer than this to (0, 0) are treated as already normalized.
constexpr double kOriginSnap = 1e-9;

[[noreturn]] void invalid(const Scene & scene, const std::string & field, const std::string & what)
{
  throw ValidationError("scene '" + scene.scene_id + "' field " + field + ": " + what);
}

bool finite(double v) { return std::isfinite(v); }

bool inside_crop(double x, double y)
{
  return std::abs(x) <= kCropHalfExtent && std::abs(y) <= kCropHalfExtent;
}

}  // namespace

std::string to_string(OriginRule rule)
{
  return rule == OriginRule::kEgoLastStep ? "ego-last-step" : "geometric-center";
}

OriginRule origin_rule_from_string(const std::string & text)
{
  if (text == "ego-last-step") {
    return OriginRule::kEgoLastStep;
  }
  if (text == "geometric-center") {
    return OriginRule::kGeometricCenter;
  }
  throw ValidationError("unknown origin_rule '" + text + "'");
}

double wrap_angle(double radians)
{
  double a = std::remainder(radians, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) {
    a += 2.0 * std::numbers::pi;
  }
  return a;
}

std::vector<MapSegment> segment_centerline(
  const std::vector<Point2> & polyline, double target_len, const std::string & lane_id)
{
  if (polyline.size() < 2) {
    throw ValidationError("lane '" + lane_id + "' centerline needs at least 2 points");
  }
  if (!(target_len > 0.0)) {
    throw ValidationError("segment length must be positive");
  }
  std::vector<double> cum(polyline.size(), 0.0);
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    cum[i] = cum[i - 1] +
      std::hypot(polyline[i].x - polyline[i - 1].x, polyline[i].y - polyline[i - 1].y);
  }
  const double total = cum.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ValidationError("lane '" + lane_id + "' centerline has zero length");
  }

  const auto chords = static_cast<std::size_t>(
    std::max(1.0, std::ceil(total / target_len - 1e-9)));
  std::vector<Point2> samples;
  samples.reserve(chords + 1);
  samples.push_back(polyline.front());
  std::size_t piece = 0;
  for (std::size_t k = 1; k < chords; ++k) {
    const double s = static_cast<double>(k) * target_len;
    while (piece + 2 < polyline.size() && cum[piece + 1] < s) {
      ++piece;
    }
    const double len = cum[piece + 1] - cum[piece];
    const double frac = len > 0.0 ? (s - cum[piece]) / len : 0.0;
    samples.push_back({polyline[piece].x + (polyline[piece + 1].x - polyline[piece].x) * frac,
      polyline[piece].y + (polyline[piece + 1].y - polyline[piece].y) * frac});
  }
  samples.push_back(polyline.back());

  std::vector<MapSegment> segments;
  segments.reserve(chords);
  for (std::size_t k = 0; k < chords; ++k) {
    MapSegment seg;
    seg.dx = samples[k + 1].x - samples[k].x;
    seg.dy = samples[k + 1].y - samples[k].y;
    seg.x = 0.5 * (samples[k].x + samples[k + 1].x);
    seg.y = 0.5 * (samples[k].y + samples[k + 1].y);
    seg.lane_id = lane_id;
    seg.index_in_lane = k;
    segments.push_back(std::move(seg));
  }
  return segments;
}

void segment_lanes(Scene & scene, double target_len)
{
  scene.segments.clear();
  for (auto & lane : scene.lanes) {
    auto segs = segment_centerline(lane.centerline, target_len, lane.lane_id);
    lane.segment_count = segs.size();
    for (auto & s : segs) {
      s.left_lane_id = lane.left_lane_id;
      s.right_lane_id = lane.right_lane_id;
      scene.segments.push_back(std::move(s));
    }
  }
}

void validate_scene(const Scene & scene)
{
  if (scene.scene_id.empty()) {
    invalid(scene, "scene_id", "must not be empty");
  }
  if (scene.t_obs < 1) {
    invalid(scene, "t_obs", "must be at least 1");
  }
  if (scene.t_f < 1) {
    invalid(scene, "t_f", "must be at least 1");
  }
  if (!(scene.dt > 0.0) || !finite(scene.dt)) {
    invalid(scene, "dt", "must be positive and finite");
  }
  std::set<std::string> agent_ids;
  std::size_t egos = 0;
  for (const auto & track : scene.tracks) {
    const std::string where = "tracks[" + track.agent_id + "]";
    if (!agent_ids.insert(track.agent_id).second) {
      invalid(scene, where + ".agent_id", "duplicate agent id");
    }
    egos += track.is_ego ? 1 : 0;
    if (track.past.empty()) {
      invalid(scene, where + ".past", "at least one past state is required");
    }
    for (std::size_t i = 0; i < track.past.size(); ++i) {
      const auto & ts = track.past[i];
      if (ts.t < 0 || ts.t >= scene.t_obs) {
        invalid(scene, where + ".past", "timestep " + std::to_string(ts.t) + " outside [0, t_obs)");
      }
      if (i > 0 && ts.t <= track.past[i - 1].t) {
        invalid(scene, where + ".past", "timesteps must be strictly increasing");
      }
      const auto & s = ts.state;
      if (!finite(s.x) || !finite(s.y) || !finite(s.vx) || !finite(s.vy) || !finite(s.heading)) {
        invalid(scene, where + ".past", "non-finite state at t=" + std::to_string(ts.t));
      }
    }
    if (track.future) {
      if (track.future->size() != static_cast<std::size_t>(scene.t_f)) {
        invalid(scene, where + ".future", "length " + std::to_string(track.future->size()) +
          " != t_f " + std::to_string(scene.t_f));
      }
      for (const auto & p : *track.future) {
        if (!finite(p.x) || !finite(p.y)) {
          invalid(scene, where + ".future", "non-finite position");
        }
      }
    }
  }
  if (egos > 1) {
    invalid(scene, "tracks.is_ego", "more than one ego track");
  }
  std::set<std::string> lane_ids;
  for (const auto & lane : scene.lanes) {
    if (!lane_ids.insert(lane.lane_id).second) {
      invalid(scene, "lanes[" + lane.lane_id + "].lane_id", "duplicate lane id");
    }
    if (lane.centerline.size() < 2) {
      invalid(scene, "lanes[" + lane.lane_id + "].centerline", "needs at least 2 points");
    }
    for (const auto & p : lane.centerline) {
      if (!finite(p.x) || !finite(p.y)) {
        invalid(scene, "lanes[" + lane.lane_id + "].centerline", "non-finite point");
      }
    }
  }
  for (const auto & lane : scene.lanes) {
    for (const auto * side : {&lane.left_lane_id, &lane.right_lane_id}) {
      if (*side && !lane_ids.contains(**side)) {
        invalid(scene,
          "lanes[" + lane.lane_id + "]." + (side == &lane.left_lane_id ? "left" : "right") +
            "_lane_id",
          "unknown lane '" + **side + "'");
      }
    }
  }
  for (const auto & seg : scene.segments) {
    if (seg.dx == 0.0 && seg.dy == 0.0) {
      invalid(scene, "segments[" + seg.lane_id + "." + std::to_string(seg.index_in_lane) + "]",
        "zero direction vector");
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> lane_links(const Scene & scene)
{
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t a = 0; a < scene.lanes.size(); ++a) {
    if (scene.lanes[a].centerline.empty()) {
      continue;
    }
    const auto & end = scene.lanes[a].centerline.back();
    for (std::size_t b = 0; b < scene.lanes.size(); ++b) {
      if (a == b || scene.lanes[b].centerline.empty()) {
        continue;
      }
      const auto & start = scene.lanes[b].centerline.front();
      if (std::hypot(end.x - start.x, end.y - start.y) <= kLinkTolerance) {
        links.emplace_back(a, b);
      }
    }
  }
  return links;
}

Point2 scene_origin(const Scene & scene, OriginRule rule)
{
  if (rule == OriginRule::kEgoLastStep) {
    const AgentTrack * ego = nullptr;
    for (const auto & track : scene.tracks) {
      if (track.is_ego) {
        if (ego != nullptr) {
          throw ConfigError("scene '" + scene.scene_id + "': more than one ego track");
        }
        ego = &track;
      }
    }
    if (ego == nullptr) {
      throw ConfigError("scene '" + scene.scene_id + "': ego-last-step needs an ego track");
    }
    for (const auto & ts : ego->past) {
      if (ts.t == scene.t_obs - 1) {
        return {ts.state.x, ts.state.y};
      }
    }
    throw ConfigError("scene '" + scene.scene_id + "': ego has no state at t_obs-1");
  }
  double sx = 0.0, sy = 0.0;
  std::size_t count = 0;
  for (const auto & track : scene.tracks) {
    for (const auto & ts : track.past) {
      sx += ts.state.x;
      sy += ts.state.y;
      ++count;
    }
  }
  if (count == 0) {
    return {0.0, 0.0};
  }
  return {sx / static_cast<double>(count), sy / static_cast<double>(count)};
}

Scene normalize_scene(const Scene & scene, OriginRule rule)
{
  Point2 origin = scene_origin(scene, rule);
  if (std::hypot(origin.x, origin.y) < kOriginSnap) {
    origin = {0.0, 0.0};
  }
  Scene out;
  out.scene_id = scene.scene_id;
  out.t_obs = scene.t_obs;
  out.t_f = scene.t_f;
  out.dt = scene.dt;
  out.origin_rule = scene.origin_rule;

  for (const auto & track : scene.tracks) {
    AgentTrack moved = track;
    for (auto & ts : moved.past) {
      ts.state.x -= origin.x;
      ts.state.y -= origin.y;
    }
    if (moved.future) {
      for (auto & p : *moved.future) {
        p.x -= origin.x;
        p.y -= origin.y;
      }
    }
    if (inside_crop(moved.last().state.x, moved.last().state.y)) {
      out.tracks.push_back(std::move(moved));
    }
  }
  out.lanes = scene.lanes;
  for (auto & lane : out.lanes) {
    for (auto & p : lane.centerline) {
      p.x -= origin.x;
      p.y -= origin.y;
    }
  }
  for (const auto & seg : scene.segments) {
    MapSegment moved = seg;
    moved.x -= origin.x;
    moved.y -= origin.y;
    if (inside_crop(moved.x, moved.y)) {
      out.segments.push_back(std::move(moved));
    }
  }
  return out;
}

Scene normalize_scene(const Scene & scene)
{
  return normalize_scene(scene, scene.origin_rule);
}

}  // namespace hetpred
