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

#include "hetpred/scene_io.hpp"

#include "hetpred/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

namespace hetpred
{

namespace
{

using nlohmann::json;

const std::set<std::string> kSceneKeys = {
  "scene_id", "t_obs", "t_f", "dt", "origin_rule", "tracks", "lanes"};
const std::set<std::string> kTrackKeys = {"agent_id", "is_ego", "past", "future"};
const std::set<std::string> kLaneKeys = {"lane_id", "left_lane_id", "right_lane_id", "centerline"};

void check_keys(const json & obj, const std::set<std::string> & allowed, const std::string & what)
{
  if (!obj.is_object()) {
    throw std::invalid_argument(what + " must be an object");
  }
  for (const auto & item : obj.items()) {
    if (!allowed.contains(item.key())) {
      throw std::invalid_argument("unknown field '" + item.key() + "' in " + what);
    }
  }
}

const json & required(const json & obj, const char * key, const std::string & what)
{
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw std::invalid_argument("missing field '" + std::string(key) + "' in " + what);
  }
  return *it;
}

Point2 parse_point(const json & j)
{
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("point must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Scene parse_record(const json & j)
{
  check_keys(j, kSceneKeys, "scene");
  Scene scene;
  scene.scene_id = required(j, "scene_id", "scene").get<std::string>();
  const std::string where = "scene '" + scene.scene_id + "'";
  scene.t_obs = required(j, "t_obs", where).get<int>();
  scene.t_f = required(j, "t_f", where).get<int>();
  scene.dt = required(j, "dt", where).get<double>();
  scene.origin_rule = origin_rule_from_string(required(j, "origin_rule", where).get<std::string>());

  for (const auto & jt : required(j, "tracks", where)) {
    check_keys(jt, kTrackKeys, "track of " + where);
    AgentTrack track;
    track.agent_id = required(jt, "agent_id", "track").get<std::string>();
    track.is_ego = jt.value("is_ego", false);
    for (const auto & row : required(jt, "past", "track '" + track.agent_id + "'")) {
      if (!row.is_array() || row.size() != 6) {
        throw std::invalid_argument("past entry of '" + track.agent_id +
          "' must be [t, x, y, vx, vy, heading]");
      }
      TimedState ts;
      ts.t = row[0].get<int>();
      ts.state = {row[1].get<double>(), row[2].get<double>(), row[3].get<double>(),
        row[4].get<double>(), wrap_angle(row[5].get<double>())};
      track.past.push_back(ts);
    }
    if (auto it = jt.find("future"); it != jt.end() && !it->is_null()) {
      std::vector<Point2> future;
      for (const auto & p : *it) {
        future.push_back(parse_point(p));
      }
      track.future = std::move(future);
    }
    scene.tracks.push_back(std::move(track));
  }
  for (const auto & jl : required(j, "lanes", where)) {
    check_keys(jl, kLaneKeys, "lane of " + where);
    Lane lane;
    lane.lane_id = required(jl, "lane_id", "lane").get<std::string>();
    if (auto it = jl.find("left_lane_id"); it != jl.end() && !it->is_null()) {
      lane.left_lane_id = it->get<std::string>();
    }
    if (auto it = jl.find("right_lane_id"); it != jl.end() && !it->is_null()) {
      lane.right_lane_id = it->get<std::string>();
    }
    for (const auto & p : required(jl, "centerline", "lane '" + lane.lane_id + "'")) {
      lane.centerline.push_back(parse_point(p));
    }
    scene.lanes.push_back(std::move(lane));
  }
  return scene;
}

}  // namespace

std::vector<Scene> read_scenes(std::istream & in, double segment_length)
{
  std::vector<Scene> scenes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    Scene scene;
    try {
      scene = parse_record(json::parse(line));
    } catch (const json::exception & e) {
      throw ParseError(e.what(), line_no);
    } catch (const std::invalid_argument & e) {
      throw ParseError(e.what(), line_no);
    } catch (const ValidationError & e) {
      throw ParseError(e.what(), line_no);
    }
    validate_scene(scene);
    segment_lanes(scene, segment_length);
    validate_scene(scene);
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<Scene> load_scenes(const std::filesystem::path & path, double segment_length)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open scenario file " + path.string());
  }
  return read_scenes(in, segment_length);
}

std::string scene_to_line(const Scene & scene)
{
  json j;
  j["scene_id"] = scene.scene_id;
  j["t_obs"] = scene.t_obs;
  j["t_f"] = scene.t_f;
  j["dt"] = scene.dt;
  j["origin_rule"] = to_string(scene.origin_rule);
  j["tracks"] = json::array();
  for (const auto & track : scene.tracks) {
    json jt;
    jt["agent_id"] = track.agent_id;
    jt["is_ego"] = track.is_ego;
    jt["past"] = json::array();
    for (const auto & ts : track.past) {
      const auto & s = ts.state;
      jt["past"].push_back({ts.t, s.x, s.y, s.vx, s.vy, s.heading});
    }
    if (track.future) {
      jt["future"] = json::array();
      for (const auto & p : *track.future) {
        jt["future"].push_back({p.x, p.y});
      }
    }
    j["tracks"].push_back(std::move(jt));
  }
  j["lanes"] = json::array();
  for (const auto & lane : scene.lanes) {
    json jl;
    jl["lane_id"] = lane.lane_id;
    if (lane.left_lane_id) {
      jl["left_lane_id"] = *lane.left_lane_id;
    }
    if (lane.right_lane_id) {
      jl["right_lane_id"] = *lane.right_lane_id;
    }
    jl["centerline"] = json::array();
    for (const auto & p : lane.centerline) {
      jl["centerline"].push_back({p.x, p.y});
    }
    j["lanes"].push_back(std::move(jl));
  }
  return j.dump();
}

void write_scenes(std::ostream & out, const std::vector<Scene> & scenes)
{
  for (const auto & scene : scenes) {
    out << scene_to_line(scene) << '\n';
  }
}

void save_scenes(const std::filesystem::path & path, const std::vector<Scene> & scenes)
{
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write scenario file " + path.string());
  }
  write_scenes(out, scenes);
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

const Scene & find_scene(const std::vector<Scene> & scenes, const std::string & scene_id)
{
  for (const auto & scene : scenes) {
    if (scene.scene_id == scene_id) {
      return scene;
    }
  }
  throw LookupError("unknown scene_id '" + scene_id + "'");
}

}  // namespace hetpred
