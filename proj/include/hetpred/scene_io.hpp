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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hetpred
{

// Scenario files hold one JSON object per line:
//   {"scene_id", "t_obs", "t_f", "dt", "origin_rule",
//    "tracks": [{"agent_id", "is_ego", "past": [[t,x,y,vx,vy,heading]...],
//                "future": [[x,y]...]}],
//    "lanes": [{"lane_id", "left_lane_id"?, "right_lane_id"?, "centerline": [[x,y]...]}]}
// Blank lines are skipped. Units are meters, seconds and radians.

/// Parses every record, segments lanes with segment_length and validates.
/// Throws ParseError (with line number) or ValidationError.
std::vector<Scene> read_scenes(std::istream & in, double segment_length = kDefaultSegmentLength);
std::vector<Scene> load_scenes(
  const std::filesystem::path & path, double segment_length = kDefaultSegmentLength);

/// One record, without a trailing newline.
std::string scene_to_line(const Scene & scene);
void write_scenes(std::ostream & out, const std::vector<Scene> & scenes);
void save_scenes(const std::filesystem::path & path, const std::vector<Scene> & scenes);

const Scene & find_scene(const std::vector<Scene> & scenes, const std::string & scene_id);

}  // namespace hetpred
