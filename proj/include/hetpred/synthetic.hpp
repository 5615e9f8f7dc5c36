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

#include <cstdint>
#include <vector>

namespace hetpred
{

/// Knobs of the synthetic scenario generator.
///
/// Each scene holds `lanes` parallel lanes that run straight and then bend
/// with a constant curvature drawn from [-max_curvature, max_curvature]. Every
/// lane is split into two lanes linked end-to-start. Agents follow a lane
/// centerline at constant speed; their futures are the exact continuation.
/// `noise` is the standard deviation of Gaussian noise on observed positions
/// and velocities (meters, m/s); headings get a tenth of it in radians.
struct SyntheticSpec
{
  std::size_t scenes = 8;
  std::size_t agents = 4;
  std::size_t lanes = 2;
  int t_obs = 10;
  int t_f = 30;
  double dt = 0.1;
  double noise = 0.0;
  double max_curvature = 0.02;
  double lane_spacing = 3.5;
  double min_speed = 4.0;
  double max_speed = 12.0;
  OriginRule origin_rule = OriginRule::kGeometricCenter;
  double segment_length = kDefaultSegmentLength;
};

/// Deterministic for a fixed (spec, seed). Scenes are segmented and valid.
std::vector<Scene> generate_synthetic(const SyntheticSpec & spec, std::uint64_t seed);

}  // namespace hetpred
