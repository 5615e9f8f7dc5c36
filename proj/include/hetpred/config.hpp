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

#include "hetpred/graph.hpp"
#include "hetpred/loss.hpp"
#include "hetpred/model.hpp"
#include "hetpred/optim.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace hetpred
{

struct RunConfig
{
  GraphConfig graph;
  ModelConfig model;
  LossConfig loss;
  OptimConfig optim;
  std::string train_data;
  std::string val_data;
  std::string out_dir;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const RunConfig &) const = default;
};

/// Pretty-printed JSON with one section per component.
std::string config_to_json(const RunConfig & cfg);
/// Missing keys keep their defaults; unknown keys raise ConfigError.
RunConfig config_from_json(const std::string & text);

void save_config(const std::filesystem::path & path, const RunConfig & cfg);
RunConfig load_config(const std::filesystem::path & path);

}  // namespace hetpred
