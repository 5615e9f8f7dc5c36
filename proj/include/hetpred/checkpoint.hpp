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

#include "hetpred/params.hpp"

#include <filesystem>
#include <iosfwd>

namespace hetpred
{

// Binary layout, all integers and floats little-endian:
//   "HOLIGRAPH1"
//   per parameter, lexicographic path order:
//     u32 path length, path bytes, u32 rank, u64 extent[rank], f64 value[numel]

void write_checkpoint(std::ostream & out, const ParameterStore & params);
/// Throws LoadError on a bad header or truncated record.
ParameterStore read_checkpoint(std::istream & in);

void save_checkpoint(const std::filesystem::path & path, const ParameterStore & params);
ParameterStore load_checkpoint(const std::filesystem::path & path);

}  // namespace hetpred
