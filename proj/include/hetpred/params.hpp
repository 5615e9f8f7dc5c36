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

#include "hetpred/tensor.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hetpred
{

/// Learnable tensors keyed by dotted path, iterated in lexicographic order.
class ParameterStore
{
public:
  using Map = std::map<std::string, Tensor>;

  /// Registers a zero-initialized tensor that requires grad.
  Tensor & add(const std::string & path, Shape shape);
  /// Registers an existing tensor (used when loading checkpoints).
  void insert(const std::string & path, Tensor tensor);

  const Tensor & get(const std::string & path) const;
  Tensor & get(const std::string & path);
  bool contains(const std::string & path) const { return tensors_.contains(path); }

  std::vector<std::string> paths() const;
  std::map<std::string, Shape> shapes() const;
  std::size_t size() const { return tensors_.size(); }
  std::size_t element_count() const;
  void zero_grad();

  Map::const_iterator begin() const { return tensors_.begin(); }
  Map::const_iterator end() const { return tensors_.end(); }
  Map::iterator begin() { return tensors_.begin(); }
  Map::iterator end() { return tensors_.end(); }

  /// Deep copy; the copy shares no storage with this store.
  ParameterStore clone() const;

private:
  Map tensors_;
};

/// True for parameters that belong to a normalization layer (path contains ".norm.").
bool is_normalization_parameter(std::string_view path);

}  // namespace hetpred
