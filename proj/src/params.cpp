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

#include "hetpred/params.hpp"

#include "hetpred/errors.hpp"

namespace hetpred
{

Tensor & ParameterStore::add(const std::string & path, Shape shape)
{
  auto [it, inserted] = tensors_.emplace(path, Tensor::zeros(std::move(shape), true));
  if (!inserted) {
    throw ConfigError("parameter '" + path + "' registered twice");
  }
  return it->second;
}

void ParameterStore::insert(const std::string & path, Tensor tensor)
{
  tensor.set_requires_grad(true);
  if (!tensors_.emplace(path, std::move(tensor)).second) {
    throw LoadError("parameter '" + path + "' appears twice");
  }
}

const Tensor & ParameterStore::get(const std::string & path) const
{
  auto it = tensors_.find(path);
  if (it == tensors_.end()) {
    throw LookupError("no parameter named '" + path + "'");
  }
  return it->second;
}

Tensor & ParameterStore::get(const std::string & path)
{
  auto it = tensors_.find(path);
  if (it == tensors_.end()) {
    throw LookupError("no parameter named '" + path + "'");
  }
  return it->second;
}

std::vector<std::string> ParameterStore::paths() const
{
  std::vector<std::string> out;
  out.reserve(tensors_.size());
  for (const auto & [path, _] : tensors_) {
    out.push_back(path);
  }
  return out;
}

std::map<std::string, Shape> ParameterStore::shapes() const
{
  std::map<std::string, Shape> out;
  for (const auto & [path, t] : tensors_) {
    out.emplace(path, t.shape());
  }
  return out;
}

std::size_t ParameterStore::element_count() const
{
  std::size_t n = 0;
  for (const auto & [_, t] : tensors_) {
    n += t.numel();
  }
  return n;
}

void ParameterStore::zero_grad()
{
  for (auto & [_, t] : tensors_) {
    t.zero_grad();
  }
}

ParameterStore ParameterStore::clone() const
{
  ParameterStore copy;
  for (const auto & [path, t] : tensors_) {
    copy.insert(path, t.clone());
  }
  return copy;
}

bool is_normalization_parameter(std::string_view path)
{
  return path.find(".norm.") != std::string_view::npos;
}

}  // namespace hetpred
