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

#include "hetpred/tensor.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace hetpred
{

Shape::Shape(std::initializer_list<std::size_t> dims) : dims_(dims)
{
  if (dims_.size() > 4) {
    throw DimensionError("tensor rank " + std::to_string(dims_.size()) + " exceeds 4");
  }
}

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims))
{
  if (dims_.size() > 4) {
    throw DimensionError("tensor rank " + std::to_string(dims_.size()) + " exceeds 4");
  }
}

std::size_t Shape::numel() const
{
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::string Shape::to_string() const
{
  std::string out = "[";
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i > 0) {
      out += ",";
    }
    out += std::to_string(dims_[i]);
  }
  return out + "]";
}

std::vector<double> & detail::TensorNode::ensure_grad()
{
  if (grad.empty()) {
    grad.assign(value.size(), 0.0);
  }
  return grad;
}

Tensor::Tensor() : node_(std::make_shared<detail::TensorNode>())
{
  node_->shape = Shape{0};
}

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad)
: node_(std::make_shared<detail::TensorNode>())
{
  if (shape.numel() != values.size()) {
    throw DimensionError(
      "shape " + shape.to_string() + " holds " + std::to_string(shape.numel()) +
      " elements but " + std::to_string(values.size()) + " values were given");
  }
  node_->shape = std::move(shape);
  node_->value = std::move(values);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad)
{
  const auto n = shape.numel();
  return Tensor(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor Tensor::full(Shape shape, double value)
{
  const auto n = shape.numel();
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::scalar(double value, bool requires_grad)
{
  return Tensor(Shape{1}, {value}, requires_grad);
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows)
{
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(n_rows * n_cols);
  for (const auto & row : rows) {
    if (row.size() != n_cols) {
      throw DimensionError("ragged matrix literal");
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  return Tensor(Shape{n_rows, n_cols}, std::move(values));
}

double Tensor::item() const
{
  if (numel() != 1) {
    throw DimensionError("item() on tensor of shape " + shape().to_string());
  }
  return node_->value[0];
}

double Tensor::at(std::size_t row, std::size_t col) const
{
  if (rank() != 2 || row >= dim(0) || col >= dim(1)) {
    throw IndexError("at(" + std::to_string(row) + "," + std::to_string(col) + ") on shape " +
      shape().to_string());
  }
  return node_->value[row * dim(1) + col];
}

std::vector<double> Tensor::grad() const
{
  if (node_->grad.empty()) {
    return std::vector<double>(node_->value.size(), 0.0);
  }
  return node_->grad;
}

void Tensor::zero_grad()
{
  node_->grad.clear();
}

Tensor Tensor::clone() const
{
  return Tensor(node_->shape, node_->value, node_->requires_grad);
}

namespace
{
thread_local Tape * g_active_tape = nullptr;
}

Tape::Tape() : previous_(g_active_tape)
{
  g_active_tape = this;
}

Tape::~Tape()
{
  // Tapes nest strictly; restoring the previous one keeps the stack sound.
  g_active_tape = previous_;
}

Tape * Tape::active()
{
  return g_active_tape;
}

void Tape::record(std::function<void()> backward_fn)
{
  if (consumed_) {
    throw TapeError("cannot record onto a tape that already ran backward");
  }
  records_.push_back(std::move(backward_fn));
}

void Tape::backward(const Tensor & root, double seed)
{
  if (consumed_) {
    throw TapeError("backward called twice on the same tape");
  }
  if (root.numel() != 1) {
    throw TapeError("backward root must hold one element, got shape " + root.shape().to_string());
  }
  consumed_ = true;
  if (!root.requires_grad()) {
    return;
  }
  root.node()->ensure_grad()[0] += seed;
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
    (*it)();
  }
  records_.clear();
}

Tensor make_op_result(
  Shape shape, std::vector<double> values, std::initializer_list<const Tensor *> inputs)
{
  auto node = std::make_shared<detail::TensorNode>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  if (Tape::active() != nullptr) {
    node->requires_grad = std::any_of(
      inputs.begin(), inputs.end(), [](const Tensor * t) { return t->requires_grad(); });
  }
  return Tensor(std::move(node));
}

}  // namespace hetpred
