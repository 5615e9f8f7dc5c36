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
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hetpred
{

/// Extents of a dense row-major tensor, rank 0..4. Zero extents are allowed
/// so that empty scenes flow through the model without special cases.
class Shape
{
public:
  Shape() = default;
  Shape(std::initializer_list<std::size_t> dims);
  explicit Shape(std::vector<std::size_t> dims);

  std::size_t rank() const { return dims_.size(); }
  std::size_t operator[](std::size_t axis) const { return dims_.at(axis); }
  std::size_t numel() const;
  const std::vector<std::size_t> & dims() const { return dims_; }
  std::string to_string() const;

  bool operator==(const Shape & other) const = default;

private:
  std::vector<std::size_t> dims_;
};

namespace detail
{
struct TensorNode
{
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until touched by a backward pass
  bool requires_grad = false;

  std::vector<double> & ensure_grad();
};
}  // namespace detail

/// Shared handle to a dense float64 array with an optional gradient buffer.
///
/// Copies alias the same storage. Values are treated as immutable once an op
/// has consumed them; only the optimizer writes parameter values in place.
class Tensor
{
public:
  Tensor();
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value);
  static Tensor scalar(double value, bool requires_grad = false);
  /// Rank-2 tensor from nested rows; every row must have the same length.
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);

  const Shape & shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.rank(); }
  std::size_t dim(std::size_t axis) const { return node_->shape[axis]; }
  std::size_t numel() const { return node_->value.size(); }

  std::span<const double> values() const { return node_->value; }
  std::span<double> mutable_values() { return node_->value; }
  double item() const;
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool on) { node_->requires_grad = on; }
  bool has_grad() const { return !node_->grad.empty(); }
  /// Gradient buffer; an all-zero view of the right size when untouched.
  std::vector<double> grad() const;
  void zero_grad();

  /// Deep copy that is detached from any tape.
  Tensor clone() const;

  bool same_storage(const Tensor & other) const { return node_ == other.node_; }
  const std::shared_ptr<detail::TensorNode> & node() const { return node_; }

private:
  explicit Tensor(std::shared_ptr<detail::TensorNode> node) : node_(std::move(node)) {}
  friend Tensor make_op_result(Shape, std::vector<double>, std::initializer_list<const Tensor *>);

  std::shared_ptr<detail::TensorNode> node_;
};

/// Ordered record of differentiable operations for one forward pass.
///
/// Constructing a Tape makes it the active tape of the calling thread until it
/// is destroyed; ops executed while it is active and touching a tensor with
/// requires_grad are recorded. backward() replays the records in exact reverse
/// order and may be called once.
class Tape
{
public:
  Tape();
  ~Tape();
  Tape(const Tape &) = delete;
  Tape & operator=(const Tape &) = delete;

  /// Seeds d(root)/d(root) = seed and propagates. Root must hold one element.
  void backward(const Tensor & root, double seed = 1.0);

  std::size_t size() const { return records_.size(); }
  bool consumed() const { return consumed_; }

  static Tape * active();
  void record(std::function<void()> backward_fn);

private:
  std::vector<std::function<void()>> records_;
  Tape * previous_ = nullptr;
  bool consumed_ = false;
};

/// Result tensor for an op; requires_grad iff a tape is active and any input
/// requires grad.
Tensor make_op_result(Shape shape, std::vector<double> values,
  std::initializer_list<const Tensor *> inputs);

// ---------------------------------------------------------------------------
// Differentiable operations. Rank-2 operands are [rows, cols].

Tensor matmul(const Tensor & a, const Tensor & b);

/// Elementwise a+b, a-b, a*b. b is either the same shape as a or a single bias
/// row ([cols] or [1, cols]) broadcast over the rows of a rank-2 a.
Tensor add(const Tensor & a, const Tensor & b);
Tensor sub(const Tensor & a, const Tensor & b);
Tensor mul(const Tensor & a, const Tensor & b);

Tensor relu(const Tensor & a);
Tensor leaky_relu(const Tensor & a, double slope);
Tensor sin(const Tensor & a);
Tensor cos(const Tensor & a);
Tensor scale(const Tensor & a, double factor);
Tensor add_scalar(const Tensor & a, double value);
/// Elementwise smooth-L1 of a residual: 0.5 r^2 if |r| < 1, else |r| - 0.5.
Tensor smooth_l1(const Tensor & residual);

/// Sum / mean of all elements as a rank-1 tensor of one element.
Tensor sum(const Tensor & a);
Tensor mean(const Tensor & a);

/// Per-row normalization over the feature axis with epsilon 1e-5, then
/// elementwise gain and offset (both [f]).
Tensor layer_norm(const Tensor & a, const Tensor & gain, const Tensor & offset);

/// out[i] = sum of rows e with targets[e] == i, accumulated in ascending e.
Tensor segment_sum(const Tensor & messages, std::span<const std::size_t> targets, std::size_t n);
/// Column-wise softmax over each group of rows sharing a target.
Tensor segment_softmax(const Tensor & logits, std::span<const std::size_t> targets, std::size_t n);

Tensor concat_cols(const std::vector<Tensor> & parts);
Tensor concat_rows(const std::vector<Tensor> & parts);
Tensor gather_rows(const Tensor & a, std::span<const std::size_t> index);
/// [n, f] zeros with row index[i] set to a[i]; indices must be distinct.
Tensor scatter_rows(const Tensor & a, std::span<const std::size_t> index, std::size_t n);
/// Flat element gather: out[i] = a.values()[index[i]], shape [index.size()].
Tensor take(const Tensor & a, std::span<const std::size_t> index);
Tensor reshape(const Tensor & a, Shape shape);

/// [E, F] -> [E, H]: sums each of H contiguous column blocks of width F/H.
Tensor block_sum(const Tensor & a, std::size_t blocks);
/// [E, H] -> [E, H*width]: repeats column h across block h. Adjoint of block_sum.
Tensor block_repeat(const Tensor & a, std::size_t width);

}  // namespace hetpred
