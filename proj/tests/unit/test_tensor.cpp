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

#include "hetpred/errors.hpp"
#include "hetpred/tensor.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace hetpred
{
namespace
{

using testing::gradcheck;
using testing::project;
using testing::random_tensor;

constexpr double kOpTolerance = 1e-5;

std::vector<double> vec(const Tensor & t) { return {t.values().begin(), t.values().end()}; }

TEST(TensorTest, ShapeBasics)
{
  EXPECT_EQ(Shape({2, 3}).numel(), 6u);
  EXPECT_EQ(Shape({0, 4}).numel(), 0u);
  EXPECT_EQ(Shape({}).numel(), 1u);
  EXPECT_THROW(Shape({1, 1, 1, 1, 1}), DimensionError);
  EXPECT_THROW(Tensor(Shape{2}, {1.0}), DimensionError);
}

TEST(TensorTest, MatmulExamples)
{
  const Tensor id = Tensor::matrix({{1, 0}, {0, 1}});
  const Tensor b = Tensor::matrix({{3, 4}, {5, 6}});
  EXPECT_EQ(vec(matmul(id, b)), (std::vector<double>{3, 4, 5, 6}));
  EXPECT_EQ(vec(matmul(Tensor::matrix({{1, 2}}), Tensor::matrix({{3}, {4}}))),
    (std::vector<double>{11}));
  EXPECT_THROW(matmul(id, Tensor::matrix({{1, 2, 3}})), DimensionError);
}

TEST(TensorTest, MatmulGradient)
{
  std::mt19937_64 rng(1);
  const double err = gradcheck(
    [](const auto & in) { return project(matmul(in[0], in[1])); },
    {random_tensor({3, 4}, rng, -10, 10), random_tensor({4, 2}, rng, -10, 10)});
  EXPECT_LT(err, 1e-6);
}

TEST(TensorTest, ElementwiseExamples)
{
  EXPECT_EQ(vec(add(Tensor::matrix({{1, 2}}), Tensor::matrix({{0, 0}}))), (std::vector<double>{1, 2}));
  EXPECT_EQ(vec(mul(Tensor::matrix({{2, 3}}), Tensor::matrix({{4, 5}}))), (std::vector<double>{8, 15}));
  EXPECT_EQ(vec(sub(Tensor::matrix({{2, 3}}), Tensor::matrix({{4, 5}}))), (std::vector<double>{-2, -2}));
  EXPECT_THROW(add(Tensor::matrix({{1, 2}}), Tensor::matrix({{1, 2, 3}})), DimensionError);
}

TEST(TensorTest, BiasGradientIsColumnSum)
{
  std::mt19937_64 rng(2);
  Tensor a = random_tensor({5, 3}, rng);
  Tensor bias = Tensor::zeros({3}, true);
  Tensor upstream = random_tensor({5, 3}, rng);
  {
    Tape tape;
    tape.backward(sum(mul(add(a, bias), upstream)));
  }
  for (std::size_t c = 0; c < 3; ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < 5; ++r) {
      col += upstream.at(r, c);
    }
    EXPECT_NEAR(bias.grad()[c], col, 1e-12);
  }
  const double err = gradcheck(
    [&](const auto & in) { return project(add(in[0], in[1])); }, {a, random_tensor({3}, rng)});
  EXPECT_LT(err, kOpTolerance);
}

TEST(TensorTest, ElementwiseGradients)
{
  std::mt19937_64 rng(3);
  for (auto op : {&add, &sub, &mul}) {
    const double err = gradcheck([op](const auto & in) { return project(op(in[0], in[1])); },
      {random_tensor({4, 3}, rng, -10, 10), random_tensor({4, 3}, rng, -10, 10)});
    EXPECT_LT(err, kOpTolerance);
    const double err_row = gradcheck([op](const auto & in) { return project(op(in[0], in[1])); },
      {random_tensor({4, 3}, rng, -10, 10), random_tensor({1, 3}, rng, -10, 10)});
    EXPECT_LT(err_row, kOpTolerance);
  }
}

TEST(TensorTest, ActivationExamples)
{
  EXPECT_EQ(vec(relu(Tensor::matrix({{-1, 0, 2}}))), (std::vector<double>{0, 0, 2}));
  EXPECT_DOUBLE_EQ(leaky_relu(Tensor::matrix({{-10}}), 0.2).item(), -2.0);
}

TEST(TensorTest, ActivationGradients)
{
  std::mt19937_64 rng(4);
  const auto x = random_tensor({4, 5}, rng, -10, 10, 1e-4);
  EXPECT_LT(gradcheck([](const auto & in) { return project(relu(in[0])); }, {x}), kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(leaky_relu(in[0], 0.2)); }, {x}),
    kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(sin(in[0])); }, {x}), kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(cos(in[0])); }, {x}), kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(scale(in[0], -1.5)); }, {x}),
    kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(add_scalar(in[0], 3.0)); }, {x}),
    kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return mean(in[0]); }, {x}), kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return sum(in[0]); }, {x}), kOpTolerance);
}

TEST(TensorTest, SmoothL1Branches)
{
  EXPECT_DOUBLE_EQ(smooth_l1(Tensor::scalar(0.5)).item(), 0.125);
  EXPECT_DOUBLE_EQ(smooth_l1(Tensor::scalar(2.0)).item(), 1.5);
  EXPECT_DOUBLE_EQ(smooth_l1(Tensor::scalar(-2.0)).item(), 1.5);
  std::mt19937_64 rng(5);
  auto x = random_tensor({6, 2}, rng, -3, 3);
  for (auto & v : x.mutable_values()) {
    if (std::abs(std::abs(v) - 1.0) < 1e-3) {
      v += 0.01;
    }
  }
  EXPECT_LT(gradcheck([](const auto & in) { return project(smooth_l1(in[0])); }, {x}), kOpTolerance);
}

TEST(TensorTest, LayerNormExamples)
{
  const Tensor one = Tensor::full({4}, 1.0);
  const Tensor zero = Tensor::zeros({4});
  const auto flat = layer_norm(Tensor::matrix({{1, 1, 1, 1}}), one, zero);
  for (double v : flat.values()) {
    EXPECT_DOUBLE_EQ(v, 0.0);
  }
  const auto out = layer_norm(Tensor::matrix({{-1, 1}}), Tensor::full({2}, 1.0), Tensor::zeros({2}));
  EXPECT_NEAR(out.values()[0], -1.0, 1e-4);
  EXPECT_NEAR(out.values()[1], 1.0, 1e-4);
}

TEST(TensorTest, LayerNormGradient)
{
  std::mt19937_64 rng(6);
  const double err = gradcheck(
    [](const auto & in) { return project(layer_norm(in[0], in[1], in[2])); },
    {random_tensor({4, 8}, rng, -10, 10), random_tensor({8}, rng), random_tensor({8}, rng)});
  EXPECT_LT(err, kOpTolerance);
}

TEST(TensorTest, SegmentSumExamples)
{
  const std::vector<std::size_t> none;
  const auto empty = segment_sum(Tensor::zeros({0, 3}), none, 2);
  EXPECT_EQ(empty.shape(), Shape({2, 3}));
  for (double v : empty.values()) {
    EXPECT_EQ(v, 0.0);
  }
  const std::vector<std::size_t> targets = {0, 0, 1};
  EXPECT_EQ(vec(segment_sum(Tensor::matrix({{1}, {2}, {3}}), targets, 2)),
    (std::vector<double>{3, 3}));
  const std::vector<std::size_t> bad = {0, 5, 1};
  EXPECT_THROW(segment_sum(Tensor::matrix({{1}, {2}, {3}}), bad, 2), IndexError);
}

TEST(TensorTest, SegmentSumGradientRoutesToTarget)
{
  std::mt19937_64 rng(7);
  const std::vector<std::size_t> targets = {2, 0, 2, 1, 0};
  Tensor msg = random_tensor({5, 3}, rng);
  msg.set_requires_grad(true);
  Tensor upstream = random_tensor({3, 3}, rng);
  {
    Tape tape;
    tape.backward(sum(mul(segment_sum(msg, targets, 3), upstream)));
  }
  const auto g = msg.grad();
  for (std::size_t e = 0; e < 5; ++e) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_DOUBLE_EQ(g[e * 3 + c], upstream.at(targets[e], c));
    }
  }
  EXPECT_LT(gradcheck([&](const auto & in) { return project(segment_sum(in[0], targets, 3)); },
              {random_tensor({5, 3}, rng, -10, 10)}),
    kOpTolerance);
}

TEST(TensorTest, SegmentSoftmaxExamples)
{
  const std::vector<std::size_t> single = {0, 1};
  const auto alone = segment_softmax(Tensor::matrix({{3.0}, {-7.0}}), single, 2);
  for (double v : alone.values()) {
    EXPECT_DOUBLE_EQ(v, 1.0);
  }
  const std::vector<std::size_t> same = {0, 0};
  EXPECT_EQ(vec(segment_softmax(Tensor::matrix({{0.0}, {0.0}}), same, 1)),
    (std::vector<double>{0.5, 0.5}));
}

TEST(TensorTest, SegmentSoftmaxGroupsSumToOne)
{
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> pick(0, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> targets(12);
    for (auto & t : targets) {
      t = pick(rng);
    }
    const auto out = segment_softmax(random_tensor({12, 2}, rng, -10, 10), targets, 5);
    for (std::size_t col = 0; col < 2; ++col) {
      std::vector<double> total(5, 0.0);
      std::vector<bool> seen(5, false);
      for (std::size_t e = 0; e < 12; ++e) {
        total[targets[e]] += out.at(e, col);
        seen[targets[e]] = true;
      }
      for (std::size_t n = 0; n < 5; ++n) {
        if (seen[n]) {
          EXPECT_NEAR(total[n], 1.0, 1e-12);
        }
      }
    }
  }
  const std::vector<std::size_t> targets = {0, 1, 0, 0, 1};
  EXPECT_LT(gradcheck([&](const auto & in) { return project(segment_softmax(in[0], targets, 2)); },
              {random_tensor({5, 2}, rng, -10, 10)}),
    kOpTolerance);
}

TEST(TensorTest, ConcatGatherScatterTake)
{
  EXPECT_EQ(vec(concat_cols({Tensor::matrix({{1}}), Tensor::matrix({{2}})})),
    (std::vector<double>{1, 2}));
  EXPECT_EQ(vec(concat_rows({Tensor::matrix({{1, 2}}), Tensor::matrix({{3, 4}})})),
    (std::vector<double>{1, 2, 3, 4}));

  Tensor a = Tensor::matrix({{1, 2}, {3, 4}});
  a.set_requires_grad(true);
  const std::vector<std::size_t> idx = {0, 0};
  {
    Tape tape;
    const auto g = gather_rows(a, idx);
    EXPECT_EQ(vec(g), (std::vector<double>{1, 2, 1, 2}));
    tape.backward(sum(mul(g, Tensor::matrix({{1, 10}, {100, 1000}}))));
  }
  EXPECT_EQ(a.grad(), (std::vector<double>{101, 1010, 0, 0}));

  std::mt19937_64 rng(9);
  const std::vector<std::size_t> rows = {2, 0, 1, 2};
  const std::vector<std::size_t> dest = {3, 0};
  const std::vector<std::size_t> flat = {5, 0, 3, 3};
  EXPECT_LT(gradcheck([](const auto & in) { return project(concat_cols({in[0], in[1]})); },
              {random_tensor({3, 2}, rng), random_tensor({3, 4}, rng)}),
    kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(concat_rows({in[0], in[1]})); },
              {random_tensor({2, 3}, rng), random_tensor({1, 3}, rng)}),
    kOpTolerance);
  EXPECT_LT(gradcheck([&](const auto & in) { return project(gather_rows(in[0], rows)); },
              {random_tensor({3, 3}, rng)}),
    kOpTolerance);
  EXPECT_LT(gradcheck([&](const auto & in) { return project(scatter_rows(in[0], dest, 4)); },
              {random_tensor({2, 3}, rng)}),
    kOpTolerance);
  EXPECT_LT(gradcheck([&](const auto & in) { return project(take(in[0], flat)); },
              {random_tensor({2, 3}, rng)}),
    kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(reshape(in[0], Shape{3, 2})); },
              {random_tensor({2, 3}, rng)}),
    kOpTolerance);
}

TEST(TensorTest, BlockSumAndRepeatAreAdjoint)
{
  std::mt19937_64 rng(10);
  const auto x = random_tensor({3, 6}, rng);
  const auto y = random_tensor({3, 2}, rng);
  // <block_sum(x), y> == <x, block_repeat(y)>
  EXPECT_NEAR(sum(mul(block_sum(x, 2), y)).item(), sum(mul(x, block_repeat(y, 3))).item(), 1e-12);
  EXPECT_LT(gradcheck([](const auto & in) { return project(block_sum(in[0], 3)); },
              {random_tensor({4, 6}, rng)}),
    kOpTolerance);
  EXPECT_LT(gradcheck([](const auto & in) { return project(block_repeat(in[0], 2)); },
              {random_tensor({4, 3}, rng)}),
    kOpTolerance);
}

TEST(TensorTest, CompositeLayerGradient)
{
  std::mt19937_64 rng(11);
  const std::vector<std::size_t> targets = {1, 0, 1};
  const double err = gradcheck(
    [&](const auto & in) {
      const auto h = relu(add(matmul(in[0], in[1]), in[2]));
      const auto agg = segment_sum(h, targets, 2);
      return project(layer_norm(agg, in[3], in[4]));
    },
    {random_tensor({3, 4}, rng), random_tensor({4, 5}, rng), random_tensor({5}, rng),
      random_tensor({5}, rng), random_tensor({5}, rng)});
  EXPECT_LT(err, kOpTolerance);
}

TEST(TapeTest, NoRecordingWithoutTapeOrGrad)
{
  Tensor a = Tensor::matrix({{1, 2}});
  Tensor b = Tensor::matrix({{3, 4}});
  b.set_requires_grad(true);
  EXPECT_FALSE(add(a, b).requires_grad());
  Tape tape;
  EXPECT_FALSE(add(a, a).requires_grad());
  EXPECT_TRUE(add(a, b).requires_grad());
  EXPECT_EQ(tape.size(), 1u);
}

TEST(TapeTest, BackwardOnceAndScalarRoot)
{
  Tensor a = Tensor::matrix({{1, 2}});
  a.set_requires_grad(true);
  Tape tape;
  const auto s = sum(a);
  EXPECT_THROW(tape.backward(a), TapeError);
  tape.backward(s);
  EXPECT_THROW(tape.backward(s), TapeError);
}

TEST(TapeTest, GradientsAccumulateAcrossPasses)
{
  Tensor a = Tensor::matrix({{1, 2}});
  a.set_requires_grad(true);
  for (int pass = 0; pass < 2; ++pass) {
    Tape tape;
    tape.backward(sum(scale(a, 3.0)), 0.5);
  }
  EXPECT_EQ(a.grad(), (std::vector<double>{3.0, 3.0}));
  a.zero_grad();
  EXPECT_EQ(a.grad(), (std::vector<double>{0.0, 0.0}));
}

TEST(TapeTest, NestedTapesRestorePrevious)
{
  Tape outer;
  EXPECT_EQ(Tape::active(), &outer);
  {
    Tape inner;
    EXPECT_EQ(Tape::active(), &inner);
  }
  EXPECT_EQ(Tape::active(), &outer);
}

}  // namespace
}  // namespace hetpred
