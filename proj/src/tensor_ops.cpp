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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace hetpred
{

namespace
{

using NodePtr = std::shared_ptr<detail::TensorNode>;

void record_if_needed(const Tensor & out, std::function<void()> fn)
{
  if (out.requires_grad()) {
    Tape::active()->record(std::move(fn));
  }
}

void require_rank2(const Tensor & a, const char * op)
{
  if (a.rank() != 2) {
    throw DimensionError(std::string(op) + " expects a rank-2 tensor, got " + a.shape().to_string());
  }
}

void check_targets(std::span<const std::size_t> targets, std::size_t rows, std::size_t n, const char * op)
{
  if (targets.size() != rows) {
    throw DimensionError(std::string(op) + ": " + std::to_string(targets.size()) +
      " targets for " + std::to_string(rows) + " rows");
  }
  for (std::size_t e = 0; e < targets.size(); ++e) {
    if (targets[e] >= n) {
      throw IndexError(std::string(op) + ": target " + std::to_string(targets[e]) + " of edge " +
        std::to_string(e) + " out of range for " + std::to_string(n) + " nodes");
    }
  }
}

enum class Broadcast { kNone, kRow };

Broadcast broadcast_mode(const Tensor & a, const Tensor & b, const char * op)
{
  if (a.shape() == b.shape()) {
    return Broadcast::kNone;
  }
  if (a.rank() == 2) {
    const auto cols = a.dim(1);
    const bool row_vector = (b.rank() == 1 && b.dim(0) == cols) ||
      (b.rank() == 2 && b.dim(0) == 1 && b.dim(1) == cols);
    if (row_vector) {
      return Broadcast::kRow;
    }
  }
  throw DimensionError(std::string(op) + ": shapes " + a.shape().to_string() + " and " +
    b.shape().to_string() + " are not broadcastable");
}

enum class Binary { kAdd, kSub, kMul };

Tensor binary(const Tensor & a, const Tensor & b, Binary kind, const char * name)
{
  const auto mode = broadcast_mode(a, b, name);
  const auto av = a.values();
  const auto bv = b.values();
  const std::size_t n = av.size();
  const std::size_t cols = mode == Broadcast::kRow ? a.dim(1) : 1;
  auto b_at = [&](std::size_t i) { return mode == Broadcast::kRow ? bv[i % cols] : bv[i]; };

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (kind) {
      case Binary::kAdd: out[i] = av[i] + b_at(i); break;
      case Binary::kSub: out[i] = av[i] - b_at(i); break;
      case Binary::kMul: out[i] = av[i] * b_at(i); break;
    }
  }
  Tensor result = make_op_result(a.shape(), std::move(out), {&a, &b});
  NodePtr on = result.node(), an = a.node(), bn = b.node();
  record_if_needed(result, [on, an, bn, kind, mode, cols]() {
    if (on->grad.empty()) {
      return;
    }
    const auto & g = on->grad;
    const std::size_t n = g.size();
    auto b_index = [&](std::size_t i) { return mode == Broadcast::kRow ? i % cols : i; };
    if (an->requires_grad) {
      auto & ga = an->ensure_grad();
      for (std::size_t i = 0; i < n; ++i) {
        ga[i] += kind == Binary::kMul ? g[i] * bn->value[b_index(i)] : g[i];
      }
    }
    if (bn->requires_grad) {
      auto & gb = bn->ensure_grad();
      for (std::size_t i = 0; i < n; ++i) {
        double d = g[i];
        if (kind == Binary::kSub) {
          d = -d;
        } else if (kind == Binary::kMul) {
          d *= an->value[i];
        }
        gb[b_index(i)] += d;
      }
    }
  });
  return result;
}

template <typename Fwd, typename Deriv>
Tensor unary(const Tensor & a, Fwd fwd, Deriv deriv)
{
  const auto av = a.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) {
    out[i] = fwd(av[i]);
  }
  Tensor result = make_op_result(a.shape(), std::move(out), {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an, deriv]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (std::size_t i = 0; i < ga.size(); ++i) {
      ga[i] += on->grad[i] * deriv(an->value[i]);
    }
  });
  return result;
}

}  // namespace

Tensor matmul(const Tensor & a, const Tensor & b)
{
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw DimensionError(
      "matmul: cannot multiply " + a.shape().to_string() + " by " + b.shape().to_string());
  }
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  const auto av = a.values();
  const auto bv = b.values();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double * row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      const double * brow = bv.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] += aip * brow[j];
      }
    }
  }
  Tensor result = make_op_result(Shape{m, n}, std::move(out), {&a, &b});
  NodePtr on = result.node(), an = a.node(), bn = b.node();
  record_if_needed(result, [on, an, bn, m, k, n]() {
    if (on->grad.empty()) {
      return;
    }
    const double * g = on->grad.data();
    if (an->requires_grad) {
      auto & ga = an->ensure_grad();
      const double * bv = bn->value.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            acc += g[i * n + j] * bv[p * n + j];
          }
          ga[i * k + p] += acc;
        }
      }
    }
    if (bn->requires_grad) {
      auto & gb = bn->ensure_grad();
      const double * av = an->value.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = av[i * k + p];
          double * gbrow = gb.data() + p * n;
          for (std::size_t j = 0; j < n; ++j) {
            gbrow[j] += aip * g[i * n + j];
          }
        }
      }
    }
  });
  return result;
}

Tensor add(const Tensor & a, const Tensor & b) { return binary(a, b, Binary::kAdd, "add"); }
Tensor sub(const Tensor & a, const Tensor & b) { return binary(a, b, Binary::kSub, "sub"); }
Tensor mul(const Tensor & a, const Tensor & b) { return binary(a, b, Binary::kMul, "mul"); }

Tensor relu(const Tensor & a)
{
  return unary(
    a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor & a, double slope)
{
  return unary(
    a, [slope](double x) { return x > 0.0 ? x : slope * x; },
    [slope](double x) { return x > 0.0 ? 1.0 : slope; });
}

Tensor sin(const Tensor & a)
{
  return unary(a, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
}

Tensor cos(const Tensor & a)
{
  return unary(a, [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });
}

Tensor scale(const Tensor & a, double factor)
{
  return unary(
    a, [factor](double x) { return x * factor; }, [factor](double) { return factor; });
}

Tensor add_scalar(const Tensor & a, double value)
{
  return unary(a, [value](double x) { return x + value; }, [](double) { return 1.0; });
}

Tensor smooth_l1(const Tensor & residual)
{
  return unary(
    residual,
    [](double r) { return std::abs(r) < 1.0 ? 0.5 * r * r : std::abs(r) - 0.5; },
    [](double r) {
      if (std::abs(r) < 1.0) {
        return r;
      }
      return r > 0.0 ? 1.0 : -1.0;
    });
}

Tensor sum(const Tensor & a)
{
  double total = 0.0;
  for (double v : a.values()) {
    total += v;
  }
  Tensor result = make_op_result(Shape{1}, {total}, {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (double & v : ga) {
      v += on->grad[0];
    }
  });
  return result;
}

Tensor mean(const Tensor & a)
{
  if (a.numel() == 0) {
    throw DimensionError("mean of an empty tensor");
  }
  return scale(sum(a), 1.0 / static_cast<double>(a.numel()));
}

Tensor layer_norm(const Tensor & a, const Tensor & gain, const Tensor & offset)
{
  require_rank2(a, "layer_norm");
  const std::size_t n = a.dim(0), f = a.dim(1);
  if (f == 0 || gain.numel() != f || offset.numel() != f) {
    throw DimensionError("layer_norm: input " + a.shape().to_string() + " with gain " +
      gain.shape().to_string() + " and offset " + offset.shape().to_string());
  }
  constexpr double kEps = 1e-5;
  const auto av = a.values();
  const auto gv = gain.values();
  const auto ov = offset.values();
  std::vector<double> xhat(n * f), inv_std(n), out(n * f);
  for (std::size_t i = 0; i < n; ++i) {
    const double * row = av.data() + i * f;
    double mu = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      mu += row[j];
    }
    mu /= static_cast<double>(f);
    double var = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      var += (row[j] - mu) * (row[j] - mu);
    }
    var /= static_cast<double>(f);
    inv_std[i] = 1.0 / std::sqrt(var + kEps);
    for (std::size_t j = 0; j < f; ++j) {
      xhat[i * f + j] = (row[j] - mu) * inv_std[i];
      out[i * f + j] = xhat[i * f + j] * gv[j] + ov[j];
    }
  }
  Tensor result = make_op_result(a.shape(), std::move(out), {&a, &gain, &offset});
  NodePtr on = result.node(), an = a.node(), gn = gain.node(), bn = offset.node();
  record_if_needed(
    result, [on, an, gn, bn, n, f, xhat = std::move(xhat), inv_std = std::move(inv_std)]() {
      if (on->grad.empty()) {
        return;
      }
      const auto & g = on->grad;
      if (gn->requires_grad) {
        auto & gg = gn->ensure_grad();
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < f; ++j) {
            gg[j] += g[i * f + j] * xhat[i * f + j];
          }
        }
      }
      if (bn->requires_grad) {
        auto & gb = bn->ensure_grad();
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < f; ++j) {
            gb[j] += g[i * f + j];
          }
        }
      }
      if (an->requires_grad) {
        auto & ga = an->ensure_grad();
        const double fd = static_cast<double>(f);
        std::vector<double> dxhat(f);
        for (std::size_t i = 0; i < n; ++i) {
          double s1 = 0.0, s2 = 0.0;
          for (std::size_t j = 0; j < f; ++j) {
            dxhat[j] = g[i * f + j] * gn->value[j];
            s1 += dxhat[j];
            s2 += dxhat[j] * xhat[i * f + j];
          }
          for (std::size_t j = 0; j < f; ++j) {
            ga[i * f + j] += inv_std[i] / fd * (fd * dxhat[j] - s1 - xhat[i * f + j] * s2);
          }
        }
      }
    });
  return result;
}

Tensor segment_sum(const Tensor & messages, std::span<const std::size_t> targets, std::size_t n)
{
  require_rank2(messages, "segment_sum");
  const std::size_t rows = messages.dim(0), f = messages.dim(1);
  check_targets(targets, rows, n, "segment_sum");
  const auto mv = messages.values();
  std::vector<double> out(n * f, 0.0);
  for (std::size_t e = 0; e < rows; ++e) {
    double * dst = out.data() + targets[e] * f;
    const double * src = mv.data() + e * f;
    for (std::size_t j = 0; j < f; ++j) {
      dst[j] += src[j];
    }
  }
  Tensor result = make_op_result(Shape{n, f}, std::move(out), {&messages});
  NodePtr on = result.node(), mn = messages.node();
  record_if_needed(result, [on, mn, f, tgt = std::vector<std::size_t>(targets.begin(), targets.end())]() {
    if (on->grad.empty() || !mn->requires_grad) {
      return;
    }
    auto & gm = mn->ensure_grad();
    for (std::size_t e = 0; e < tgt.size(); ++e) {
      for (std::size_t j = 0; j < f; ++j) {
        gm[e * f + j] += on->grad[tgt[e] * f + j];
      }
    }
  });
  return result;
}

Tensor segment_softmax(const Tensor & logits, std::span<const std::size_t> targets, std::size_t n)
{
  require_rank2(logits, "segment_softmax");
  const std::size_t rows = logits.dim(0), h = logits.dim(1);
  check_targets(targets, rows, n, "segment_softmax");
  const auto lv = logits.values();
  std::vector<double> group_max(n * h, -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < rows; ++e) {
    for (std::size_t c = 0; c < h; ++c) {
      auto & m = group_max[targets[e] * h + c];
      m = std::max(m, lv[e * h + c]);
    }
  }
  std::vector<double> out(rows * h), denom(n * h, 0.0);
  for (std::size_t e = 0; e < rows; ++e) {
    for (std::size_t c = 0; c < h; ++c) {
      out[e * h + c] = std::exp(lv[e * h + c] - group_max[targets[e] * h + c]);
      denom[targets[e] * h + c] += out[e * h + c];
    }
  }
  for (std::size_t e = 0; e < rows; ++e) {
    for (std::size_t c = 0; c < h; ++c) {
      out[e * h + c] /= denom[targets[e] * h + c];
    }
  }
  Tensor result = make_op_result(logits.shape(), std::move(out), {&logits});
  NodePtr on = result.node(), ln = logits.node();
  record_if_needed(
    result, [on, ln, n, h, tgt = std::vector<std::size_t>(targets.begin(), targets.end())]() {
      if (on->grad.empty() || !ln->requires_grad) {
        return;
      }
      const auto & g = on->grad;
      const auto & y = on->value;
      std::vector<double> dot(n * h, 0.0);
      for (std::size_t e = 0; e < tgt.size(); ++e) {
        for (std::size_t c = 0; c < h; ++c) {
          dot[tgt[e] * h + c] += g[e * h + c] * y[e * h + c];
        }
      }
      auto & gl = ln->ensure_grad();
      for (std::size_t e = 0; e < tgt.size(); ++e) {
        for (std::size_t c = 0; c < h; ++c) {
          gl[e * h + c] += y[e * h + c] * (g[e * h + c] - dot[tgt[e] * h + c]);
        }
      }
    });
  return result;
}

Tensor concat_cols(const std::vector<Tensor> & parts)
{
  if (parts.empty()) {
    throw DimensionError("concat_cols of zero tensors");
  }
  const std::size_t rows = parts.front().rank() == 2 ? parts.front().dim(0) : 0;
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto & p : parts) {
    if (p.rank() != 2 || p.dim(0) != rows) {
      throw DimensionError("concat_cols: part " + p.shape().to_string() +
        " does not have " + std::to_string(rows) + " rows");
    }
    widths.push_back(p.dim(1));
    total += p.dim(1);
  }
  std::vector<double> out(rows * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto pv = parts[k].values();
    for (std::size_t i = 0; i < rows; ++i) {
      std::copy_n(pv.data() + i * widths[k], widths[k], out.data() + i * total + offset);
    }
    offset += widths[k];
  }
  std::vector<NodePtr> inputs;
  bool any_grad = false;
  for (const auto & p : parts) {
    inputs.push_back(p.node());
    any_grad = any_grad || p.requires_grad();
  }
  Tensor result = make_op_result(Shape{rows, total}, std::move(out), {});
  result.set_requires_grad(any_grad && Tape::active() != nullptr);
  NodePtr on = result.node();
  record_if_needed(result, [on, inputs, widths, rows, total]() {
    if (on->grad.empty()) {
      return;
    }
    std::size_t offset = 0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      if (inputs[k]->requires_grad) {
        auto & gk = inputs[k]->ensure_grad();
        for (std::size_t i = 0; i < rows; ++i) {
          for (std::size_t j = 0; j < widths[k]; ++j) {
            gk[i * widths[k] + j] += on->grad[i * total + offset + j];
          }
        }
      }
      offset += widths[k];
    }
  });
  return result;
}

Tensor concat_rows(const std::vector<Tensor> & parts)
{
  if (parts.empty()) {
    throw DimensionError("concat_rows of zero tensors");
  }
  const std::size_t cols = parts.front().rank() == 2 ? parts.front().dim(1) : 0;
  std::size_t rows = 0;
  std::vector<double> out;
  std::vector<NodePtr> inputs;
  bool any_grad = false;
  for (const auto & p : parts) {
    if (p.rank() != 2 || p.dim(1) != cols) {
      throw DimensionError("concat_rows: part " + p.shape().to_string() +
        " does not have " + std::to_string(cols) + " columns");
    }
    rows += p.dim(0);
    out.insert(out.end(), p.values().begin(), p.values().end());
    inputs.push_back(p.node());
    any_grad = any_grad || p.requires_grad();
  }
  Tensor result = make_op_result(Shape{rows, cols}, std::move(out), {});
  result.set_requires_grad(any_grad && Tape::active() != nullptr);
  NodePtr on = result.node();
  record_if_needed(result, [on, inputs]() {
    if (on->grad.empty()) {
      return;
    }
    std::size_t offset = 0;
    for (const auto & in : inputs) {
      const std::size_t len = in->value.size();
      if (in->requires_grad) {
        auto & gi = in->ensure_grad();
        for (std::size_t i = 0; i < len; ++i) {
          gi[i] += on->grad[offset + i];
        }
      }
      offset += len;
    }
  });
  return result;
}

Tensor gather_rows(const Tensor & a, std::span<const std::size_t> index)
{
  require_rank2(a, "gather_rows");
  const std::size_t m = a.dim(0), f = a.dim(1);
  const auto av = a.values();
  std::vector<double> out(index.size() * f);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= m) {
      throw IndexError("gather_rows: index " + std::to_string(index[i]) + " out of range for " +
        std::to_string(m) + " rows");
    }
    std::copy_n(av.data() + index[i] * f, f, out.data() + i * f);
  }
  Tensor result = make_op_result(Shape{index.size(), f}, std::move(out), {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an, f, idx = std::vector<std::size_t>(index.begin(), index.end())]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < f; ++j) {
        ga[idx[i] * f + j] += on->grad[i * f + j];
      }
    }
  });
  return result;
}

Tensor scatter_rows(const Tensor & a, std::span<const std::size_t> index, std::size_t n)
{
  require_rank2(a, "scatter_rows");
  const std::size_t f = a.dim(1);
  if (index.size() != a.dim(0)) {
    throw DimensionError("scatter_rows: " + std::to_string(index.size()) + " indices for " +
      std::to_string(a.dim(0)) + " rows");
  }
  std::vector<bool> seen(n, false);
  for (auto i : index) {
    if (i >= n) {
      throw IndexError("scatter_rows: index " + std::to_string(i) + " out of range for " +
        std::to_string(n) + " rows");
    }
    if (seen[i]) {
      throw IndexError("scatter_rows: duplicate index " + std::to_string(i));
    }
    seen[i] = true;
  }
  const auto av = a.values();
  std::vector<double> out(n * f, 0.0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    std::copy_n(av.data() + i * f, f, out.data() + index[i] * f);
  }
  Tensor result = make_op_result(Shape{n, f}, std::move(out), {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an, f, idx = std::vector<std::size_t>(index.begin(), index.end())]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < f; ++j) {
        ga[i * f + j] += on->grad[idx[i] * f + j];
      }
    }
  });
  return result;
}

Tensor take(const Tensor & a, std::span<const std::size_t> index)
{
  const auto av = a.values();
  std::vector<double> out(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= av.size()) {
      throw IndexError("take: index " + std::to_string(index[i]) + " out of range for " +
        std::to_string(av.size()) + " elements");
    }
    out[i] = av[index[i]];
  }
  Tensor result = make_op_result(Shape{index.size()}, std::move(out), {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an, idx = std::vector<std::size_t>(index.begin(), index.end())]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      ga[idx[i]] += on->grad[i];
    }
  });
  return result;
}

Tensor reshape(const Tensor & a, Shape shape)
{
  if (shape.numel() != a.numel()) {
    throw DimensionError(
      "reshape: cannot view " + a.shape().to_string() + " as " + shape.to_string());
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  Tensor result = make_op_result(std::move(shape), std::move(out), {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (std::size_t i = 0; i < ga.size(); ++i) {
      ga[i] += on->grad[i];
    }
  });
  return result;
}

Tensor block_sum(const Tensor & a, std::size_t blocks)
{
  require_rank2(a, "block_sum");
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  if (blocks == 0 || cols % blocks != 0) {
    throw DimensionError("block_sum: " + std::to_string(cols) + " columns not divisible into " +
      std::to_string(blocks) + " blocks");
  }
  const std::size_t width = cols / blocks;
  const auto av = a.values();
  std::vector<double> out(rows * blocks, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out[i * blocks + j / width] += av[i * cols + j];
    }
  }
  Tensor result = make_op_result(Shape{rows, blocks}, std::move(out), {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an, rows, cols, blocks, width]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        ga[i * cols + j] += on->grad[i * blocks + j / width];
      }
    }
  });
  return result;
}

Tensor block_repeat(const Tensor & a, std::size_t width)
{
  require_rank2(a, "block_repeat");
  const std::size_t rows = a.dim(0), blocks = a.dim(1), cols = blocks * width;
  const auto av = a.values();
  std::vector<double> out(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out[i * cols + j] = av[i * blocks + j / width];
    }
  }
  Tensor result = make_op_result(Shape{rows, cols}, std::move(out), {&a});
  NodePtr on = result.node(), an = a.node();
  record_if_needed(result, [on, an, rows, cols, blocks, width]() {
    if (on->grad.empty() || !an->requires_grad) {
      return;
    }
    auto & ga = an->ensure_grad();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        ga[i * blocks + j / width] += on->grad[i * cols + j];
      }
    }
  });
  return result;
}

}  // namespace hetpred
