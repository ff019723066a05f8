#pragma once

// Reverse-mode automatic differentiation on a define-by-run tape. Each op
// computes its output eagerly and, when the tape is recording, pushes a
// closure that accumulates gradients into its inputs. backward() replays the
// closures in exact reverse execution order. Matrix products are delegated
// to Eigen; everything else is written out directly.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include "codonmpnn/tensor.hpp"

namespace codonmpnn {

template <typename Real>
struct AdNode {
  Shape shape;
  std::vector<Real> value;
  std::vector<Real> grad;  // sized lazily on first accumulation
  bool requires_grad = false;

  int64_t rows() const { return shape.size() == 2 ? shape[0] : 1; }
  int64_t cols() const { return shape.empty() ? 1 : shape.back(); }
  int64_t numel() const { return static_cast<int64_t>(value.size()); }

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), Real(0));
  }
  void zero_grad() { std::fill(grad.begin(), grad.end(), Real(0)); }
};

template <typename Real>
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<AdNode<Real>> node) : node_(std::move(node)) {}

  bool valid() const { return node_ != nullptr; }
  AdNode<Real>& node() const { return *node_; }
  const std::shared_ptr<AdNode<Real>>& ptr() const { return node_; }

  const Shape& shape() const { return node_->shape; }
  const std::vector<Real>& value() const { return node_->value; }
  std::vector<Real>& value() { return node_->value; }
  const std::vector<Real>& grad() const { return node_->grad; }
  int64_t rows() const { return node_->rows(); }
  int64_t cols() const { return node_->cols(); }
  int64_t numel() const { return node_->numel(); }

  Tensor<Real> to_tensor() const { return Tensor<Real>(node_->shape, node_->value); }

 private:
  std::shared_ptr<AdNode<Real>> node_;
};

template <typename Real>
using EigenMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Real>
using MatMap = Eigen::Map<EigenMatrix<Real>>;
template <typename Real>
using ConstMatMap = Eigen::Map<const EigenMatrix<Real>>;

template <typename Real>
class Tape {
 public:
  explicit Tape(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }

  Var<Real> leaf(Tensor<Real> t, bool requires_grad = false) {
    auto node = std::make_shared<AdNode<Real>>();
    node->shape = std::move(t.shape);
    node->value = std::move(t.data);
    node->requires_grad = requires_grad;
    return Var<Real>(std::move(node));
  }

  Var<Real> make(Shape shape) {
    auto node = std::make_shared<AdNode<Real>>();
    node->shape = std::move(shape);
    node->value.assign(shape_numel(node->shape), Real(0));
    return Var<Real>(std::move(node));
  }

  // Registers a backward closure. `inputs` are the vars the op read; the
  // output requires grad iff any input does.
  template <typename Fn>
  void record(std::initializer_list<Var<Real>> inputs, Var<Real>& out, Fn&& back) {
    record_span(inputs.begin(), inputs.end(), out, std::forward<Fn>(back));
  }

  template <typename Fn>
  void record(const std::vector<Var<Real>>& inputs, Var<Real>& out, Fn&& back) {
    record_span(inputs.data(), inputs.data() + inputs.size(), out, std::forward<Fn>(back));
  }

  template <typename Fn>
  void record_span(const Var<Real>* first, const Var<Real>* last, Var<Real>& out, Fn&& back) {
    bool needs = false;
    for (const Var<Real>* in = first; in != last; ++in) {
      if (in->node().requires_grad) needs = true;
      touched_.insert(in->ptr().get());
    }
    out.node().requires_grad = needs;
    if (recording_ && needs) {
      steps_.push_back(std::function<void()>(std::forward<Fn>(back)));
      held_.push_back(out.ptr());
    }
  }

  // Reverse pass from a scalar loss. Gradient accumulation is additive, so
  // shared subexpressions sum their contributions.
  void backward(const Var<Real>& loss) {
    if (loss.numel() != 1) throw ShapeMismatch("backward needs a scalar loss, got " +
                                               shape_str(loss.shape()));
    if (!recording_) throw Error(ErrorKind::Config, "backward on a non-recording tape");
    loss.node().ensure_grad();
    loss.node().grad[0] = Real(1);
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) (*it)();
  }

  bool was_touched(const Var<Real>& v) const { return touched_.count(v.ptr().get()) > 0; }

  size_t num_steps() const { return steps_.size(); }

 private:
  bool recording_;
  std::vector<std::function<void()>> steps_;
  std::vector<std::shared_ptr<AdNode<Real>>> held_;  // keeps graph alive
  std::unordered_set<const void*> touched_;
};

// ---------------------------------------------------------------------------
// Ops. Every op validates shapes, computes forward, scans the output for
// non-finite values (when enabled), and records its backward closure.
// ---------------------------------------------------------------------------

namespace ad {

template <typename Real>
void require_2d(const Var<Real>& v, const char* op) {
  if (v.shape().size() != 2) throw ShapeMismatch(std::string(op) + ": expected 2-D, got " +
                                                 shape_str(v.shape()));
}

template <typename Real>
Var<Real> matmul(Tape<Real>& tape, Var<Real> a, Var<Real> b) {
  require_2d(a, "matmul");
  require_2d(b, "matmul");
  if (a.shape()[1] != b.shape()[0])
    throw ShapeMismatch("matmul: " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
  const int64_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  Var<Real> out = tape.make({m, n});
  ConstMatMap<Real> A(a.value().data(), m, k), B(b.value().data(), k, n);
  MatMap<Real>(out.value().data(), m, n).noalias() = A * B;
  check_finite(out.value(), "matmul");
  tape.record({a, b}, out, [a, b, out, m, k, n]() {
    ConstMatMap<Real> A(a.value().data(), m, k), B(b.value().data(), k, n);
    ConstMatMap<Real> dC(out.grad().data(), m, n);
    if (a.node().requires_grad) {
      a.node().ensure_grad();
      MatMap<Real>(a.node().grad.data(), m, k).noalias() += dC * B.transpose();
    }
    if (b.node().requires_grad) {
      b.node().ensure_grad();
      MatMap<Real>(b.node().grad.data(), k, n).noalias() += A.transpose() * dC;
    }
  });
  return out;
}

template <typename Real>
Var<Real> add(Tape<Real>& tape, Var<Real> a, Var<Real> b) {
  if (a.shape() != b.shape())
    throw ShapeMismatch("add: " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  Var<Real> out = tape.make(a.shape());
  const int64_t n = a.numel();
  for (int64_t i = 0; i < n; ++i) out.value()[i] = a.value()[i] + b.value()[i];
  check_finite(out.value(), "add");
  tape.record({a, b}, out, [a, b, out, n]() {
    if (a.node().requires_grad) {
      a.node().ensure_grad();
      for (int64_t i = 0; i < n; ++i) a.node().grad[i] += out.grad()[i];
    }
    if (b.node().requires_grad) {
      b.node().ensure_grad();
      for (int64_t i = 0; i < n; ++i) b.node().grad[i] += out.grad()[i];
    }
  });
  return out;
}

// A[m,n] + row vector b[n] broadcast over rows.
template <typename Real>
Var<Real> add_rowvec(Tape<Real>& tape, Var<Real> a, Var<Real> b) {
  require_2d(a, "add_rowvec");
  const int64_t m = a.shape()[0], n = a.shape()[1];
  if (b.numel() != n)
    throw ShapeMismatch("add_rowvec: " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  Var<Real> out = tape.make({m, n});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j)
      out.value()[i * n + j] = a.value()[i * n + j] + b.value()[j];
  check_finite(out.value(), "add_rowvec");
  tape.record({a, b}, out, [a, b, out, m, n]() {
    if (a.node().requires_grad) {
      a.node().ensure_grad();
      for (int64_t i = 0; i < m * n; ++i) a.node().grad[i] += out.grad()[i];
    }
    if (b.node().requires_grad) {
      b.node().ensure_grad();
      for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < n; ++j) b.node().grad[j] += out.grad()[i * n + j];
    }
  });
  return out;
}

template <typename Real>
Var<Real> concat_cols(Tape<Real>& tape, const std::vector<Var<Real>>& parts) {
  if (parts.empty()) throw ShapeMismatch("concat_cols: no inputs");
  const int64_t m = parts[0].shape()[0];
  int64_t total = 0;
  for (const auto& p : parts) {
    require_2d(p, "concat_cols");
    if (p.shape()[0] != m)
      throw ShapeMismatch("concat_cols: row mismatch " + shape_str(p.shape()));
    total += p.shape()[1];
  }
  Var<Real> out = tape.make({m, total});
  int64_t offset = 0;
  for (const auto& p : parts) {
    const int64_t n = p.shape()[1];
    for (int64_t i = 0; i < m; ++i)
      std::copy(p.value().data() + i * n, p.value().data() + (i + 1) * n,
                out.value().data() + i * total + offset);
    offset += n;
  }
  tape.record(parts, out, [parts, out, m, total]() {
    int64_t offset = 0;
    for (const auto& p : parts) {
      const int64_t n = p.shape()[1];
      if (p.node().requires_grad) {
        p.node().ensure_grad();
        for (int64_t i = 0; i < m; ++i)
          for (int64_t j = 0; j < n; ++j)
            p.node().grad[i * n + j] += out.grad()[i * total + offset + j];
      }
      offset += n;
    }
  });
  return out;
}

// Gathers rows of A at constant indices.
template <typename Real>
Var<Real> row_gather(Tape<Real>& tape, Var<Real> a, std::vector<int64_t> idx) {
  require_2d(a, "row_gather");
  const int64_t m = a.shape()[0], n = a.shape()[1];
  for (int64_t i : idx)
    if (i < 0 || i >= m)
      throw IndexOutOfRange("row_gather index " + std::to_string(i) + " for " +
                            shape_str(a.shape()));
  const int64_t r = static_cast<int64_t>(idx.size());
  Var<Real> out = tape.make({r, n});
  for (int64_t t = 0; t < r; ++t)
    std::copy(a.value().data() + idx[t] * n, a.value().data() + (idx[t] + 1) * n,
              out.value().data() + t * n);
  tape.record({a}, out, [a, out, idx = std::move(idx), n]() {
    if (!a.node().requires_grad) return;
    a.node().ensure_grad();
    for (size_t t = 0; t < idx.size(); ++t)
      for (int64_t j = 0; j < n; ++j)
        a.node().grad[idx[t] * n + j] += out.grad()[t * n + j];
  });
  return out;
}

// Scatter-adds the rows of V into a zero tensor with `rows` rows:
// out[idx[t]] += V[t]. Accumulation order follows t ascending.
template <typename Real>
Var<Real> scatter_add_rows(Tape<Real>& tape, Var<Real> v, const std::vector<int64_t>& idx,
                           int64_t rows) {
  require_2d(v, "scatter_add_rows");
  const int64_t r = v.shape()[0], n = v.shape()[1];
  if (static_cast<int64_t>(idx.size()) != r)
    throw ShapeMismatch("scatter_add_rows: " + std::to_string(idx.size()) + " indices for " +
                        shape_str(v.shape()));
  for (int64_t i : idx)
    if (i < 0 || i >= rows)
      throw IndexOutOfRange("scatter_add_rows index " + std::to_string(i) + " for rows=" +
                            std::to_string(rows));
  Var<Real> out = tape.make({rows, n});
  for (int64_t t = 0; t < r; ++t)
    for (int64_t j = 0; j < n; ++j) out.value()[idx[t] * n + j] += v.value()[t * n + j];
  check_finite(out.value(), "scatter_add_rows");
  tape.record({v}, out, [v, out, idx, n]() {
    if (!v.node().requires_grad) return;
    v.node().ensure_grad();
    for (size_t t = 0; t < idx.size(); ++t)
      for (int64_t j = 0; j < n; ++j)
        v.node().grad[t * n + j] += out.grad()[idx[t] * n + j];
  });
  return out;
}

// Row-wise selection between A and B by a constant mask (true -> A).
template <typename Real>
Var<Real> where_rows(Tape<Real>& tape, const std::vector<uint8_t>& mask, Var<Real> a, Var<Real> b) {
  if (a.shape() != b.shape())
    throw ShapeMismatch("where_rows: " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  require_2d(a, "where_rows");
  const int64_t m = a.shape()[0], n = a.shape()[1];
  if (static_cast<int64_t>(mask.size()) != m)
    throw ShapeMismatch("where_rows: mask size " + std::to_string(mask.size()));
  Var<Real> out = tape.make({m, n});
  for (int64_t i = 0; i < m; ++i) {
    const Real* src = (mask[i] ? a.value().data() : b.value().data()) + i * n;
    std::copy(src, src + n, out.value().data() + i * n);
  }
  tape.record({a, b}, out, [a, b, out, mask, m, n]() {
    for (int64_t i = 0; i < m; ++i) {
      Var<Real> pick = mask[i] ? a : b;
      if (!pick.node().requires_grad) continue;
      pick.node().ensure_grad();
      for (int64_t j = 0; j < n; ++j) pick.node().grad[i * n + j] += out.grad()[i * n + j];
    }
  });
  return out;
}

template <typename Real>
Var<Real> relu(Tape<Real>& tape, Var<Real> a) {
  Var<Real> out = tape.make(a.shape());
  const int64_t n = a.numel();
  for (int64_t i = 0; i < n; ++i) out.value()[i] = a.value()[i] > Real(0) ? a.value()[i] : Real(0);
  tape.record({a}, out, [a, out, n]() {
    if (!a.node().requires_grad) return;
    a.node().ensure_grad();
    // subgradient 0 at exactly 0
    for (int64_t i = 0; i < n; ++i)
      if (a.value()[i] > Real(0)) a.node().grad[i] += out.grad()[i];
  });
  return out;
}

template <typename Real>
Var<Real> gelu(Tape<Real>& tape, Var<Real> a) {
  Var<Real> out = tape.make(a.shape());
  const int64_t n = a.numel();
  const Real inv_sqrt2 = Real(0.7071067811865475);
  for (int64_t i = 0; i < n; ++i) {
    Real x = a.value()[i];
    out.value()[i] = Real(0.5) * x * (Real(1) + std::erf(x * inv_sqrt2));
  }
  check_finite(out.value(), "gelu");
  tape.record({a}, out, [a, out, n, inv_sqrt2]() {
    if (!a.node().requires_grad) return;
    a.node().ensure_grad();
    const Real inv_sqrt2pi = Real(0.3989422804014327);
    for (int64_t i = 0; i < n; ++i) {
      Real x = a.value()[i];
      Real cdf = Real(0.5) * (Real(1) + std::erf(x * inv_sqrt2));
      Real pdf = inv_sqrt2pi * std::exp(Real(-0.5) * x * x);
      a.node().grad[i] += out.grad()[i] * (cdf + x * pdf);
    }
  });
  return out;
}

// LayerNorm over the last dimension with affine gain/bias, epsilon 1e-5.
template <typename Real>
Var<Real> layer_norm(Tape<Real>& tape, Var<Real> a, Var<Real> gain, Var<Real> bias) {
  require_2d(a, "layer_norm");
  const int64_t m = a.shape()[0], n = a.shape()[1];
  if (gain.numel() != n || bias.numel() != n)
    throw ShapeMismatch("layer_norm: affine params must have " + std::to_string(n) + " entries");
  const Real eps = Real(1e-5);
  Var<Real> out = tape.make({m, n});
  // saved for backward
  auto inv_std = std::make_shared<std::vector<Real>>(m);
  auto x_hat = std::make_shared<std::vector<Real>>(m * n);
  for (int64_t i = 0; i < m; ++i) {
    const Real* x = a.value().data() + i * n;
    Real mean = 0;
    for (int64_t j = 0; j < n; ++j) mean += x[j];
    mean /= Real(n);
    Real var = 0;
    for (int64_t j = 0; j < n; ++j) var += (x[j] - mean) * (x[j] - mean);
    var /= Real(n);
    Real is = Real(1) / std::sqrt(var + eps);
    (*inv_std)[i] = is;
    for (int64_t j = 0; j < n; ++j) {
      Real xh = (x[j] - mean) * is;
      (*x_hat)[i * n + j] = xh;
      out.value()[i * n + j] = gain.value()[j] * xh + bias.value()[j];
    }
  }
  check_finite(out.value(), "layer_norm");
  tape.record({a, gain, bias}, out, [a, gain, bias, out, inv_std, x_hat, m, n]() {
    for (int64_t i = 0; i < m; ++i) {
      const Real* dy = out.grad().data() + i * n;
      const Real* xh = x_hat->data() + i * n;
      if (gain.node().requires_grad) {
        gain.node().ensure_grad();
        for (int64_t j = 0; j < n; ++j) gain.node().grad[j] += dy[j] * xh[j];
      }
      if (bias.node().requires_grad) {
        bias.node().ensure_grad();
        for (int64_t j = 0; j < n; ++j) bias.node().grad[j] += dy[j];
      }
      if (a.node().requires_grad) {
        a.node().ensure_grad();
        // dx = (g*dy - mean(g*dy) - x_hat * mean(g*dy*x_hat)) * inv_std
        Real mean_gdy = 0, mean_gdyxh = 0;
        for (int64_t j = 0; j < n; ++j) {
          Real gdy = gain.value()[j] * dy[j];
          mean_gdy += gdy;
          mean_gdyxh += gdy * xh[j];
        }
        mean_gdy /= Real(n);
        mean_gdyxh /= Real(n);
        Real is = (*inv_std)[i];
        for (int64_t j = 0; j < n; ++j) {
          Real gdy = gain.value()[j] * dy[j];
          a.node().grad[i * n + j] += (gdy - mean_gdy - xh[j] * mean_gdyxh) * is;
        }
      }
    }
  });
  return out;
}

template <typename Real>
Var<Real> softmax_rows(Tape<Real>& tape, Var<Real> a) {
  require_2d(a, "softmax");
  const int64_t m = a.shape()[0], n = a.shape()[1];
  Var<Real> out = tape.make({m, n});
  for (int64_t i = 0; i < m; ++i) {
    const Real* x = a.value().data() + i * n;
    Real* y = out.value().data() + i * n;
    Real mx = x[0];
    for (int64_t j = 1; j < n; ++j) mx = std::max(mx, x[j]);
    Real sum = 0;
    for (int64_t j = 0; j < n; ++j) {
      y[j] = std::exp(x[j] - mx);
      sum += y[j];
    }
    for (int64_t j = 0; j < n; ++j) y[j] /= sum;
  }
  check_finite(out.value(), "softmax");
  tape.record({a}, out, [a, out, m, n]() {
    if (!a.node().requires_grad) return;
    a.node().ensure_grad();
    for (int64_t i = 0; i < m; ++i) {
      const Real* y = out.value().data() + i * n;
      const Real* dy = out.grad().data() + i * n;
      Real dot = 0;
      for (int64_t j = 0; j < n; ++j) dot += y[j] * dy[j];
      for (int64_t j = 0; j < n; ++j) a.node().grad[i * n + j] += y[j] * (dy[j] - dot);
    }
  });
  return out;
}

// Per-row negative log-likelihood of the target class, computed with a
// stable log-sum-exp. Optional label smoothing mixes in the mean logit.
template <typename Real>
Var<Real> cross_entropy_rows(Tape<Real>& tape, Var<Real> logits,
                             const std::vector<int64_t>& targets, Real smoothing = Real(0)) {
  require_2d(logits, "cross_entropy");
  const int64_t m = logits.shape()[0], n = logits.shape()[1];
  if (static_cast<int64_t>(targets.size()) != m)
    throw ShapeMismatch("cross_entropy: " + std::to_string(targets.size()) + " targets for " +
                        shape_str(logits.shape()));
  for (int64_t t : targets)
    if (t < 0 || t >= n) throw IndexOutOfRange("cross_entropy target " + std::to_string(t));
  Var<Real> out = tape.make({m});
  for (int64_t i = 0; i < m; ++i) {
    const Real* x = logits.value().data() + i * n;
    Real mx = x[0];
    for (int64_t j = 1; j < n; ++j) mx = std::max(mx, x[j]);
    Real sum = 0, mean_logit = 0;
    for (int64_t j = 0; j < n; ++j) {
      sum += std::exp(x[j] - mx);
      mean_logit += x[j];
    }
    mean_logit /= Real(n);
    Real lse = mx + std::log(sum);
    out.value()[i] = lse - (Real(1) - smoothing) * x[targets[i]] - smoothing * mean_logit;
  }
  check_finite(out.value(), "cross_entropy");
  tape.record({logits}, out, [logits, out, targets, smoothing, m, n]() {
    if (!logits.node().requires_grad) return;
    logits.node().ensure_grad();
    for (int64_t i = 0; i < m; ++i) {
      const Real* x = logits.value().data() + i * n;
      Real* dx = logits.node().grad.data() + i * n;
      Real dy = out.grad()[i];
      Real mx = x[0];
      for (int64_t j = 1; j < n; ++j) mx = std::max(mx, x[j]);
      Real sum = 0;
      for (int64_t j = 0; j < n; ++j) sum += std::exp(x[j] - mx);
      for (int64_t j = 0; j < n; ++j) {
        Real p = std::exp(x[j] - mx) / sum;
        Real target_mass = (j == targets[i] ? (Real(1) - smoothing) : Real(0)) + smoothing / Real(n);
        dx[j] += dy * (p - target_mass);
      }
    }
  });
  return out;
}

template <typename Real>
Var<Real> mean_all(Tape<Real>& tape, Var<Real> a) {
  const int64_t n = a.numel();
  Var<Real> out = tape.make({1});
  Real sum = 0;
  for (int64_t i = 0; i < n; ++i) sum += a.value()[i];
  out.value()[0] = sum / Real(n);
  check_finite(out.value(), "mean");
  tape.record({a}, out, [a, out, n]() {
    if (!a.node().requires_grad) return;
    a.node().ensure_grad();
    Real g = out.grad()[0] / Real(n);
    for (int64_t i = 0; i < n; ++i) a.node().grad[i] += g;
  });
  return out;
}

template <typename Real>
Var<Real> scale_const(Tape<Real>& tape, Var<Real> a, Real c) {
  Var<Real> out = tape.make(a.shape());
  const int64_t n = a.numel();
  for (int64_t i = 0; i < n; ++i) out.value()[i] = a.value()[i] * c;
  check_finite(out.value(), "scale");
  tape.record({a}, out, [a, out, c, n]() {
    if (!a.node().requires_grad) return;
    a.node().ensure_grad();
    for (int64_t i = 0; i < n; ++i) a.node().grad[i] += out.grad()[i] * c;
  });
  return out;
}

// Scales row i of A by the constant s[i] (used for mean aggregation with
// per-row neighbor counts).
template <typename Real>
Var<Real> scale_rows_const(Tape<Real>& tape, Var<Real> a, const std::vector<Real>& s) {
  require_2d(a, "scale_rows");
  const int64_t m = a.shape()[0], n = a.shape()[1];
  if (static_cast<int64_t>(s.size()) != m)
    throw ShapeMismatch("scale_rows: " + std::to_string(s.size()) + " factors for " +
                        shape_str(a.shape()));
  Var<Real> out = tape.make({m, n});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) out.value()[i * n + j] = a.value()[i * n + j] * s[i];
  check_finite(out.value(), "scale_rows");
  tape.record({a}, out, [a, out, s, m, n]() {
    if (!a.node().requires_grad) return;
    a.node().ensure_grad();
    for (int64_t i = 0; i < m; ++i)
      for (int64_t j = 0; j < n; ++j) a.node().grad[i * n + j] += out.grad()[i * n + j] * s[i];
  });
  return out;
}

// Adds two scalars (loss accumulation across a batch).
template <typename Real>
Var<Real> add_scalars(Tape<Real>& tape, const std::vector<Var<Real>>& xs) {
  if (xs.empty()) throw ShapeMismatch("add_scalars: no inputs");
  Var<Real> out = tape.make({1});
  Real sum = 0;
  for (const auto& x : xs) {
    if (x.numel() != 1) throw ShapeMismatch("add_scalars: non-scalar input");
    sum += x.value()[0];
  }
  out.value()[0] = sum;
  check_finite(out.value(), "add_scalars");
  tape.record(xs, out, [xs, out]() {
    for (const auto& x : xs) {
      if (!x.node().requires_grad) continue;
      x.node().ensure_grad();
      x.node().grad[0] += out.grad()[0];
    }
  });
  return out;
}

}  // namespace ad

}  // namespace codonmpnn
