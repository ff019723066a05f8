#pragma once

// Named parameter store with per-parameter adaptive-moment optimizer state.
// Parameters are tape leaves that persist across steps; adam_step consumes
// the gradients accumulated by backward() and clears them.

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "codonmpnn/autodiff.hpp"
#include "codonmpnn/tensor.hpp"
#include "codonmpnn/util.hpp"

namespace codonmpnn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename Real>
class ParamStore {
 public:
  struct Entry {
    std::string name;
    Var<Real> param;
    std::vector<Real> m;  // first moment
    std::vector<Real> v;  // second moment
  };

  Var<Real> add(const std::string& name, Tensor<Real> init) {
    if (index_.count(name)) throw Error(ErrorKind::Config, "duplicate parameter " + name);
    auto node = std::make_shared<AdNode<Real>>();
    node->shape = std::move(init.shape);
    node->value = std::move(init.data);
    node->requires_grad = true;
    Entry e;
    e.name = name;
    e.param = Var<Real>(std::move(node));
    e.m.assign(e.param.numel(), Real(0));
    e.v.assign(e.param.numel(), Real(0));
    index_[name] = entries_.size();
    entries_.push_back(std::move(e));
    return entries_.back().param;
  }

  bool contains(const std::string& name) const { return index_.count(name) > 0; }

  Var<Real> get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(ErrorKind::Config, "unknown parameter " + name);
    return entries_[it->second].param;
  }

  // Insertion order; deterministic for init, serialization, and updates.
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }

  int64_t step_count() const { return step_count_; }
  void set_step_count(int64_t s) { step_count_ = s; }

  int64_t total_params() const {
    int64_t n = 0;
    for (const auto& e : entries_) n += e.param.numel();
    return n;
  }

  void zero_grads() {
    for (auto& e : entries_) e.param.node().zero_grad();
  }

  // Bias-corrected adaptive-moment update. Parameters with no accumulated
  // gradient this step still advance their moments (grad treated as zero).
  void adam_step(const AdamConfig& cfg) {
    ++step_count_;
    const Real b1 = Real(cfg.beta1), b2 = Real(cfg.beta2);
    const Real corr1 = Real(1) - std::pow(b1, Real(step_count_));
    const Real corr2 = Real(1) - std::pow(b2, Real(step_count_));
    const Real lr = Real(cfg.lr), eps = Real(cfg.eps);
    for (auto& e : entries_) {
      auto& node = e.param.node();
      node.ensure_grad();
      const int64_t n = e.param.numel();
      for (int64_t i = 0; i < n; ++i) {
        Real g = node.grad[i];
        e.m[i] = b1 * e.m[i] + (Real(1) - b1) * g;
        e.v[i] = b2 * e.v[i] + (Real(1) - b2) * g * g;
        Real m_hat = e.m[i] / corr1;
        Real v_hat = e.v[i] / corr2;
        node.value[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
      }
      check_finite(node.value, "adam_step");
      node.zero_grad();
    }
  }

  // Names of parameters that never appeared as an op input on the tape.
  // They received zero gradient; reported, not a fault.
  std::vector<std::string> disconnected(const Tape<Real>& tape) const {
    std::vector<std::string> names;
    for (const auto& e : entries_)
      if (!tape.was_touched(e.param)) names.push_back(e.name);
    return names;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> index_;
  int64_t step_count_ = 0;
};

// ---------------------------------------------------------------------------
// Initializers
// ---------------------------------------------------------------------------

template <typename Real>
Tensor<Real> zeros(Shape shape) {
  return Tensor<Real>(std::move(shape));
}

template <typename Real>
Tensor<Real> ones(Shape shape) {
  Tensor<Real> t(std::move(shape));
  std::fill(t.data.begin(), t.data.end(), Real(1));
  return t;
}

// Glorot-uniform for a [fan_in, fan_out] weight.
template <typename Real>
Tensor<Real> glorot_uniform(int64_t fan_in, int64_t fan_out, Rng& rng) {
  Tensor<Real> t({fan_in, fan_out});
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : t.data) v = static_cast<Real>((rng.uniform01() * 2.0 - 1.0) * limit);
  return t;
}

template <typename Real>
Tensor<Real> normal_init(Shape shape, double stddev, Rng& rng) {
  Tensor<Real> t(std::move(shape));
  for (auto& v : t.data) v = static_cast<Real>(rng.normal() * stddev);
  return t;
}

}  // namespace codonmpnn
