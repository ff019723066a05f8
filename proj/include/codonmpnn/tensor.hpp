#pragma once

// Minimal dense tensor value type. 1-D or 2-D row-major, templated on the
// scalar so the whole stack can run in f32 (training) or f64 (checks).

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "codonmpnn/errors.hpp"

namespace codonmpnn {

using Shape = std::vector<int64_t>;

inline int64_t shape_numel(const Shape& shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

inline std::string shape_str(const Shape& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
  return s + "]";
}

// Global toggle for the after-every-op finite scan. On by default; heavy
// inner loops may disable it once their inputs are validated.
inline std::atomic<bool>& finite_checks_enabled() {
  static std::atomic<bool> enabled{true};
  return enabled;
}

template <typename Real>
struct Tensor {
  Shape shape;
  std::vector<Real> data;

  Tensor() = default;
  explicit Tensor(Shape s) : shape(std::move(s)), data(shape_numel(shape), Real(0)) {}
  Tensor(Shape s, std::vector<Real> d) : shape(std::move(s)), data(std::move(d)) {
    if (static_cast<int64_t>(data.size()) != shape_numel(shape))
      throw ShapeMismatch("tensor data size " + std::to_string(data.size()) +
                          " does not match shape " + shape_str(shape));
  }

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int64_t rows() const { return shape.size() == 2 ? shape[0] : 1; }
  int64_t cols() const { return shape.empty() ? 1 : shape.back(); }

  Real& at(int64_t r, int64_t c) { return data[r * cols() + c]; }
  Real at(int64_t r, int64_t c) const { return data[r * cols() + c]; }
};

template <typename Real>
void check_finite(const std::vector<Real>& data, const char* op_name) {
  if (!finite_checks_enabled().load(std::memory_order_relaxed)) return;
  for (Real v : data) {
    if (!std::isfinite(v))
      throw NonFiniteValue(std::string(op_name) + " produced a non-finite value");
  }
}

}  // namespace codonmpnn
