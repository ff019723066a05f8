#pragma once

#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "codonmpnn/errors.hpp"

namespace codonmpnn {

// ---------------------------------------------------------------------------
// Logging. Plain stderr, level-filtered. stdout is reserved for data.
// ---------------------------------------------------------------------------

enum class LogLevel : int { Debug = 0, Info = 1, Warn = 2, Error = 3 };

inline std::atomic<int>& log_level_raw() {
  static std::atomic<int> level{static_cast<int>(LogLevel::Info)};
  return level;
}

inline void set_log_level(LogLevel level) { log_level_raw() = static_cast<int>(level); }

inline void log_msg(LogLevel level, const char* fmt, ...) {
  if (static_cast<int>(level) < log_level_raw().load()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::fprintf(stderr, "[%s] ", names[static_cast<int>(level)]);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

#define CODONMPNN_LOG_DEBUG(...) ::codonmpnn::log_msg(::codonmpnn::LogLevel::Debug, __VA_ARGS__)
#define CODONMPNN_LOG_INFO(...) ::codonmpnn::log_msg(::codonmpnn::LogLevel::Info, __VA_ARGS__)
#define CODONMPNN_LOG_WARN(...) ::codonmpnn::log_msg(::codonmpnn::LogLevel::Warn, __VA_ARGS__)
#define CODONMPNN_LOG_ERROR(...) ::codonmpnn::log_msg(::codonmpnn::LogLevel::Error, __VA_ARGS__)

// ---------------------------------------------------------------------------
// Seeded RNG. Thin wrapper over mt19937_64 with self-contained draw routines
// so results do not depend on the standard library's distribution internals.
// State serializes to text for checkpoint resume.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Unbiased draw from [0, n) by rejection.
  uint64_t below(uint64_t n) {
    if (n == 0) throw Error(ErrorKind::Config, "Rng::below(0)");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller (two engine draws per call).
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Fisher-Yates permutation of {0..n-1}.
  std::vector<int32_t> permutation(int32_t n) {
    std::vector<int32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int32_t i = n - 1; i > 0; --i) {
      int32_t j = static_cast<int32_t>(below(static_cast<uint64_t>(i) + 1));
      std::swap(perm[i], perm[j]);
    }
    return perm;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  std::string serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void deserialize(const std::string& state) {
    std::istringstream is(state);
    is >> engine_;
    if (is.fail()) throw Error(ErrorKind::Parse, "bad RNG state string");
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// FNV-1a 64-bit hash, used for config provenance and corpus hashes.
// ---------------------------------------------------------------------------

inline uint64_t fnv1a64(const void* data, size_t n, uint64_t seed = 0xcbf29ce484222325ull) {
  const auto* bytes = static_cast<const uint8_t*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

inline std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// parallel_for: runs fn(i) for i in [0, n) on up to `threads` workers.
// Static block partition, so any per-index output is placed deterministically;
// callers must not reduce across indices inside fn.
// ---------------------------------------------------------------------------

inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  size_t workers = std::min<size_t>(static_cast<size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<size_t> fail_count{0};
  std::string first_error;
  std::mutex err_mutex;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      size_t lo = n * w / workers;
      size_t hi = n * (w + 1) / workers;
      for (size_t i = lo; i < hi; ++i) {
        try {
          fn(i);
        } catch (const std::exception& e) {
          if (fail_count.fetch_add(1) == 0) {
            std::lock_guard<std::mutex> lock(err_mutex);
            first_error = e.what();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (fail_count.load() > 0) throw Error(ErrorKind::Data, "parallel_for: " + first_error);
}

}  // namespace codonmpnn
