#pragma once

// Portable binary checkpoint. Layout, little-endian throughout:
//   magic "CMPN", version u16,
//   config JSON blob (u32 length + bytes),
//   tensor count u64,
//   per tensor: name_len u32, name bytes, dtype u8 (1=f32, 2=f64),
//               ndim u32, dims u64 each, raw data.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "codonmpnn/errors.hpp"
#include "codonmpnn/tensor.hpp"

namespace codonmpnn {

inline constexpr uint16_t kCheckpointVersion = 1;

enum class Dtype : uint8_t { F32 = 1, F64 = 2 };

template <typename Real>
constexpr Dtype dtype_of() {
  return sizeof(Real) == 4 ? Dtype::F32 : Dtype::F64;
}

struct NamedTensorF64 {
  std::string name;
  Dtype stored_dtype = Dtype::F32;
  Shape shape;
  std::vector<double> data;  // widened on load; narrowed on save per dtype
};

struct CheckpointData {
  std::string config_json;
  std::vector<NamedTensorF64> tensors;
};

namespace detail {

template <typename T>
void ckpt_write(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ckpt_read(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw CheckpointError("unexpected end of checkpoint");
  return v;
}

}  // namespace detail

inline void save_checkpoint(std::ostream& out, const CheckpointData& ckpt) {
  out.write("CMPN", 4);
  detail::ckpt_write<uint16_t>(out, kCheckpointVersion);
  detail::ckpt_write<uint32_t>(out, static_cast<uint32_t>(ckpt.config_json.size()));
  out.write(ckpt.config_json.data(), static_cast<std::streamsize>(ckpt.config_json.size()));
  detail::ckpt_write<uint64_t>(out, ckpt.tensors.size());
  for (const auto& t : ckpt.tensors) {
    detail::ckpt_write<uint32_t>(out, static_cast<uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    detail::ckpt_write<uint8_t>(out, static_cast<uint8_t>(t.stored_dtype));
    detail::ckpt_write<uint32_t>(out, static_cast<uint32_t>(t.shape.size()));
    for (int64_t d : t.shape) detail::ckpt_write<uint64_t>(out, static_cast<uint64_t>(d));
    if (t.stored_dtype == Dtype::F32) {
      std::vector<float> narrow(t.data.begin(), t.data.end());
      out.write(reinterpret_cast<const char*>(narrow.data()),
                static_cast<std::streamsize>(narrow.size() * sizeof(float)));
    } else {
      out.write(reinterpret_cast<const char*>(t.data.data()),
                static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    }
  }
  if (!out) throw CheckpointError("write failed");
}

inline CheckpointData load_checkpoint(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CMPN", 4) != 0) throw CheckpointError("bad magic");
  uint16_t version = detail::ckpt_read<uint16_t>(in);
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported version " + std::to_string(version));
  CheckpointData ckpt;
  uint32_t cfg_len = detail::ckpt_read<uint32_t>(in);
  ckpt.config_json.resize(cfg_len);
  in.read(ckpt.config_json.data(), cfg_len);
  if (!in) throw CheckpointError("truncated config blob");
  uint64_t count = detail::ckpt_read<uint64_t>(in);
  ckpt.tensors.resize(count);
  for (auto& t : ckpt.tensors) {
    uint32_t name_len = detail::ckpt_read<uint32_t>(in);
    t.name.resize(name_len);
    in.read(t.name.data(), name_len);
    uint8_t dtype = detail::ckpt_read<uint8_t>(in);
    if (dtype != 1 && dtype != 2) throw CheckpointError("bad dtype byte for " + t.name);
    t.stored_dtype = static_cast<Dtype>(dtype);
    uint32_t ndim = detail::ckpt_read<uint32_t>(in);
    t.shape.resize(ndim);
    int64_t numel = 1;
    for (auto& d : t.shape) {
      d = static_cast<int64_t>(detail::ckpt_read<uint64_t>(in));
      numel *= d;
    }
    t.data.resize(numel);
    if (t.stored_dtype == Dtype::F32) {
      std::vector<float> narrow(numel);
      in.read(reinterpret_cast<char*>(narrow.data()),
              static_cast<std::streamsize>(numel * sizeof(float)));
      for (int64_t i = 0; i < numel; ++i) t.data[i] = narrow[i];
    } else {
      in.read(reinterpret_cast<char*>(t.data.data()),
              static_cast<std::streamsize>(numel * sizeof(double)));
    }
    if (!in) throw CheckpointError("truncated tensor data for " + t.name);
  }
  return ckpt;
}

inline void save_checkpoint_file(const std::string& path, const CheckpointData& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open " + path + " for writing");
  save_checkpoint(out, ckpt);
}

inline CheckpointData load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path);
  return load_checkpoint(in);
}

}  // namespace codonmpnn
