#pragma once

// Residue graph construction: 48-nearest-neighbor connectivity by CA
// distance and rigid-motion-invariant edge features. The graph is the
// model's only view of the structure, so everything downstream inherits
// Euclidean invariance from the distances computed here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

#include "codonmpnn/corpus.hpp"
#include "codonmpnn/errors.hpp"

namespace codonmpnn {

inline constexpr int kDefaultKnn = 48;
inline constexpr int kRbfCount = 16;
inline constexpr double kRbfMin = 2.0;   // Angstrom
inline constexpr double kRbfMax = 22.0;  // Angstrom
inline constexpr int kRelIndexClamp = 32;
inline constexpr int kRelIndexSize = 2 * kRelIndexClamp + 1;  // 65
inline constexpr int kAtomPairs = kBackboneAtoms * kBackboneAtoms;  // 16
// Per-edge feature width: 16 atom-pair distances x 16 RBFs, then the one-hot
// relative-index encoding.
inline constexpr int kEdgeFeatureDim = kAtomPairs * kRbfCount + kRelIndexSize;  // 321

struct ResidueGraph {
  int32_t length = 0;
  int32_t knn = kDefaultKnn;
  // neighbors[i]: min(knn, L-1) indices sorted by (CA distance, index).
  std::vector<std::vector<int32_t>> neighbors;
  // Flattened directed edges in (receiver-major, neighbor-rank) order.
  std::vector<int32_t> edge_dst;  // receiver i
  std::vector<int32_t> edge_src;  // sender j
  std::vector<float> edge_features;  // [num_edges * kEdgeFeatureDim]

  int64_t num_edges() const { return static_cast<int64_t>(edge_dst.size()); }
};

namespace detail {

inline double ca_distance(const ProteinRecord& rec, size_t i, size_t j) {
  double dx = rec.coord(i, 1, 0) - rec.coord(j, 1, 0);
  double dy = rec.coord(i, 1, 1) - rec.coord(j, 1, 1);
  double dz = rec.coord(i, 1, 2) - rec.coord(j, 1, 2);
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double atom_distance(const ProteinRecord& rec, size_t i, int atom_a, size_t j, int atom_b) {
  double dx = rec.coord(i, atom_a, 0) - rec.coord(j, atom_b, 0);
  double dy = rec.coord(i, atom_a, 1) - rec.coord(j, atom_b, 1);
  double dz = rec.coord(i, atom_a, 2) - rec.coord(j, atom_b, 2);
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace detail

// k-NN neighbor lists by CA-CA distance, ties broken by lower index.
inline std::vector<std::vector<int32_t>> knn_graph(const ProteinRecord& rec, int knn) {
  const size_t L = rec.length();
  if (L < 2) throw DegenerateStructure("need at least 2 residues, got " + std::to_string(L));
  std::vector<std::vector<int32_t>> neighbors(L);
  std::vector<std::pair<double, int32_t>> dist(L);
  for (size_t i = 0; i < L; ++i) {
    dist.clear();
    for (size_t j = 0; j < L; ++j) {
      if (j == i) continue;
      double d = detail::ca_distance(rec, i, j);
      if (d == 0.0)
        throw DegenerateStructure("residues " + std::to_string(i) + " and " + std::to_string(j) +
                                  " of record " + rec.id + " have identical CA coordinates");
      dist.emplace_back(d, static_cast<int32_t>(j));
    }
    size_t keep = std::min<size_t>(static_cast<size_t>(knn), L - 1);
    std::partial_sort(dist.begin(), dist.begin() + keep, dist.end());
    neighbors[i].reserve(keep);
    for (size_t t = 0; t < keep; ++t) neighbors[i].push_back(dist[t].second);
  }
  return neighbors;
}

// Feature vector for the directed edge i <- j: the 16 inter-residue backbone
// atom distances, each expanded in 16 Gaussians with centers on [2, 22] A and
// width equal to the center spacing, followed by one-hot clamp(j-i, +-32).
inline void edge_features_into(const ProteinRecord& rec, size_t i, size_t j, float* out) {
  const size_t L = rec.length();
  if (i >= L || j >= L)
    throw IndexOutOfRange("edge (" + std::to_string(i) + "," + std::to_string(j) + ") for L=" +
                          std::to_string(L));
  if (i == j) throw IndexOutOfRange("self edge at residue " + std::to_string(i));
  constexpr double spacing = (kRbfMax - kRbfMin) / (kRbfCount - 1);
  int pos = 0;
  for (int a = 0; a < kBackboneAtoms; ++a) {
    for (int b = 0; b < kBackboneAtoms; ++b) {
      double d = detail::atom_distance(rec, i, a, j, b);
      for (int t = 0; t < kRbfCount; ++t) {
        double center = kRbfMin + spacing * t;
        double z = (d - center) / spacing;
        out[pos++] = static_cast<float>(std::exp(-z * z));
      }
    }
  }
  int rel = static_cast<int>(j) - static_cast<int>(i);
  rel = std::clamp(rel, -kRelIndexClamp, kRelIndexClamp);
  for (int t = 0; t < kRelIndexSize; ++t) out[pos++] = 0.0f;
  out[kAtomPairs * kRbfCount + rel + kRelIndexClamp] = 1.0f;
}

inline std::vector<float> edge_features(const ProteinRecord& rec, size_t i, size_t j) {
  std::vector<float> out(kEdgeFeatureDim);
  edge_features_into(rec, i, j, out.data());
  return out;
}

inline ResidueGraph build_graph(const ProteinRecord& rec, int knn = kDefaultKnn) {
  ResidueGraph g;
  g.length = static_cast<int32_t>(rec.length());
  g.knn = knn;
  g.neighbors = knn_graph(rec, knn);
  int64_t edges = 0;
  for (const auto& nb : g.neighbors) edges += static_cast<int64_t>(nb.size());
  g.edge_dst.reserve(edges);
  g.edge_src.reserve(edges);
  g.edge_features.resize(edges * kEdgeFeatureDim);
  int64_t e = 0;
  for (size_t i = 0; i < g.neighbors.size(); ++i) {
    for (int32_t j : g.neighbors[i]) {
      g.edge_dst.push_back(static_cast<int32_t>(i));
      g.edge_src.push_back(j);
      edge_features_into(rec, i, static_cast<size_t>(j), g.edge_features.data() + e * kEdgeFeatureDim);
      ++e;
    }
  }
  return g;
}

// --------------------------------------------------------------------------
// Debug feature dump. Binary blob: magic "CMPF", version u16, L u32, knn u32,
// then per residue (deg u32, deg x neighbor u32), then all edge features as
// f32. Little-endian throughout.
// --------------------------------------------------------------------------

inline constexpr uint16_t kFeatureDumpVersion = 1;

namespace detail {

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("unexpected end of stream");
  return v;
}

}  // namespace detail

inline void write_feature_dump(std::ostream& out, const ResidueGraph& g) {
  out.write("CMPF", 4);
  detail::write_le<uint16_t>(out, kFeatureDumpVersion);
  detail::write_le<uint32_t>(out, static_cast<uint32_t>(g.length));
  detail::write_le<uint32_t>(out, static_cast<uint32_t>(g.knn));
  for (const auto& nb : g.neighbors) {
    detail::write_le<uint32_t>(out, static_cast<uint32_t>(nb.size()));
    for (int32_t j : nb) detail::write_le<uint32_t>(out, static_cast<uint32_t>(j));
  }
  out.write(reinterpret_cast<const char*>(g.edge_features.data()),
            static_cast<std::streamsize>(g.edge_features.size() * sizeof(float)));
}

inline ResidueGraph read_feature_dump(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CMPF", 4) != 0) throw ParseError("bad feature dump magic");
  uint16_t version = detail::read_le<uint16_t>(in);
  if (version != kFeatureDumpVersion)
    throw ParseError("unsupported feature dump version " + std::to_string(version));
  ResidueGraph g;
  g.length = static_cast<int32_t>(detail::read_le<uint32_t>(in));
  g.knn = static_cast<int32_t>(detail::read_le<uint32_t>(in));
  g.neighbors.resize(g.length);
  int64_t edges = 0;
  for (auto& nb : g.neighbors) {
    uint32_t deg = detail::read_le<uint32_t>(in);
    nb.resize(deg);
    for (auto& j : nb) j = static_cast<int32_t>(detail::read_le<uint32_t>(in));
    edges += deg;
  }
  for (size_t i = 0; i < g.neighbors.size(); ++i)
    for (int32_t j : g.neighbors[i]) {
      g.edge_dst.push_back(static_cast<int32_t>(i));
      g.edge_src.push_back(j);
    }
  g.edge_features.resize(edges * kEdgeFeatureDim);
  in.read(reinterpret_cast<char*>(g.edge_features.data()),
          static_cast<std::streamsize>(g.edge_features.size() * sizeof(float)));
  if (!in) throw ParseError("truncated feature dump");
  return g;
}

}  // namespace codonmpnn
