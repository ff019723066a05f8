#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "codonmpnn/featurize.hpp"
#include "codonmpnn/util.hpp"

using namespace codonmpnn;

namespace {

// Random protein-like backbone: CA positions drawn as a 3.8 A random walk,
// the other atoms jittered around the CA. Well-separated by construction.
ProteinRecord random_record(int L, Rng& rng) {
  ProteinRecord rec;
  rec.id = "synthetic";
  rec.coords.resize(static_cast<size_t>(L) * 4 * 3);
  std::array<double, 3> ca = {0, 0, 0};
  for (int i = 0; i < L; ++i) {
    std::array<double, 3> step;
    double norm = 0;
    for (int d = 0; d < 3; ++d) {
      step[d] = rng.normal();
      norm += step[d] * step[d];
    }
    norm = std::sqrt(norm);
    for (int d = 0; d < 3; ++d) ca[d] += 3.8 * step[d] / (norm > 1e-12 ? norm : 1.0);
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 3; ++d)
        rec.coords[(i * 4 + a) * 3 + d] = ca[d] + (a == 1 ? 0.0 : 0.7 * rng.normal());
  }
  std::vector<Codon> codons(L, Codon(0));
  rec.codons = CodonSeq(codons);
  return rec;
}

struct RigidTransform {
  std::array<std::array<double, 3>, 3> rot;
  std::array<double, 3> trans;
};

// Random rotation from a normalized quaternion.
RigidTransform random_transform(Rng& rng, double translation_scale = 20.0) {
  double q[4];
  double norm = 0;
  for (double& v : q) {
    v = rng.normal();
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : q) v /= norm;
  double w = q[0], x = q[1], y = q[2], z = q[3];
  RigidTransform t;
  t.rot = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  for (double& v : t.trans) v = translation_scale * (rng.uniform01() * 2 - 1);
  return t;
}

ProteinRecord apply_transform(const ProteinRecord& rec, const RigidTransform& t) {
  ProteinRecord out = rec;
  for (size_t p = 0; p < rec.coords.size(); p += 3) {
    double v[3];
    for (int r = 0; r < 3; ++r)
      v[r] = t.rot[r][0] * rec.coords[p] + t.rot[r][1] * rec.coords[p + 1] +
             t.rot[r][2] * rec.coords[p + 2] + t.trans[r];
    for (int r = 0; r < 3; ++r) out.coords[p + r] = v[r];
  }
  return out;
}

ProteinRecord record_from_cas(const std::vector<std::array<double, 3>>& cas) {
  ProteinRecord rec;
  rec.id = "cas";
  int L = static_cast<int>(cas.size());
  rec.coords.resize(static_cast<size_t>(L) * 4 * 3);
  for (int i = 0; i < L; ++i)
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 3; ++d) rec.coords[(i * 4 + a) * 3 + d] = cas[i][d] + 0.05 * a;
  std::vector<Codon> codons(L, Codon(0));
  rec.codons = CodonSeq(codons);
  return rec;
}

}  // namespace

TEST_CASE("collinear CAs order neighbors by distance") {
  ProteinRecord rec = record_from_cas({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
  auto nb = knn_graph(rec, 48);
  CHECK(nb[0] == std::vector<int32_t>({1, 2}));
  CHECK(nb[1] == std::vector<int32_t>({0, 2}));  // tie at distance 1: lower index first
  CHECK(nb[2] == std::vector<int32_t>({1, 0}));
}

TEST_CASE("L <= k+1 yields the complete graph minus self loops") {
  Rng rng(1);
  ProteinRecord rec = random_record(20, rng);
  auto nb = knn_graph(rec, 48);
  for (const auto& list : nb) CHECK(list.size() == 19);
}

TEST_CASE("square corners with k=2 pick side-adjacent neighbors") {
  ProteinRecord rec =
      record_from_cas({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  auto nb = knn_graph(rec, 2);
  // sides have length 1, diagonals sqrt(2); ties between the two sides break
  // by index
  CHECK(nb[0] == std::vector<int32_t>({1, 3}));
  CHECK(nb[1] == std::vector<int32_t>({0, 2}));
  CHECK(nb[2] == std::vector<int32_t>({1, 3}));
  CHECK(nb[3] == std::vector<int32_t>({0, 2}));
}

TEST_CASE("degenerate structures are reported") {
  ProteinRecord rec = record_from_cas({{0, 0, 0}, {0, 0, 0}, {1, 1, 1}});
  CHECK_THROWS_AS(knn_graph(rec, 48), DegenerateStructure);
  ProteinRecord tiny = record_from_cas({{0, 0, 0}});
  CHECK_THROWS_AS(knn_graph(tiny, 48), DegenerateStructure);
}

TEST_CASE("brute-force k-NN oracle matches for L <= 64") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    int L = 3 + static_cast<int>(rng.below(62));
    ProteinRecord rec = random_record(L, rng);
    int k = 1 + static_cast<int>(rng.below(48));
    auto got = knn_graph(rec, k);
    for (int i = 0; i < L; ++i) {
      // oracle: full sort of all pairs by (distance, index)
      std::vector<std::pair<double, int32_t>> all;
      for (int j = 0; j < L; ++j) {
        if (j == i) continue;
        double d = 0;
        for (int t = 0; t < 3; ++t) {
          double diff = rec.coord(i, 1, t) - rec.coord(j, 1, t);
          d += diff * diff;
        }
        all.emplace_back(std::sqrt(d), j);
      }
      std::sort(all.begin(), all.end());
      size_t keep = std::min<size_t>(k, all.size());
      REQUIRE(got[i].size() == keep);
      for (size_t t = 0; t < keep; ++t) CHECK(got[i][t] == all[t].second);
    }
  }
}

TEST_CASE("edge features: self edge and out-of-range rejected") {
  Rng rng(3);
  ProteinRecord rec = random_record(5, rng);
  CHECK_THROWS_AS(edge_features(rec, 1, 1), IndexOutOfRange);
  CHECK_THROWS_AS(edge_features(rec, 0, 9), IndexOutOfRange);
}

TEST_CASE("edge features: coincident atom blocks repeat the same RBF row") {
  // both residues have all four atoms collapsed onto a point, 5 A apart
  ProteinRecord rec;
  rec.id = "pointlike";
  rec.coords.assign(2 * 4 * 3, 0.0);
  for (int a = 0; a < 4; ++a) rec.coords[(1 * 4 + a) * 3 + 0] = 5.0;
  std::vector<Codon> codons(2, Codon(0));
  rec.codons = CodonSeq(codons);
  auto f = edge_features(rec, 0, 1);
  for (int pair = 1; pair < kAtomPairs; ++pair)
    for (int t = 0; t < kRbfCount; ++t)
      CHECK(f[pair * kRbfCount + t] == f[t]);
}

TEST_CASE("translation leaves features exactly invariant in exact arithmetic") {
  Rng rng(11);
  ProteinRecord rec = random_record(6, rng);
  RigidTransform shift;
  shift.rot = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  shift.trans = {5, 5, 5};
  ProteinRecord moved = apply_transform(rec, shift);
  auto f1 = edge_features(rec, 0, 3);
  auto f2 = edge_features(moved, 0, 3);
  for (size_t i = 0; i < f1.size(); ++i)
    CHECK(std::abs(f1[i] - f2[i]) <= 1e-6f);
}

TEST_CASE("relative index one-hot clamps at +-32") {
  Rng rng(13);
  ProteinRecord rec = random_record(70, rng);
  auto f_near = edge_features(rec, 10, 12);
  CHECK(f_near[kAtomPairs * kRbfCount + (2 + kRelIndexClamp)] == 1.0f);
  auto f_far = edge_features(rec, 0, 69);  // j - i = 69 -> clamped to +32
  CHECK(f_far[kAtomPairs * kRbfCount + (kRelIndexClamp + kRelIndexClamp)] == 1.0f);
  auto f_back = edge_features(rec, 69, 0);  // -69 -> clamped to -32
  CHECK(f_back[kAtomPairs * kRbfCount + 0] == 1.0f);
}

TEST_CASE("build_graph shapes") {
  Rng rng(17);
  ProteinRecord rec = random_record(2, rng);
  ResidueGraph g = build_graph(rec);
  CHECK(g.length == 2);
  CHECK(g.num_edges() == 2);
  CHECK(g.neighbors[0] == std::vector<int32_t>{1});

  ProteinRecord rec60 = random_record(60, rng);
  ResidueGraph g60 = build_graph(rec60);
  for (const auto& nb : g60.neighbors) CHECK(nb.size() == 48);
  CHECK(g60.num_edges() == 60 * 48);
  CHECK(g60.edge_features.size() == static_cast<size_t>(60 * 48 * kEdgeFeatureDim));
}

TEST_CASE("Euclidean invariance of the full graph") {
  Rng rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    ProteinRecord rec = random_record(30 + static_cast<int>(rng.below(30)), rng);
    ResidueGraph g = build_graph(rec);
    for (int t = 0; t < 3; ++t) {
      ProteinRecord moved = apply_transform(rec, random_transform(rng));
      ResidueGraph gm = build_graph(moved);
      REQUIRE(gm.neighbors == g.neighbors);
      float max_delta = 0;
      for (size_t i = 0; i < g.edge_features.size(); ++i)
        max_delta = std::max(max_delta, std::abs(g.edge_features[i] - gm.edge_features[i]));
      CHECK(max_delta <= 1e-4f);
    }
  }
}

TEST_CASE("feature dump round trip") {
  Rng rng(23);
  ProteinRecord rec = random_record(12, rng);
  ResidueGraph g = build_graph(rec);
  std::ostringstream out(std::ios::binary);
  write_feature_dump(out, g);
  std::istringstream in(out.str(), std::ios::binary);
  ResidueGraph back = read_feature_dump(in);
  CHECK(back.length == g.length);
  CHECK(back.knn == g.knn);
  CHECK(back.neighbors == g.neighbors);
  CHECK(back.edge_features == g.edge_features);
  CHECK(back.edge_dst == g.edge_dst);
  CHECK(back.edge_src == g.edge_src);

  std::istringstream bad("XXXX????", std::ios::binary);
  CHECK_THROWS_AS(read_feature_dump(bad), ParseError);
}
