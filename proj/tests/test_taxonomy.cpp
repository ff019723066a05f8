#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "codonmpnn/taxonomy.hpp"

using namespace codonmpnn;

namespace {

std::string dmp_line(TaxId id, TaxId parent, const std::string& rank) {
  return std::to_string(id) + "\t|\t" + std::to_string(parent) + "\t|\t" + rank + "\t|\n";
}

TaxonomyTree tree_from_lines(const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) text += l;
  std::istringstream in(text);
  return parse_taxdump(in);
}

// Independent oracle: a literal recursive transcription of the balanced
// tree partitioning, kept deliberately naive. Children in ascending id.
struct OracleTree {
  std::map<TaxId, std::vector<TaxId>> children;
  std::map<TaxId, int64_t> subtree;
  TaxId root = 0;

  int64_t fill_subtree(TaxId node) {
    int64_t size = 1;
    for (TaxId c : children[node]) size += fill_subtree(c);
    subtree[node] = size;
    return size;
  }
};

void oracle_assign(OracleTree& t, TaxId node, int64_t cluster_id,
                   std::vector<int64_t>& cluster_sizes, int64_t max_cluster_size,
                   std::map<TaxId, int64_t>& out) {
  out[node] = cluster_id;
  cluster_sizes[cluster_id] += 1;
  for (TaxId child : t.children[node]) {
    bool is_leaf = t.children[child].empty();
    if (is_leaf || cluster_sizes[cluster_id] + t.subtree[child] <= max_cluster_size) {
      oracle_assign(t, child, cluster_id, cluster_sizes, max_cluster_size, out);
    } else {
      int64_t next = 0;
      for (size_t i = 1; i < cluster_sizes.size(); ++i)
        if (cluster_sizes[i] < cluster_sizes[next]) next = static_cast<int64_t>(i);
      oracle_assign(t, child, next, cluster_sizes, max_cluster_size, out);
    }
  }
}

std::map<TaxId, int64_t> oracle_partition(const std::vector<std::pair<TaxId, TaxId>>& edges,
                                          TaxId root, int64_t k) {
  OracleTree t;
  t.root = root;
  t.children[root];
  for (auto [id, parent] : edges)
    if (id != root) t.children[parent].push_back(id);
  for (auto& [id, ch] : t.children) std::sort(ch.begin(), ch.end());
  t.fill_subtree(root);
  int64_t n = t.subtree[root];
  int64_t max_cluster_size = (n + k - 1) / k;
  std::vector<int64_t> cluster_sizes(k, 0);
  std::map<TaxId, int64_t> out;
  oracle_assign(t, root, 0, cluster_sizes, max_cluster_size, out);
  return out;
}

}  // namespace

TEST_CASE("parse minimal two-node file") {
  TaxonomyTree tree = tree_from_lines({dmp_line(1, 1, "no rank"), dmp_line(2, 1, "superkingdom")});
  CHECK(tree.size() == 2);
  CHECK(tree.root_id() == 1);
  CHECK(tree.node(1).subtree_size == 2);
  CHECK(tree.node(2).subtree_size == 1);
  CHECK(tree.node(1).children == std::vector<TaxId>{2});
  CHECK(tree.node(2).rank == "superkingdom");
}

TEST_CASE("parse computes subtree sizes on a 4-node tree") {
  TaxonomyTree tree = tree_from_lines(
      {dmp_line(1, 1, "no rank"), dmp_line(2, 1, "x"), dmp_line(3, 2, "y"), dmp_line(4, 2, "z")});
  CHECK(tree.node(2).subtree_size == 3);
  CHECK(tree.node(1).subtree_size == 4);
  CHECK(tree.node(2).children == std::vector<TaxId>({3, 4}));
}

TEST_CASE("parse errors") {
  SECTION("orphan parent") {
    std::istringstream in(dmp_line(1, 1, "no rank") + dmp_line(5, 9, "species"));
    CHECK_THROWS_AS(parse_taxdump(in), OrphanNode);
  }
  SECTION("malformed line carries the line number") {
    std::istringstream in(dmp_line(1, 1, "no rank") + "garbage\n");
    try {
      parse_taxdump(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("cycle") {
    // 2 and 3 parent each other, disconnected from the root
    std::istringstream in(dmp_line(1, 1, "no rank") + dmp_line(2, 3, "a") + dmp_line(3, 2, "b"));
    CHECK_THROWS_AS(parse_taxdump(in), CycleDetected);
  }
  SECTION("duplicate id") {
    std::istringstream in(dmp_line(1, 1, "no rank") + dmp_line(2, 1, "a") + dmp_line(2, 1, "b"));
    CHECK_THROWS_AS(parse_taxdump(in), ParseError);
  }
  SECTION("no root") {
    std::istringstream in(dmp_line(2, 3, "a") + dmp_line(3, 2, "b"));
    CHECK_THROWS_AS(parse_taxdump(in), ParseError);
  }
  SECTION("empty file") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_taxdump(in), ParseError);
  }
}

TEST_CASE("partition: star tree stays in cluster 0 via the leaf exemption") {
  // root 1 with leaves 2..6; k=2 => max = 3, but leaves bypass the check
  std::vector<std::string> lines = {dmp_line(1, 1, "no rank")};
  for (TaxId i = 2; i <= 6; ++i) lines.push_back(dmp_line(i, 1, "leaf"));
  TaxonomyTree tree = tree_from_lines(lines);
  ClusterAssignment a = partition(tree, 2);
  for (TaxId i = 1; i <= 6; ++i) CHECK(a.labels.at(i) == 0);
  PartitionStats stats = partition_stats(a);
  CHECK(stats.sizes == std::vector<int64_t>({6, 0}));
}

TEST_CASE("partition: 7-node hand trace") {
  // root 1; children 2 (A), 5 (B); A has leaves 3,4; B has leaves 6,7
  TaxonomyTree tree = tree_from_lines({dmp_line(1, 1, "r"), dmp_line(2, 1, "a"),
                                       dmp_line(3, 2, "l"), dmp_line(4, 2, "l"),
                                       dmp_line(5, 1, "b"), dmp_line(6, 5, "l"),
                                       dmp_line(7, 5, "l")});
  ClusterAssignment a = partition(tree, 2);
  // max = ceil(7/2) = 4: root+A-subtree fill cluster 0, B restarts in 1
  CHECK(a.labels.at(1) == 0);
  CHECK(a.labels.at(2) == 0);
  CHECK(a.labels.at(3) == 0);
  CHECK(a.labels.at(4) == 0);
  CHECK(a.labels.at(5) == 1);
  CHECK(a.labels.at(6) == 1);
  CHECK(a.labels.at(7) == 1);
  PartitionStats stats = partition_stats(a);
  CHECK(stats.sizes == std::vector<int64_t>({4, 3}));
  CHECK(stats.max_size == 4);
  CHECK(stats.min_size == 3);
}

TEST_CASE("partition: k=1 absorbs everything") {
  TaxonomyTree tree = tree_from_lines(
      {dmp_line(1, 1, "r"), dmp_line(2, 1, "a"), dmp_line(3, 2, "b"), dmp_line(4, 3, "c")});
  ClusterAssignment a = partition(tree, 1);
  for (TaxId i = 1; i <= 4; ++i) CHECK(a.labels.at(i) == 0);
  CHECK(partition_stats(a).sizes == std::vector<int64_t>{4});
}

TEST_CASE("partition: invalid k") {
  TaxonomyTree tree = tree_from_lines({dmp_line(1, 1, "r")});
  CHECK_THROWS_AS(partition(tree, 0), InvalidK);
  CHECK_THROWS_AS(partition(tree, -3), InvalidK);
}

TEST_CASE("lookup_label fallbacks") {
  TaxonomyTree tree = tree_from_lines({dmp_line(1, 1, "r"), dmp_line(2, 1, "a")});
  ClusterAssignment a = partition(tree, 2);
  CHECK(a.lookup(1) == a.labels.at(1));
  CHECK(a.lookup(999) == a.null_label());
  CHECK(a.lookup_none() == a.null_label());
  CHECK(a.null_label() == 2);
}

TEST_CASE("completeness: every node labeled exactly once, sizes sum to n") {
  std::vector<std::string> lines = {dmp_line(1, 1, "r")};
  // a lopsided tree: chain 2-3-4-5 plus a fan under 3
  lines.push_back(dmp_line(2, 1, "x"));
  lines.push_back(dmp_line(3, 2, "x"));
  lines.push_back(dmp_line(4, 3, "x"));
  lines.push_back(dmp_line(5, 4, "x"));
  for (TaxId i = 6; i <= 12; ++i) lines.push_back(dmp_line(i, 3, "l"));
  TaxonomyTree tree = tree_from_lines(lines);
  for (int64_t k : {1, 2, 3, 5}) {
    ClusterAssignment a = partition(tree, k);
    CHECK(static_cast<int64_t>(a.labels.size()) == tree.size());
    PartitionStats stats = partition_stats(a);
    int64_t total = 0;
    for (int64_t s : stats.sizes) total += s;
    CHECK(total == tree.size());
    for (const auto& [id, c] : a.labels) {
      CHECK(c >= 0);
      CHECK(c < k);
    }
  }
}

TEST_CASE("capacity rule: non-leaf nodes sharing the parent cluster fit at assignment time") {
  // exhaustive over small random-ish trees below; here a directed check
  TaxonomyTree tree = tree_from_lines({dmp_line(1, 1, "r"), dmp_line(2, 1, "a"),
                                       dmp_line(3, 2, "l"), dmp_line(4, 1, "b"),
                                       dmp_line(5, 4, "l"), dmp_line(6, 4, "l")});
  ClusterAssignment a = partition(tree, 3);
  int64_t max_size = (tree.size() + 2) / 3;
  // replay: any non-leaf in the same cluster as its parent must have fit
  std::vector<int64_t> sizes(a.k, 0);
  // walk in the same DFS order as the implementation to audit capacity
  struct Frame { TaxId id; size_t next = 0; };
  std::vector<Frame> stack{{1}};
  sizes[a.labels.at(1)]++;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const TaxonNode& node = tree.node(top.id);
    if (top.next >= node.children.size()) { stack.pop_back(); continue; }
    TaxId child_id = node.children[top.next++];
    const TaxonNode& child = tree.node(child_id);
    int64_t cluster = a.labels.at(child_id);
    if (!child.children.empty() && cluster == a.labels.at(top.id))
      CHECK(sizes[cluster] + child.subtree_size <= max_size);
    sizes[cluster]++;
    stack.push_back({child_id});
  }
}

TEST_CASE("oracle equivalence on all rooted trees with up to 6 nodes") {
  // parent arrays with node 1 as root; parents drawn from smaller ids only
  // would miss shapes, so parents range over all other nodes and invalid
  // (cyclic) arrays are skipped
  for (int n = 2; n <= 6; ++n) {
    std::vector<int> parent(n + 1, 1);
    int64_t checked = 0;
    std::function<void(int)> enumerate = [&](int node) {
      if (node > n) {
        // validity: every node reaches the root
        for (int i = 2; i <= n; ++i) {
          int cur = i, hops = 0;
          while (cur != 1 && hops <= n) cur = parent[cur], ++hops;
          if (cur != 1) return;
        }
        std::vector<std::pair<TaxId, TaxId>> edges;
        std::vector<std::string> lines = {dmp_line(1, 1, "r")};
        edges.push_back({1, 1});
        for (int i = 2; i <= n; ++i) {
          edges.push_back({i, parent[i]});
          lines.push_back(dmp_line(i, parent[i], "x"));
        }
        TaxonomyTree tree = tree_from_lines(lines);
        for (int64_t k : {1, 2, 3}) {
          ClusterAssignment got = partition(tree, k);
          std::map<TaxId, int64_t> want = oracle_partition(edges, 1, k);
          REQUIRE(got.labels == want);
        }
        ++checked;
        return;
      }
      for (int p = 1; p <= n; ++p) {
        if (p == node) continue;
        parent[node] = p;
        enumerate(node + 1);
      }
    };
    enumerate(2);
    // Cayley: n^(n-2) trees rooted at a fixed node
    int64_t expect = 1;
    for (int i = 0; i < n - 2; ++i) expect *= n;
    CHECK(checked == expect);
  }
}

TEST_CASE("determinism: same input and k give identical assignments") {
  std::vector<std::string> lines = {dmp_line(1, 1, "r")};
  for (TaxId i = 2; i <= 40; ++i) lines.push_back(dmp_line(i, (i % 7) ? (i / 2) : 1, "x"));
  TaxonomyTree t1 = tree_from_lines(lines);
  TaxonomyTree t2 = tree_from_lines(lines);
  ClusterAssignment a1 = partition(t1, 5);
  ClusterAssignment a2 = partition(t2, 5);
  CHECK(a1.labels == a2.labels);
}

TEST_CASE("cluster map TSV round trip") {
  TaxonomyTree tree = tree_from_lines({dmp_line(1, 1, "r"), dmp_line(2, 1, "a"),
                                       dmp_line(3, 1, "b")});
  ClusterAssignment a = partition(tree, 2);
  std::ostringstream out;
  write_cluster_map(out, a);
  std::string text = out.str();
  CHECK(text.rfind("#k=2\t#n=3\n", 0) == 0);
  std::istringstream in(text);
  ClusterAssignment back = read_cluster_map(in);
  CHECK(back.k == a.k);
  CHECK(back.labels == a.labels);
}

TEST_CASE("rank_group_stats is a comparison statistic only") {
  // ranks: 1 root, 2/5 order, leaves below; node 8 has no order ancestor
  TaxonomyTree tree = tree_from_lines({dmp_line(1, 1, "no rank"), dmp_line(2, 1, "order"),
                                       dmp_line(3, 2, "species"), dmp_line(4, 2, "species"),
                                       dmp_line(5, 1, "order"), dmp_line(6, 5, "species"),
                                       dmp_line(8, 1, "species")});
  auto sizes = rank_group_stats(tree, "order");
  CHECK(sizes.at(2) == 3);   // 2, 3, 4
  CHECK(sizes.at(5) == 2);   // 5, 6
  CHECK(sizes.at(-1) == 2);  // root and 8 have no "order" ancestor
}
