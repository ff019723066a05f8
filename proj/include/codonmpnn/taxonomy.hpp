#pragma once

// NCBI taxonomy: nodes.dmp parsing and the balanced tree partitioning that
// produces the organism-conditioning label space.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "codonmpnn/errors.hpp"

namespace codonmpnn {

using TaxId = int64_t;

struct TaxonNode {
  TaxId tax_id = 0;
  TaxId parent_id = 0;
  std::string rank;
  std::vector<TaxId> children;  // ascending tax_id
  int64_t subtree_size = 1;     // 1 + sum over children
};

class TaxonomyTree {
 public:
  TaxonomyTree(std::vector<TaxonNode> nodes, TaxId root_id) : root_id_(root_id) {
    nodes_.reserve(nodes.size());
    for (auto& n : nodes) {
      index_[n.tax_id] = nodes_.size();
      nodes_.push_back(std::move(n));
    }
  }

  TaxId root_id() const { return root_id_; }
  int64_t size() const { return static_cast<int64_t>(nodes_.size()); }

  bool contains(TaxId id) const { return index_.count(id) > 0; }
  const TaxonNode& node(TaxId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownId("tax_id " + std::to_string(id));
    return nodes_[it->second];
  }

  const std::vector<TaxonNode>& nodes() const { return nodes_; }

 private:
  std::vector<TaxonNode> nodes_;
  std::unordered_map<TaxId, size_t> index_;
  TaxId root_id_;
};

// Parses NCBI taxdump nodes.dmp: fields separated by "\t|\t", lines
// terminated by "\t|". Field 0 = tax_id, 1 = parent tax_id, 2 = rank.
// The root is the unique node whose parent is itself.
inline TaxonomyTree parse_taxdump(std::istream& in) {
  struct RawNode {
    TaxId tax_id;
    TaxId parent_id;
    std::string rank;
  };
  std::vector<RawNode> raw;
  std::unordered_map<TaxId, size_t> index;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    // strip the "\t|" terminator if present
    if (line.size() >= 2 && line.compare(line.size() - 2, 2, "\t|") == 0)
      line.erase(line.size() - 2);
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
      size_t next = line.find("\t|\t", pos);
      if (next == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, next - pos));
      pos = next + 3;
    }
    if (fields.size() < 3)
      throw ParseError("line " + std::to_string(line_no) + ": expected >= 3 fields, got " +
                       std::to_string(fields.size()));
    RawNode n;
    try {
      n.tax_id = std::stoll(fields[0]);
      n.parent_id = std::stoll(fields[1]);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) + ": non-numeric tax id");
    }
    if (n.tax_id <= 0 || n.parent_id <= 0)
      throw ParseError("line " + std::to_string(line_no) + ": tax ids must be positive");
    n.rank = fields[2];
    if (index.count(n.tax_id))
      throw ParseError("line " + std::to_string(line_no) + ": duplicate tax_id " +
                       std::to_string(n.tax_id));
    index[n.tax_id] = raw.size();
    raw.push_back(std::move(n));
  }
  if (raw.empty()) throw ParseError("empty nodes.dmp");

  TaxId root_id = 0;
  for (const auto& n : raw) {
    if (n.tax_id == n.parent_id) {
      if (root_id != 0)
        throw ParseError("multiple roots: " + std::to_string(root_id) + " and " +
                         std::to_string(n.tax_id));
      root_id = n.tax_id;
    } else if (!index.count(n.parent_id)) {
      throw OrphanNode("node " + std::to_string(n.tax_id) + " references missing parent " +
                       std::to_string(n.parent_id));
    }
  }
  if (root_id == 0) throw ParseError("no root node (parent_id == tax_id)");

  // Depth from root detects cycles: any node that never reaches the root
  // sits on (or hangs off) a parent cycle.
  std::vector<int64_t> depth(raw.size(), -1);
  for (size_t i = 0; i < raw.size(); ++i) {
    std::vector<size_t> path;
    size_t cur = i;
    while (depth[cur] < 0) {
      path.push_back(cur);
      if (raw[cur].tax_id == root_id) {
        depth[cur] = 0;
        path.pop_back();
        break;
      }
      cur = index.at(raw[cur].parent_id);
      if (path.size() > raw.size())
        throw CycleDetected("parent chain from tax_id " + std::to_string(raw[i].tax_id) +
                            " never reaches the root");
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it)
      depth[*it] = depth[index.at(raw[*it].parent_id)] + 1;
  }

  std::vector<TaxonNode> nodes(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    nodes[i].tax_id = raw[i].tax_id;
    nodes[i].parent_id = raw[i].parent_id;
    nodes[i].rank = raw[i].rank;
  }
  for (size_t i = 0; i < raw.size(); ++i)
    if (raw[i].tax_id != root_id) nodes[index.at(raw[i].parent_id)].children.push_back(raw[i].tax_id);
  for (auto& n : nodes) std::sort(n.children.begin(), n.children.end());

  // Subtree sizes by decreasing depth (children before parents).
  std::vector<size_t> order(raw.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return depth[a] > depth[b]; });
  for (size_t i : order) {
    if (nodes[i].tax_id != root_id) {
      nodes[index.at(nodes[i].parent_id)].subtree_size += nodes[i].subtree_size;
    }
  }

  return TaxonomyTree(std::move(nodes), root_id);
}

struct ClusterAssignment {
  int64_t k = 1;
  std::map<TaxId, int64_t> labels;  // every tree node, cluster in [0, k)
  int64_t null_label() const { return k; }

  int64_t lookup(TaxId tax_id) const {
    auto it = labels.find(tax_id);
    return it == labels.end() ? k : it->second;
  }
  // The explicit "no taxon" request.
  int64_t lookup_none() const { return k; }
};

// Balanced tree partitioning. Depth-first from the root in cluster 0 with
// max_cluster_size = ceil(n / k); a child stays in the parent's cluster iff
// it is a leaf or the cluster still has room for its whole subtree,
// otherwise it restarts in the currently smallest cluster (lowest index on
// ties). Children are visited in ascending tax_id order. Iterative traversal:
// the real NCBI tree is deep and wide enough to overflow call stacks.
inline ClusterAssignment partition(const TaxonomyTree& tree, int64_t k) {
  if (k < 1) throw InvalidK("k must be >= 1, got " + std::to_string(k));
  const int64_t n = tree.size();
  const int64_t max_cluster_size = (n + k - 1) / k;

  ClusterAssignment out;
  out.k = k;
  std::vector<int64_t> cluster_sizes(static_cast<size_t>(k), 0);

  struct Frame {
    TaxId tax_id;
    int64_t cluster_id;
    size_t next_child = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({tree.root_id(), 0});
  out.labels[tree.root_id()] = 0;
  cluster_sizes[0] += 1;

  while (!stack.empty()) {
    Frame& top = stack.back();
    const TaxonNode& node = tree.node(top.tax_id);
    if (top.next_child >= node.children.size()) {
      stack.pop_back();
      continue;
    }
    const TaxonNode& child = tree.node(node.children[top.next_child]);
    ++top.next_child;
    int64_t target = top.cluster_id;
    bool is_leaf = child.children.empty();
    if (!is_leaf && cluster_sizes[target] + child.subtree_size > max_cluster_size) {
      target = static_cast<int64_t>(
          std::min_element(cluster_sizes.begin(), cluster_sizes.end()) - cluster_sizes.begin());
    }
    out.labels[child.tax_id] = target;
    cluster_sizes[target] += 1;
    stack.push_back({child.tax_id, target});
  }
  return out;
}

struct PartitionStats {
  std::vector<int64_t> sizes;  // by cluster id
  int64_t max_size = 0;
  int64_t min_size = 0;
  double mean_size = 0.0;
};

inline PartitionStats partition_stats(const ClusterAssignment& assignment) {
  PartitionStats stats;
  stats.sizes.assign(static_cast<size_t>(assignment.k), 0);
  for (const auto& [tax_id, cluster] : assignment.labels) stats.sizes[cluster] += 1;
  stats.max_size = *std::max_element(stats.sizes.begin(), stats.sizes.end());
  stats.min_size = *std::min_element(stats.sizes.begin(), stats.sizes.end());
  stats.mean_size =
      static_cast<double>(assignment.labels.size()) / static_cast<double>(assignment.k);
  return stats;
}

// Naive rank-based grouping, kept only as a comparison statistic: group every
// node under its nearest ancestor (inclusive) of the given rank. Returns
// group sizes keyed by ancestor tax_id; nodes with no such ancestor count
// under the `unassigned` key -1.
inline std::map<TaxId, int64_t> rank_group_stats(const TaxonomyTree& tree,
                                                 const std::string& rank) {
  std::map<TaxId, int64_t> sizes;
  std::unordered_map<TaxId, TaxId> anchor;  // node -> governing ancestor of `rank`
  // Nodes in BFS order from root so parents resolve first.
  std::vector<TaxId> queue = {tree.root_id()};
  anchor[tree.root_id()] = tree.node(tree.root_id()).rank == rank ? tree.root_id() : -1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const TaxonNode& node = tree.node(queue[qi]);
    for (TaxId child_id : node.children) {
      const TaxonNode& child = tree.node(child_id);
      anchor[child_id] = child.rank == rank ? child_id : anchor[node.tax_id];
      queue.push_back(child_id);
    }
  }
  for (const auto& [id, a] : anchor) sizes[a] += 1;
  return sizes;
}

// Cluster map TSV: header "#k=<k>\t#n=<n>", then "tax_id\tcluster_id" rows
// sorted by tax_id.
inline void write_cluster_map(std::ostream& out, const ClusterAssignment& assignment) {
  out << "#k=" << assignment.k << "\t#n=" << assignment.labels.size() << "\n";
  for (const auto& [tax_id, cluster] : assignment.labels)
    out << tax_id << "\t" << cluster << "\n";
}

inline ClusterAssignment read_cluster_map(std::istream& in) {
  ClusterAssignment assignment;
  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      long long k = 0, n = 0;
      if (std::sscanf(line.c_str(), "#k=%lld\t#n=%lld", &k, &n) < 1 || k < 1)
        throw ParseError("cluster map line " + std::to_string(line_no) + ": bad header");
      assignment.k = k;
      have_header = true;
      continue;
    }
    long long tax_id = 0, cluster = 0;
    if (std::sscanf(line.c_str(), "%lld\t%lld", &tax_id, &cluster) != 2)
      throw ParseError("cluster map line " + std::to_string(line_no) + ": expected tax_id\\tcluster");
    assignment.labels[tax_id] = cluster;
  }
  if (!have_header) throw ParseError("cluster map: missing #k= header");
  for (const auto& [tax_id, cluster] : assignment.labels)
    if (cluster < 0 || cluster >= assignment.k)
      throw ParseError("cluster map: tax_id " + std::to_string(tax_id) + " has cluster " +
                       std::to_string(cluster) + " outside [0," + std::to_string(assignment.k) + ")");
  return assignment;
}

}  // namespace codonmpnn
