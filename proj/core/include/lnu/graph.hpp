#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace lnu {

using NodeId = int;

/// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge canonical(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  auto operator<=>(const Edge&) const = default;
};

/// Membership bitmap over the node ids 0..n-1 of a fixed graph.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe) : bits_(universe, 0) {}

  static NodeSet of(std::size_t universe, std::span<const NodeId> members);
  static NodeSet full(std::size_t universe);

  std::size_t universe() const { return bits_.size(); }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(NodeId v) const { return bits_[static_cast<std::size_t>(v)] != 0; }
  void insert(NodeId v);
  void erase(NodeId v);

  NodeSet complement() const;
  bool intersects(const NodeSet& other) const;
  bool is_subset_of(const NodeSet& other) const;
  NodeSet united(const NodeSet& other) const;

  /// Members in ascending id order.
  std::vector<NodeId> members() const;

  bool operator==(const NodeSet& other) const { return bits_ == other.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// Sorted, duplicate-free set of canonical edges.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::vector<Edge> edges);

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  bool contains(Edge e) const;
  bool contains(NodeId a, NodeId b) const { return contains(Edge::canonical(a, b)); }

  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const EdgeSet&) const = default;

 private:
  std::vector<Edge> edges_;
};

/// Immutable simple undirected graph with sorted adjacency lists.
///
/// Construction rejects self-loops and out-of-range endpoints and merges
/// duplicate (including reversed) pairs, so every instance satisfies
/// symmetry, sum of degrees == 2m, and strictly increasing neighbor lists.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t degree(NodeId v) const { return adjacency_[static_cast<std::size_t>(v)].size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }
  /// Canonical edges sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(NodeId a, NodeId b) const;

  /// Copy of this graph without the given edges (which must be present).
  Graph without_edges(const EdgeSet& removed) const;

  bool operator==(const Graph& other) const { return edges_ == other.edges_ && num_nodes() == other.num_nodes(); }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// BFS hop distance from every node to its nearest source; kUnreachable
/// when no source lies in the node's component. Throws on empty sources.
std::vector<int> multi_source_distances(const Graph& g, const NodeSet& sources);

/// Nodes of s having at least one neighbor outside s.
NodeSet boundary(const Graph& g, const NodeSet& s);

/// Edges with exactly one endpoint in s.
EdgeSet edge_cut(const Graph& g, const NodeSet& s);
std::size_t edge_cut_size(const Graph& g, const NodeSet& s);

struct InducedSubgraph {
  Graph graph;
  std::vector<NodeId> to_parent;  // sub id -> parent id, ascending
  std::vector<NodeId> to_sub;     // parent id -> sub id, -1 when absent
};

InducedSubgraph induced_subgraph(const Graph& g, const NodeSet& s);

struct Contraction {
  Graph graph;
  std::vector<NodeId> node_map;  // parent id -> contracted id
  NodeId merged = 0;             // id of the node replacing s
};

/// Replaces s by a single node placed after the surviving nodes (which keep
/// their relative order). Parallel edges merge and loops vanish.
Contraction contraction(const Graph& g, const NodeSet& s);

/// Component label per node. Labels are 0,1,... in order of each
/// component's smallest node id.
std::vector<int> connected_components(const Graph& g);
int count_components(const Graph& g);
bool is_connected(const Graph& g);

/// BFS spanning forest rooted at the smallest id of each component.
EdgeSet spanning_forest(const Graph& g);

}  // namespace lnu
