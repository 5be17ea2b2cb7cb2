#include "lnu/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "lnu/error.hpp"

namespace lnu {

NodeSet NodeSet::of(std::size_t universe, std::span<const NodeId> members) {
  NodeSet s(universe);
  for (NodeId v : members) {
    if (v < 0 || static_cast<std::size_t>(v) >= universe) {
      throw Error("NodeSet: node " + std::to_string(v) + " outside 0.." + std::to_string(universe));
    }
    s.insert(v);
  }
  return s;
}

NodeSet NodeSet::full(std::size_t universe) {
  NodeSet s(universe);
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  s.count_ = universe;
  return s;
}

void NodeSet::insert(NodeId v) {
  auto& b = bits_[static_cast<std::size_t>(v)];
  if (!b) {
    b = 1;
    ++count_;
  }
}

void NodeSet::erase(NodeId v) {
  auto& b = bits_[static_cast<std::size_t>(v)];
  if (b) {
    b = 0;
    --count_;
  }
}

NodeSet NodeSet::complement() const {
  NodeSet out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] ? 0 : 1;
  out.count_ = bits_.size() - count_;
  return out;
}

bool NodeSet::intersects(const NodeSet& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && other.bits_[i]) return true;
  }
  return false;
}

bool NodeSet::is_subset_of(const NodeSet& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

NodeSet NodeSet::united(const NodeSet& other) const {
  NodeSet out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (other.bits_[i]) out.insert(static_cast<NodeId>(i));
  }
  return out;
}

std::vector<NodeId> NodeSet::members() const {
  std::vector<NodeId> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

EdgeSet::EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
  for (auto& e : edges_) e = Edge::canonical(e.u, e.v);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool EdgeSet::contains(Edge e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [a, b] : edges) list.push_back(Edge{a, b});
  return from_edges(n, list);
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g;
  g.adjacency_.assign(n, {});
  g.edges_.reserve(edges.size());
  for (const Edge& raw : edges) {
    if (raw.u < 0 || raw.v < 0 || static_cast<std::size_t>(raw.u) >= n ||
        static_cast<std::size_t>(raw.v) >= n) {
      throw Error("edge (" + std::to_string(raw.u) + "," + std::to_string(raw.v) +
                  ") has an endpoint outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
    }
    if (raw.u == raw.v) {
      throw Error("self-loop at node " + std::to_string(raw.u));
    }
    g.edges_.push_back(Edge::canonical(raw.u, raw.v));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());
  for (const Edge& e : g.edges_) {
    g.adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
    g.adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
  return g;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a == b) return false;
  auto adj = neighbors(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

Graph Graph::without_edges(const EdgeSet& removed) const {
  std::vector<Edge> kept;
  kept.reserve(edges_.size());
  for (const Edge& e : edges_) {
    if (!removed.contains(e)) kept.push_back(e);
  }
  if (kept.size() + removed.size() != edges_.size()) throw Error("without_edges: some removed edges are not in the graph");
  return from_edges(num_nodes(), kept);
}

std::vector<int> multi_source_distances(const Graph& g, const NodeSet& sources) {
  if (sources.empty()) throw Error("multi_source_distances: empty source set");
  std::vector<int> dist(g.num_nodes(), kUnreachable);
  std::deque<NodeId> queue;
  for (NodeId s : sources.members()) {
    dist[static_cast<std::size_t>(s)] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : g.neighbors(v)) {
      auto& du = dist[static_cast<std::size_t>(u)];
      if (du == kUnreachable) {
        du = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

NodeSet boundary(const Graph& g, const NodeSet& s) {
  NodeSet out(g.num_nodes());
  for (NodeId v : s.members()) {
    for (NodeId u : g.neighbors(v)) {
      if (!s.contains(u)) {
        out.insert(v);
        break;
      }
    }
  }
  return out;
}

EdgeSet edge_cut(const Graph& g, const NodeSet& s) {
  std::vector<Edge> cut;
  for (const Edge& e : g.edges()) {
    if (s.contains(e.u) != s.contains(e.v)) cut.push_back(e);
  }
  return EdgeSet(std::move(cut));
}

std::size_t edge_cut_size(const Graph& g, const NodeSet& s) {
  std::size_t count = 0;
  for (const Edge& e : g.edges()) {
    if (s.contains(e.u) != s.contains(e.v)) ++count;
  }
  return count;
}

InducedSubgraph induced_subgraph(const Graph& g, const NodeSet& s) {
  InducedSubgraph out;
  out.to_sub.assign(g.num_nodes(), -1);
  out.to_parent = s.members();
  for (std::size_t i = 0; i < out.to_parent.size(); ++i) {
    out.to_sub[static_cast<std::size_t>(out.to_parent[i])] = static_cast<NodeId>(i);
  }
  std::vector<Edge> inner;
  for (const Edge& e : g.edges()) {
    if (s.contains(e.u) && s.contains(e.v)) {
      inner.push_back({out.to_sub[static_cast<std::size_t>(e.u)], out.to_sub[static_cast<std::size_t>(e.v)]});
    }
  }
  out.graph = Graph::from_edges(out.to_parent.size(), inner);
  return out;
}

Contraction contraction(const Graph& g, const NodeSet& s) {
  if (s.empty()) throw Error("contraction: set to contract is empty");
  Contraction out;
  out.node_map.assign(g.num_nodes(), -1);
  NodeId next = 0;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (!s.contains(static_cast<NodeId>(v))) out.node_map[v] = next++;
  }
  out.merged = next;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (s.contains(static_cast<NodeId>(v))) out.node_map[v] = out.merged;
  }
  std::vector<Edge> mapped;
  for (const Edge& e : g.edges()) {
    NodeId a = out.node_map[static_cast<std::size_t>(e.u)];
    NodeId b = out.node_map[static_cast<std::size_t>(e.v)];
    if (a != b) mapped.push_back(Edge::canonical(a, b));
  }
  out.graph = Graph::from_edges(static_cast<std::size_t>(next) + 1, mapped);
  return out;
}

std::vector<int> connected_components(const Graph& g) {
  std::vector<int> label(g.num_nodes(), -1);
  int current = 0;
  std::deque<NodeId> queue;
  for (std::size_t start = 0; start < g.num_nodes(); ++start) {
    if (label[start] != -1) continue;
    label[start] = current;
    queue.push_back(static_cast<NodeId>(start));
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      for (NodeId u : g.neighbors(v)) {
        if (label[static_cast<std::size_t>(u)] == -1) {
          label[static_cast<std::size_t>(u)] = current;
          queue.push_back(u);
        }
      }
    }
    ++current;
  }
  return label;
}

int count_components(const Graph& g) {
  auto labels = connected_components(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool is_connected(const Graph& g) { return count_components(g) <= 1; }

EdgeSet spanning_forest(const Graph& g) {
  std::vector<Edge> tree;
  std::vector<char> seen(g.num_nodes(), 0);
  std::deque<NodeId> queue;
  for (std::size_t root = 0; root < g.num_nodes(); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    queue.push_back(static_cast<NodeId>(root));
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      for (NodeId u : g.neighbors(v)) {
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          tree.push_back(Edge::canonical(v, u));
          queue.push_back(u);
        }
      }
    }
  }
  return EdgeSet(std::move(tree));
}

}  // namespace lnu
