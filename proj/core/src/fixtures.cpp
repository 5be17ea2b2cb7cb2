#include "lnu/fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "lnu/error.hpp"

namespace lnu::fixtures {
namespace {

// Every component of G minus the observed nodes touches both o0 and o1, so
// the harmonic solution stays strictly inside (0,1) off the observed set.
bool free_components_see_both(const HarmonicProblem& p) {
  const Graph& g = p.graph();
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack;
  for (std::size_t s = 0; s < g.num_nodes(); ++s) {
    if (seen[s] || p.observed().contains(static_cast<NodeId>(s))) continue;
    bool sees0 = false;
    bool sees1 = false;
    seen[s] = 1;
    stack.push_back(static_cast<NodeId>(s));
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : g.neighbors(v)) {
        if (p.o0().contains(u)) {
          sees0 = true;
        } else if (p.o1().contains(u)) {
          sees1 = true;
        } else if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    if (!sees0 || !sees1) return false;
  }
  return true;
}

void add_random_connected(std::vector<Edge>& edges, NodeId offset, std::size_t n, double p_extra,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    edges.push_back(Edge::canonical(offset + static_cast<NodeId>(parent(rng)), offset + static_cast<NodeId>(i)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (unit(rng) < p_extra) edges.push_back({offset + static_cast<NodeId>(i), offset + static_cast<NodeId>(j)});
    }
  }
}

NodeSet closed_neighborhood(const Graph& g, const NodeSet& s) {
  NodeSet out = s;
  for (NodeId v : s.members()) {
    for (NodeId u : g.neighbors(v)) out.insert(u);
  }
  return out;
}

}  // namespace

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(i)});
  return Graph::from_edges(n, edges);
}

Graph random_connected_graph(std::size_t n, double p_extra, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  add_random_connected(edges, 0, n, p_extra, rng);
  return Graph::from_edges(n, edges);
}

HarmonicProblem random_harmonic_problem(std::size_t n, double p_extra, std::size_t max_observed,
                                        std::mt19937_64& rng) {
  if (n < 2 || max_observed == 0) throw Error("random_harmonic_problem: need n >= 2 and max_observed >= 1");
  Graph g = random_connected_graph(n, p_extra, rng);
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  const std::size_t cap = std::min(max_observed, n / 2);
  std::uniform_int_distribution<std::size_t> size(1, cap);
  const std::size_t k0 = size(rng);
  const std::size_t k1 = size(rng);
  NodeSet o0(n);
  NodeSet o1(n);
  for (std::size_t i = 0; i < k0; ++i) o0.insert(nodes[i]);
  for (std::size_t i = k0; i < k0 + k1; ++i) o1.insert(nodes[i]);
  return HarmonicProblem(std::move(g), std::move(o0), std::move(o1));
}

std::optional<NodeSet> random_valid_partition(const HarmonicProblem& p, std::mt19937_64& rng) {
  const Graph& g = p.graph();
  NodeSet v0 = closed_neighborhood(g, p.o0());
  const NodeSet blocked = closed_neighborhood(g, p.o1());
  if (v0.intersects(blocked) || !free_components_see_both(p)) return std::nullopt;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto id = static_cast<NodeId>(v);
    if (!v0.contains(id) && !blocked.contains(id) && coin(rng)) v0.insert(id);
  }
  return v0;
}

BottleneckInstance random_bottleneck_instance(std::size_t block0, std::size_t block1, std::size_t separator,
                                              double p_block, std::mt19937_64& rng) {
  if (block0 == 0 || block1 == 0 || separator < 2) {
    throw Error("random_bottleneck_instance: blocks must be nonempty and the separator needs two nodes");
  }
  const std::size_t n = block0 + block1 + separator;
  std::vector<Edge> edges;
  add_random_connected(edges, 0, block0, p_block, rng);
  add_random_connected(edges, static_cast<NodeId>(block0), block1, p_block, rng);

  const auto first_sep = static_cast<NodeId>(block0 + block1);
  std::vector<int> side(separator);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < separator; ++i) side[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(coin(rng));
  for (std::size_t i = 0; i < separator; ++i) {
    const std::size_t size = side[i] == 0 ? block0 : block1;
    const NodeId offset = side[i] == 0 ? 0 : static_cast<NodeId>(block0);
    std::uniform_int_distribution<std::size_t> pick(0, size - 1);
    std::uniform_int_distribution<int> links(1, 2);
    for (int t = links(rng); t > 0; --t) {
      edges.push_back({first_sep + static_cast<NodeId>(i), offset + static_cast<NodeId>(pick(rng))});
    }
  }
  edges.push_back({first_sep, first_sep + 1});
  std::bernoulli_distribution sep_edge(0.3);
  for (std::size_t i = 0; i < separator; ++i) {
    for (std::size_t j = i + 1; j < separator; ++j) {
      if (sep_edge(rng)) edges.push_back({first_sep + static_cast<NodeId>(i), first_sep + static_cast<NodeId>(j)});
    }
  }
  NodeSet sep(n);
  for (std::size_t i = 0; i < separator; ++i) sep.insert(first_sep + static_cast<NodeId>(i));
  return {Graph::from_edges(n, edges), std::move(sep)};
}

}  // namespace lnu::fixtures
