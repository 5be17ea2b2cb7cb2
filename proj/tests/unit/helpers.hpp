#pragma once

#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "lnu/graph.hpp"

namespace test {

inline lnu::Graph graph(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
  std::vector<std::pair<lnu::NodeId, lnu::NodeId>> list(edges.begin(), edges.end());
  return lnu::Graph::from_edges(n, list);
}

inline lnu::NodeSet set(std::size_t n, std::initializer_list<int> members) {
  std::vector<lnu::NodeId> list(members.begin(), members.end());
  return lnu::NodeSet::of(n, list);
}

inline std::mt19937_64 rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), 0xC0FFEEu};
  return std::mt19937_64(seq);
}

// Erdos-Renyi graph, possibly disconnected.
inline lnu::Graph random_graph(std::size_t n, double p, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(p);
  std::vector<lnu::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(gen)) edges.push_back({static_cast<lnu::NodeId>(i), static_cast<lnu::NodeId>(j)});
    }
  }
  return lnu::Graph::from_edges(n, edges);
}

}  // namespace test
