#pragma once

#include <cstddef>
#include <optional>
#include <random>

#include "lnu/graph.hpp"
#include "lnu/harmonic.hpp"

namespace lnu::fixtures {

// Random instance generators shared by the verify command, tests and
// benchmarks. All draw from the caller's generator.

Graph path_graph(std::size_t n);

/// Random tree (node i attaches to a uniform earlier node) plus each other
/// pair independently with probability p_extra.
Graph random_connected_graph(std::size_t n, double p_extra, std::mt19937_64& rng);

/// Connected graph with 1..max_observed nodes in each of o0 and o1.
HarmonicProblem random_harmonic_problem(std::size_t n, double p_extra, std::size_t max_observed,
                                        std::mt19937_64& rng);

/// A V0 containing o0 in its interior and avoiding the closed neighborhood of
/// o1: the closed neighborhood of o0 plus a random half of the free nodes.
/// nullopt when the closed neighborhoods of o0 and o1 meet, or when some
/// component of G minus the observed nodes misses o0 or o1 (f would hit 0 or
/// 1 off the observed set).
std::optional<NodeSet> random_valid_partition(const HarmonicProblem& p, std::mt19937_64& rng);

struct BottleneckInstance {
  Graph graph;
  NodeSet separator;
};

/// Two random connected blocks joined only through a separator whose nodes
/// each attach to exactly one block. At least one separator edge links the
/// two sides, so the graph is connected. Requires separator >= 2.
BottleneckInstance random_bottleneck_instance(std::size_t block0, std::size_t block1, std::size_t separator,
                                              double p_block, std::mt19937_64& rng);

}  // namespace lnu::fixtures
