#pragma once

#include <cstddef>

#include "lnu/graph.hpp"

namespace lnu {

/// Exhaustive cut oracles. They enumerate every nonempty proper subset up to
/// complement (2^(n-1) - 1 classes) and are meant for toy graphs only.
inline constexpr std::size_t kBruteForceLimit = 24;

/// c(G): smallest |edge_cut(S)| over nonempty proper S.
std::size_t min_cut_size(const Graph& g, std::size_t limit = kBruteForceLimit);

/// C(G): largest |edge_cut(S)| over nonempty proper S.
std::size_t max_cut_size(const Graph& g, std::size_t limit = kBruteForceLimit);

struct CheegerResult {
  double value = 0.0;            // cut / denominator
  std::size_t cut = 0;           // |edge_cut(minimizer)|
  std::size_t denominator = 0;   // min(|S|, |S^c|)
  NodeSet minimizer;
};

/// h(G) = min |edge_cut(S)| / min(|S|, |S^c|) over nonempty proper S.
///
/// The returned minimizer never contains node n-1; among tied minimizers the
/// one with the smallest membership bitmask (node i <-> bit i) wins.
/// Requires a connected graph.
CheegerResult cheeger_constant(const Graph& g, std::size_t limit = kBruteForceLimit);

}  // namespace lnu
