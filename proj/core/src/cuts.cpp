#include "lnu/cuts.hpp"

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "lnu/error.hpp"

namespace lnu {
namespace {

void check_size(const Graph& g, std::size_t limit, const char* what) {
  if (g.num_nodes() < 2) {
    throw Error(std::string(what) + ": needs at least 2 nodes, got " + std::to_string(g.num_nodes()));
  }
  if (g.num_nodes() > limit || g.num_nodes() > 63) {
    throw Error(std::string(what) + ": " + std::to_string(g.num_nodes()) +
                " nodes exceeds the brute-force limit of " + std::to_string(limit));
  }
}

std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  std::vector<std::uint64_t> masks(g.num_nodes(), 0);
  for (const Edge& e : g.edges()) {
    masks[static_cast<std::size_t>(e.u)] |= std::uint64_t{1} << e.v;
    masks[static_cast<std::size_t>(e.v)] |= std::uint64_t{1} << e.u;
  }
  return masks;
}

// Visits every nonempty subset of nodes {0..n-2} in Gray-code order, calling
// visit(mask, cut_size). Node n-1 is always on the complement side, so each
// unordered cut {S, S^c} is seen exactly once.
template <typename Visit>
void for_each_cut(const Graph& g, Visit&& visit) {
  const auto adj = adjacency_masks(g);
  const std::size_t free_bits = g.num_nodes() - 1;
  const std::uint64_t total = std::uint64_t{1} << free_bits;
  std::uint64_t mask = 0;
  long long cut = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int v = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << v;
    const long long deg = static_cast<long long>(g.degree(v));
    if (mask & bit) {
      mask ^= bit;
      const long long inside = std::popcount(adj[static_cast<std::size_t>(v)] & mask);
      cut += 2 * inside - deg;
    } else {
      const long long inside = std::popcount(adj[static_cast<std::size_t>(v)] & mask);
      mask ^= bit;
      cut += deg - 2 * inside;
    }
    visit(mask, static_cast<std::size_t>(cut));
  }
}

}  // namespace

std::size_t min_cut_size(const Graph& g, std::size_t limit) {
  check_size(g, limit, "min_cut_size");
  std::size_t best = g.num_edges() + 1;
  for_each_cut(g, [&](std::uint64_t, std::size_t cut) {
    if (cut < best) best = cut;
  });
  return best;
}

std::size_t max_cut_size(const Graph& g, std::size_t limit) {
  check_size(g, limit, "max_cut_size");
  std::size_t best = 0;
  for_each_cut(g, [&](std::uint64_t, std::size_t cut) {
    if (cut > best) best = cut;
  });
  return best;
}

CheegerResult cheeger_constant(const Graph& g, std::size_t limit) {
  check_size(g, limit, "cheeger_constant");
  if (!is_connected(g)) throw Error("cheeger_constant: graph is disconnected");
  const std::size_t n = g.num_nodes();
  std::size_t best_cut = 0;
  std::size_t best_den = 0;
  std::uint64_t best_mask = 0;
  for_each_cut(g, [&](std::uint64_t mask, std::size_t cut) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    const std::size_t den = size < n - size ? size : n - size;
    if (best_den == 0) {
      best_cut = cut;
      best_den = den;
      best_mask = mask;
      return;
    }
    // cut/den vs best_cut/best_den, exactly.
    const auto lhs = static_cast<unsigned long long>(cut) * best_den;
    const auto rhs = static_cast<unsigned long long>(best_cut) * den;
    if (lhs < rhs || (lhs == rhs && mask < best_mask)) {
      best_cut = cut;
      best_den = den;
      best_mask = mask;
    }
  });
  CheegerResult out;
  out.cut = best_cut;
  out.denominator = best_den;
  out.value = static_cast<double>(best_cut) / static_cast<double>(best_den);
  out.minimizer = NodeSet(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (best_mask & (std::uint64_t{1} << v)) out.minimizer.insert(static_cast<NodeId>(v));
  }
  return out;
}

}  // namespace lnu
