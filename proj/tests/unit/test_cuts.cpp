#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "lnu/cuts.hpp"
#include "lnu/error.hpp"

using namespace lnu;

namespace {

struct NaiveCuts {
  std::size_t min_cut = std::numeric_limits<std::size_t>::max();
  std::size_t max_cut = 0;
  std::size_t h_num = 1;
  std::size_t h_den = 0;  // h = h_num / h_den, starts at +inf
};

// Direct enumeration of every nonempty proper subset (both a set and its
// complement are visited).
NaiveCuts naive(const Graph& g) {
  const std::size_t n = g.num_nodes();
  NaiveCuts out;
  for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask) {
    std::size_t cut = 0;
    for (const Edge& e : g.edges()) {
      if (((mask >> e.u) & 1u) != ((mask >> e.v) & 1u)) ++cut;
    }
    const auto size = static_cast<std::size_t>(__builtin_popcountl(mask));
    const std::size_t den = std::min(size, n - size);
    out.min_cut = std::min(out.min_cut, cut);
    out.max_cut = std::max(out.max_cut, cut);
    if (out.h_den == 0 || cut * out.h_den < out.h_num * den) {
      out.h_num = cut;
      out.h_den = den;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("known Cheeger constants") {
  // K4: best split is 2|2 with 4 crossing edges.
  const Graph k4 = test::graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(cheeger_constant(k4).value == doctest::Approx(2.0));
  CHECK(min_cut_size(k4) == 3);
  CHECK(max_cut_size(k4) == 4);

  const Graph p4 = test::graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const CheegerResult hp = cheeger_constant(p4);
  CHECK(hp.value == doctest::Approx(0.5));
  CHECK(hp.cut == 1);
  CHECK(hp.denominator == 2);
  CHECK(hp.minimizer.members() == std::vector<NodeId>{0, 1});

  const Graph c6 = test::graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  CHECK(cheeger_constant(c6).value == doctest::Approx(2.0 / 3.0));
  CHECK(min_cut_size(c6) == 2);
  CHECK(max_cut_size(c6) == 6);
}

TEST_CASE("brute force agrees with direct enumeration") {
  auto rng = test::rng(3);
  int connected = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 10);
    const Graph g = test::random_graph(n, 0.45, rng);
    const NaiveCuts ref = naive(g);
    CHECK(min_cut_size(g) == ref.min_cut);
    CHECK(max_cut_size(g) == ref.max_cut);
    if (!is_connected(g)) continue;
    ++connected;
    const CheegerResult h = cheeger_constant(g);
    CHECK(h.cut * ref.h_den == ref.h_num * h.denominator);
    CHECK_FALSE(h.minimizer.contains(static_cast<NodeId>(n - 1)));
    CHECK(edge_cut_size(g, h.minimizer) == h.cut);
  }
  CHECK(connected > 20);
}

TEST_CASE("cut oracles reject out-of-range inputs") {
  CHECK_THROWS_AS(min_cut_size(Graph::from_edges(1, std::span<const Edge>{})), Error);
  CHECK_THROWS_AS(cheeger_constant(test::graph(3, {{0, 1}})), Error);
  const Graph big = Graph::from_edges(kBruteForceLimit + 1, std::span<const Edge>{});
  CHECK_THROWS_WITH_AS(max_cut_size(big), doctest::Contains("24"), Error);
}
