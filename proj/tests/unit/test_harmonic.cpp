#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "lnu/error.hpp"
#include "lnu/fixtures.hpp"
#include "lnu/harmonic.hpp"

using namespace lnu;

namespace {

// Solves the interior equations deg(v) f_v - sum_{u ~ v} f_u = 0 by dense
// Gaussian elimination with partial pivoting.
std::vector<double> reference_solution(const Graph& g, const NodeSet& o0, const NodeSet& o1) {
  const std::size_t n = g.num_nodes();
  std::vector<int> index(n, -1);
  std::vector<NodeId> interior;
  for (std::size_t v = 0; v < n; ++v) {
    const auto id = static_cast<NodeId>(v);
    if (!o0.contains(id) && !o1.contains(id)) {
      index[v] = static_cast<int>(interior.size());
      interior.push_back(id);
    }
  }
  const std::size_t m = interior.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    const NodeId v = interior[r];
    a[r][r] = static_cast<double>(g.degree(v));
    for (NodeId u : g.neighbors(v)) {
      if (index[static_cast<std::size_t>(u)] >= 0) {
        a[r][static_cast<std::size_t>(index[static_cast<std::size_t>(u)])] -= 1.0;
      } else if (o1.contains(u)) {
        a[r][m] += 1.0;
      }
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[pivot][c])) pivot = r;
    }
    std::swap(a[c], a[pivot]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double factor = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= factor * a[c][k];
    }
  }
  std::vector<double> f(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (o1.contains(static_cast<NodeId>(v))) f[v] = 1.0;
  }
  for (std::size_t r = 0; r < m; ++r) f[static_cast<std::size_t>(interior[r])] = a[r][m] / a[r][r];
  return f;
}

}  // namespace

TEST_CASE("path interpolation is linear") {
  const std::size_t n = 9;
  const HarmonicProblem p(fixtures::path_graph(n), test::set(n, {0}), test::set(n, {8}));
  const GraphSignal f = solve_harmonic(p);
  for (std::size_t i = 0; i < n; ++i) CHECK(f[static_cast<NodeId>(i)] == doctest::Approx(i / 8.0).epsilon(1e-12));
  CHECK(laplacian_quadratic(p.graph(), f) == doctest::Approx(8 * (1.0 / 64.0)));
}

TEST_CASE("iterative solver on a long path matches the closed form") {
  const std::size_t n = kDenseSolveLimit + 500;
  const std::vector<NodeId> first{0};
  const std::vector<NodeId> last{static_cast<NodeId>(n - 1)};
  const HarmonicProblem p(fixtures::path_graph(n), NodeSet::of(n, first), NodeSet::of(n, last));
  const GraphSignal f = solve_harmonic(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::fabs(f[static_cast<NodeId>(i)] - static_cast<double>(i) / static_cast<double>(n - 1)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("solver matches Gaussian elimination on random graphs") {
  auto rng = test::rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const HarmonicProblem p = fixtures::random_harmonic_problem(5 + trial % 20, 0.2, 3, rng);
    const GraphSignal f = solve_harmonic(p);
    const auto ref = reference_solution(p.graph(), p.o0(), p.o1());
    for (std::size_t v = 0; v < ref.size(); ++v) CHECK(f[static_cast<NodeId>(v)] == doctest::Approx(ref[v]).epsilon(1e-9));
    CHECK(verify_averaging(p.graph(), f, p.observed()) < 1e-9);
    for (double x : f.values()) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("harmonic solution minimizes the quadratic form") {
  auto rng = test::rng(5);
  std::normal_distribution<double> noise(0.0, 0.05);
  const HarmonicProblem p = fixtures::random_harmonic_problem(20, 0.2, 2, rng);
  const GraphSignal f = solve_harmonic(p);
  const double best = laplacian_quadratic(p.graph(), f);
  for (int t = 0; t < 20; ++t) {
    GraphSignal g = f;
    for (NodeId v : p.observed().complement().members()) g[v] += noise(rng);
    CHECK(laplacian_quadratic(p.graph(), g) >= best);
  }
}

TEST_CASE("Dirichlet solve is linear in the boundary values") {
  auto rng = test::rng(6);
  const Graph g = fixtures::random_connected_graph(12, 0.2, rng);
  const NodeSet clamped = test::set(12, {0, 5, 9});
  std::vector<double> a(12, 0.0);
  std::vector<double> b(12, 0.0);
  a[0] = 1.0, a[5] = -2.0, a[9] = 0.5;
  b[0] = 3.0, b[5] = 1.0, b[9] = -1.0;
  std::vector<double> sum(12, 0.0);
  for (int i = 0; i < 12; ++i) sum[static_cast<std::size_t>(i)] = 2.0 * a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
  const GraphSignal fa = detail::solve_dirichlet(g, clamped, a);
  const GraphSignal fb = detail::solve_dirichlet(g, clamped, b);
  const GraphSignal fs = detail::solve_dirichlet(g, clamped, sum);
  for (NodeId v = 0; v < 12; ++v) CHECK(fs[v] == doctest::Approx(2.0 * fa[v] + fb[v]).epsilon(1e-9));
}

TEST_CASE("problem validation") {
  const Graph g = test::graph(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(HarmonicProblem(g, test::set(4, {0}), test::set(4, {1})), Error);  // {2,3} unobserved
  const Graph path = fixtures::path_graph(4);
  CHECK_THROWS_AS(HarmonicProblem(path, test::set(4, {0}), test::set(4, {0, 3})), Error);
  CHECK_THROWS_AS(HarmonicProblem(path, NodeSet(4), test::set(4, {3})), Error);
  CHECK_THROWS_AS(GraphSignal(std::vector<double>{0.0, NAN}), Error);
}

TEST_CASE("averaging residual of a corrupted signal") {
  const HarmonicProblem p(fixtures::path_graph(5), test::set(5, {0}), test::set(5, {4}));
  GraphSignal f = solve_harmonic(p);
  f[2] += 0.1;
  CHECK(verify_averaging(p.graph(), f, p.observed()) == doctest::Approx(0.1));
  const Graph isolated = test::graph(3, {{0, 1}});
  CHECK_THROWS_AS(verify_averaging(isolated, GraphSignal(3), test::set(3, {0})), Error);
}

TEST_CASE("level components group equal neighbours") {
  const Graph g = fixtures::path_graph(5);
  const GraphSignal f(std::vector<double>{0.0, 0.0, 0.5, 0.5, 0.0});
  CHECK(level_components(g, f) == std::vector<int>{0, 0, 1, 1, 2});
}
