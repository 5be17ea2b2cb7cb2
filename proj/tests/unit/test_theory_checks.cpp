#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lnu/error.hpp"
#include "lnu/fixtures.hpp"
#include "lnu/theory_checks.hpp"

using namespace lnu;

TEST_CASE("boundary inequality on a path is tight") {
  // f = i/4 on 0..4; V0 = {0,1,2}.
  const HarmonicProblem p(fixtures::path_graph(5), test::set(5, {0}), test::set(5, {4}));
  const GraphSignal f = solve_harmonic(p);
  const BoundaryReport r = check_boundary_inequality(p, f, test::set(5, {0, 1, 2}));
  CHECK(r.lhs == doctest::Approx(0.5));
  CHECK(r.rhs_base == doctest::Approx(0.75));
  CHECK(r.a == doctest::Approx(0.25));
  CHECK(r.b == doctest::Approx(0.25));
  CHECK(r.gamma_o0 == 1);
  CHECK(r.gamma_o1 == 1);
  CHECK(r.rhs() == doctest::Approx(0.5));
  CHECK(r.holds);
  CHECK(std::abs(r.o0_identity_residual) < 1e-12);
  CHECK(std::abs(r.o1_identity_residual) < 1e-12);
}

TEST_CASE("boundary inequality and identities on random partitions") {
  auto rng = test::rng(7);
  int tested = 0;
  for (int trial = 0; trial < 2000 && tested < 60; ++trial) {
    const HarmonicProblem p = fixtures::random_harmonic_problem(6 + trial % 20, 0.15, 2, rng);
    const auto v0 = fixtures::random_valid_partition(p, rng);
    if (!v0) continue;
    ++tested;
    const GraphSignal f = solve_harmonic(p);
    const BoundaryReport r = check_boundary_inequality(p, f, *v0, 1e-7);
    CHECK(r.holds);
    CHECK(std::abs(r.o0_identity_residual) < 1e-8);
    CHECK(std::abs(r.o1_identity_residual) < 1e-8);
    const BoundaryIdentity id = boundary_sum_identity(p.graph(), f, p.observed());
    CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-9));
  }
  CHECK(tested >= 30);
}

TEST_CASE("boundary inequality rejects partitions that cut an observed node") {
  const HarmonicProblem p(fixtures::path_graph(5), test::set(5, {0}), test::set(5, {4}));
  const GraphSignal f = solve_harmonic(p);
  CHECK_THROWS_AS(check_boundary_inequality(p, f, test::set(5, {0})), Error);         // 0 on the boundary
  CHECK_THROWS_AS(check_boundary_inequality(p, f, test::set(5, {0, 1, 2, 3})), Error);  // 4 touches V0
  CHECK_THROWS_AS(check_boundary_inequality(p, GraphSignal(5, 0.0), test::set(5, {0, 1, 2})), Error);
}

TEST_CASE("monotone paths exist and validate") {
  auto rng = test::rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const HarmonicProblem p = fixtures::random_harmonic_problem(5 + trial % 25, 0.2, 3, rng);
    const GraphSignal f = solve_harmonic(p);
    for (std::size_t v = 0; v < p.graph().num_nodes(); ++v) {
      const Path path = monotone_path(p, f, static_cast<NodeId>(v));
      CHECK(validate_monotone_path(p, f, static_cast<NodeId>(v), path).empty());
      CHECK(p.o0().contains(path.front()));
      CHECK(p.o1().contains(path.back()));
    }
  }
}

TEST_CASE("path validation reports defects") {
  const HarmonicProblem p(fixtures::path_graph(5), test::set(5, {0}), test::set(5, {4}));
  const GraphSignal f = solve_harmonic(p);
  CHECK(validate_monotone_path(p, f, 2, {0, 1, 2, 3, 4}).empty());
  CHECK_FALSE(validate_monotone_path(p, f, 2, {0, 1, 2, 1, 2, 3, 4}).empty());  // goes down
  CHECK_FALSE(validate_monotone_path(p, f, 2, {0, 2, 3, 4}).empty());           // not an edge
  CHECK_FALSE(validate_monotone_path(p, f, 2, {1, 2, 3, 4}).empty());           // starts off o0
}

TEST_CASE("monotone path refuses bad inputs") {
  const Graph g = test::graph(4, {{0, 1}, {2, 3}});
  const HarmonicProblem split(g, test::set(4, {0}), test::set(4, {1, 3}));
  CHECK_THROWS_AS(monotone_path(split, solve_harmonic(split), 2), Error);

  const HarmonicProblem p(fixtures::path_graph(5), test::set(5, {0}), test::set(5, {4}));
  GraphSignal f = solve_harmonic(p);
  f[2] = 0.9;
  CHECK_THROWS_AS(monotone_path(p, f, 2), Error);
}

TEST_CASE("sublevel profile on a path") {
  const HarmonicProblem p(fixtures::path_graph(6), test::set(6, {0}), test::set(6, {5}));
  const SublevelProfile prof = sublevel_connectivity_profile(p.graph(), solve_harmonic(p), p.observed());
  CHECK(prof.hypothesis_met);
  CHECK(prof.ok());
  CHECK(prof.steps.size() == 5);  // 0 and four interior values
  for (const auto& s : prof.steps) {
    CHECK(s.sublevel_connected);
    CHECK(s.superlevel_connected);
  }
}

TEST_CASE("sublevel profile reports unmet hypotheses") {
  // Symmetric star: the two leaves between the centre and o1 share a value.
  const Graph g = test::graph(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}});
  const HarmonicProblem p(g, test::set(5, {0}), test::set(5, {4}));
  const SublevelProfile prof = sublevel_connectivity_profile(g, solve_harmonic(p), p.observed());
  CHECK_FALSE(prof.hypothesis_met);
  CHECK_FALSE(prof.hypothesis_note.empty());
  CHECK(prof.ok());
}

TEST_CASE("sublevel profile treats values that round to 1 as level 1") {
  // 0 - 1 - 2 - 3 - 4 with 5 hanging off both o1 nodes 3 and 4: f_5 = 1.
  const Graph g = test::graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
  const HarmonicProblem p(g, test::set(6, {0}), test::set(6, {3, 4}));
  GraphSignal f = solve_harmonic(p);
  f[5] = std::nextafter(1.0, 0.0);
  const SublevelProfile prof = sublevel_connectivity_profile(g, f, p.observed());
  CHECK(prof.hypothesis_met);
  CHECK(prof.ok());
  CHECK(prof.steps.size() == 3);  // 0, f_1, f_2
}

TEST_CASE("sublevel sets stay connected on random instances") {
  auto rng = test::rng(9);
  int judged = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const HarmonicProblem p = fixtures::random_harmonic_problem(6 + trial % 20, 0.2, 2, rng);
    const SublevelProfile prof = sublevel_connectivity_profile(p.graph(), solve_harmonic(p), p.observed());
    if (prof.hypothesis_met) ++judged;
    CHECK(prof.ok());
  }
  CHECK(judged > 10);
}

TEST_CASE("bottleneck certificate on two triangles") {
  // Triangles {0,1,2} and {3,4,5}; separator 6 - 7 with 6 ~ 2 and 7 ~ 3.
  const Graph g = test::graph(8, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 6}, {6, 7}, {7, 3}});
  const BottleneckCertificate c = bottleneck_certificate(g, test::set(8, {6, 7}));
  CHECK(c.c1 == doctest::Approx(4.0));
  CHECK(c.c0 == doctest::Approx(4.0 / 3.0));
  CHECK(c.cut_of_separator == 1);
  CHECK(c.cheeger == doctest::Approx(0.25));
  CHECK(c.applicable);
  CHECK(c.bound_holds);
  CHECK(c.crosses_separator);
  CHECK(c.cheeger_set.members() == std::vector<NodeId>{0, 1, 2, 6});
  CHECK(c.u0.members() == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("bottleneck certificate holds on random instances") {
  auto rng = test::rng(10);
  std::uniform_int_distribution<std::size_t> block(2, 7);
  std::uniform_int_distribution<std::size_t> sep(2, 4);
  int applicable = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = fixtures::random_bottleneck_instance(block(rng), block(rng), sep(rng), 0.6, rng);
    const BottleneckCertificate c = bottleneck_certificate(inst.graph, inst.separator);
    if (!c.applicable) continue;
    ++applicable;
    CHECK(c.bound_holds);
    CHECK(c.crosses_separator);
  }
  CHECK(applicable > 5);
}

TEST_CASE("bottleneck certificate input errors") {
  const Graph g = test::graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK_THROWS_AS(bottleneck_certificate(g, test::set(5, {4})), Error);        // one component left
  CHECK_THROWS_AS(bottleneck_certificate(g, test::set(5, {1, 3})), Error);     // three components
  const Graph star = test::graph(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(bottleneck_certificate(star, test::set(3, {1})), Error);     // 1 touches both sides
}

TEST_CASE("random partitions refuse free nodes cut off from o1") {
  // 0 - 1 - 2 - 3 - 4 with o0 = {1}: node 0 only sees o0, so f_0 = 0.
  const HarmonicProblem p(fixtures::path_graph(5), test::set(5, {1}), test::set(5, {4}));
  auto rng = test::rng(3);
  CHECK_FALSE(fixtures::random_valid_partition(p, rng).has_value());
}
