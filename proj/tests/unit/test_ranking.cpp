#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "lnu/error.hpp"
#include "lnu/ranking.hpp"

using namespace lnu;

TEST_CASE("M1 keys: distance to the training set, then label agreement") {
  // Path 0..5 plus isolated 6. Training: 0 (class 0), 4 and 5 (class 1).
  const Graph g = test::graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  const std::vector<int> labels{0, -1, -1, -1, 1, 1, -1};
  const Ranking r = rank_m1(g, test::set(7, {0, 4, 5}), labels, test::set(7, {1, 2, 3, 6}));
  CHECK(r.order == std::vector<NodeId>{1, 3, 2, 6});
  CHECK(r.keys[0] == std::pair<double, double>{1.0, 0.0});
  CHECK(r.keys[1] == std::pair<double, double>{1.0, 0.0});
  CHECK(r.keys[2] == std::pair<double, double>{2.0, 0.5});
  CHECK(std::isinf(r.keys[3].first));
  CHECK_THROWS_AS(rank_m1(g, NodeSet(7), labels, test::set(7, {1})), Error);
}

TEST_CASE("M1 counts every training node in the nearest layer") {
  // Node 0 has three training neighbours: two of class 2, one of class 0.
  const Graph g = test::graph(4, {{0, 1}, {0, 2}, {0, 3}});
  const std::vector<int> labels{-1, 2, 2, 0};
  const Ranking r = rank_m1(g, test::set(4, {1, 2, 3}), labels, test::set(4, {0}));
  CHECK(r.keys[0].first == 1.0);
  CHECK(r.keys[0].second == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("M2 sorts by non-uniformity, largest first") {
  const DistributionTable t(2, {0.5, 0.5, 1.0, 0.0, 0.9, 0.1, 0.0, 1.0, 0.7, 0.3});
  const Ranking r = rank_m2(t, NodeSet::full(5));
  CHECK(r.order == std::vector<NodeId>{1, 3, 2, 4, 0});
  CHECK(r.keys[0].first == doctest::Approx(1.0));
  CHECK(r.keys[2].first == doctest::Approx(0.8));
  const Ranking subset = rank_m2(t, test::set(5, {0, 4}));
  CHECK(subset.order == std::vector<NodeId>{4, 0});
}

TEST_CASE("top count") {
  CHECK(top_count(0.3, 10) == 3);
  CHECK(top_count(0.05, 10) == 1);
  CHECK(top_count(0.01, 10) == 1);
  CHECK(top_count(1.0, 10) == 10);
  CHECK(top_count(0.25, 10) == 3);
  CHECK(top_count(0.5, 0) == 0);
}

TEST_CASE("selection accuracy curve") {
  Ranking r;
  r.order = {3, 1, 0, 2};
  r.keys.assign(4, {0.0, 0.0});
  const std::vector<int> truth{0, 1, 0, 1};
  const std::vector<int> preds{1, 1, 1, 1};  // right on 1 and 3
  const std::vector<double> alphas{0.1, 0.5, 0.75, 1.0};
  const auto curve = selection_accuracy_curve(r, preds, truth, alphas);
  CHECK(curve[0].accuracy == 1.0);
  CHECK(curve[1].accuracy == 1.0);
  CHECK(curve[2].accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(curve[3].accuracy == 0.5);
  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(selection_accuracy_curve(r, preds, truth, bad), Error);
  CHECK_THROWS_AS(selection_accuracy_curve(Ranking{}, preds, truth, alphas), Error);
}

TEST_CASE("perfect predictions give flat curves for both rankings") {
  const Graph g = test::graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  const std::vector<int> truth{0, 0, 1, 1, 1};
  const DistributionTable t(2, {0.9, 0.1, 0.6, 0.4, 0.3, 0.7, 0.2, 0.8, 0.1, 0.9});
  const auto preds = t.predictions();
  const NodeSet test_set = test::set(5, {1, 2, 3});
  const std::vector<double> alphas{0.3, 0.6, 1.0};
  for (const auto& curve : {selection_accuracy_curve(rank_m2(t, test_set), preds, truth, alphas),
                            selection_accuracy_curve(rank_m1(g, test::set(5, {0, 4}), truth, test_set), preds, truth,
                                                     alphas)}) {
    for (const auto& p : curve) CHECK(p.accuracy == 1.0);
  }
}
