#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lnu/error.hpp"
#include "lnu/fixtures.hpp"
#include "lnu/gcn.hpp"

using namespace lnu;

namespace {

struct Instance {
  Graph graph;
  FeatureMatrix features;
  std::vector<int> labels;
  NodeSet mask;
  GcnParams params;
};

Instance random_instance(std::uint64_t seed) {
  auto rng = test::rng(seed);
  const std::size_t n = 12;
  Instance inst;
  inst.graph = fixtures::random_connected_graph(n, 0.2, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  inst.features = FeatureMatrix(static_cast<Eigen::Index>(n), 5);
  for (Eigen::Index i = 0; i < inst.features.size(); ++i) inst.features.data()[i] = gauss(rng);
  std::uniform_int_distribution<int> label(0, 2);
  inst.labels.resize(n);
  for (int& y : inst.labels) y = label(rng);
  inst.mask = test::set(n, {0, 2, 3, 5, 7, 8, 11});
  inst.params = glorot_init(5, 6, 3, seed);
  return inst;
}

// Two well-separated classes on two cliques joined by one edge.
struct Easy {
  Graph graph;
  FeatureMatrix features;
  std::vector<int> labels;
  Split split;
};

Easy easy_problem() {
  std::vector<Edge> edges;
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      edges.push_back({i, j});
      edges.push_back({i + 8, j + 8});
    }
  }
  edges.push_back({7, 8});
  Easy e;
  e.graph = Graph::from_edges(16, edges);
  e.features = FeatureMatrix::Zero(16, 2);
  e.labels.assign(16, 0);
  for (int v = 8; v < 16; ++v) e.labels[static_cast<std::size_t>(v)] = 1;
  for (int v = 0; v < 16; ++v) e.features(v, e.labels[static_cast<std::size_t>(v)]) = 1.0;
  e.split = {test::set(16, {0, 1, 8, 9}), test::set(16, {2, 10}), test::set(16, {3, 4, 5, 6, 7, 11, 12, 13, 14, 15})};
  return e;
}

}  // namespace

TEST_CASE("normalized adjacency of a three-node path") {
  const PropagationMatrix a = normalize_adjacency(fixtures::path_graph(3));
  // Degrees with self-loops: 2, 3, 2.
  CHECK(a.coeff(0, 0) == doctest::Approx(0.5));
  CHECK(a.coeff(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(a.coeff(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(a.coeff(0, 2) == 0.0);
  CHECK(a.coeff(2, 1) == doctest::Approx(a.coeff(1, 2)));
}

TEST_CASE("softmax rows and masked cross-entropy") {
  Eigen::MatrixXd logits(2, 3);
  logits << 0.0, 0.0, std::log(2.0), 1000.0, 1000.0, 1000.0;
  const DistributionTable t = softmax_rows(logits);
  CHECK(t.row(0)[2] == doctest::Approx(0.5));
  CHECK(t.row(0)[0] == doctest::Approx(0.25));
  CHECK(t.row(1)[1] == doctest::Approx(1.0 / 3.0));
  const std::vector<int> labels{2, 0};
  CHECK(masked_cross_entropy(t, labels, test::set(2, {0})) == doctest::Approx(std::log(2.0)));
  CHECK(masked_cross_entropy(t, labels, test::set(2, {0, 1})) ==
        doctest::Approx(0.5 * (std::log(2.0) + std::log(3.0))));
}

TEST_CASE("analytic gradients match finite differences") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = random_instance(seed);
    for (double decay : {0.0, 5e-4, 0.1}) {
      const GradientCheckResult r =
          gradient_check(inst.graph, inst.features, inst.labels, inst.mask, inst.params, 1e-5, decay);
      CHECK(r.checked > 0);
      CHECK(r.max_relative_error < 1e-4);
    }
  }
}

TEST_CASE("loss_and_gradients reports the regularized objective") {
  const Instance inst = random_instance(42);
  const PropagationMatrix a = normalize_adjacency(inst.graph);
  const double plain = loss_and_gradients(a, inst.features, inst.params, inst.labels, inst.mask).loss;
  const double reg = loss_and_gradients(a, inst.features, inst.params, inst.labels, inst.mask, 0.2).loss;
  CHECK(reg - plain == doctest::Approx(0.1 * inst.params.w1.squaredNorm()));
  const ForwardResult fwd = forward(a, inst.features, inst.params);
  CHECK(plain == doctest::Approx(masked_cross_entropy(fwd.distributions, inst.labels, inst.mask)));
}

TEST_CASE("glorot initialization is bounded and seeded") {
  const GcnParams p = glorot_init(10, 6, 3, 7);
  CHECK(p.input_dim() == 10);
  CHECK(p.hidden() == 6);
  CHECK(p.classes() == 3);
  CHECK(p.w1.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 16.0));
  CHECK(p.w2.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 9.0));
  CHECK(glorot_init(10, 6, 3, 7).w1 == p.w1);
  CHECK(glorot_init(10, 6, 3, 8).w1 != p.w1);
}

TEST_CASE("training fits an easy problem deterministically") {
  const Easy e = easy_problem();
  TrainConfig cfg;
  cfg.seed = 3;
  const TrainedModel a = train(e.graph, e.features, e.labels, 2, e.split, cfg);
  const TrainedModel b = train(e.graph, e.features, e.labels, 2, e.split, cfg);
  CHECK(a.distributions == b.distributions);
  CHECK(a.params.w1 == b.params.w1);
  CHECK(accuracy(a.distributions.predictions(), e.labels, e.split.test) == 1.0);
  REQUIRE(a.best_epoch >= 0);
  CHECK(a.history[static_cast<std::size_t>(a.best_epoch)].val_loss < a.history.front().val_loss);
  CHECK(a.history.size() <= static_cast<std::size_t>(a.best_epoch + cfg.patience + 1));
}

TEST_CASE("training ignores labels outside train and validation") {
  const Easy e = easy_problem();
  std::vector<int> hidden = e.labels;
  for (NodeId v : e.split.test.members()) hidden[static_cast<std::size_t>(v)] = -1;
  TrainConfig cfg;
  cfg.epochs = 30;
  CHECK(train(e.graph, e.features, hidden, 2, e.split, cfg).distributions ==
        train(e.graph, e.features, e.labels, 2, e.split, cfg).distributions);
  std::vector<int> broken = e.labels;
  broken[0] = 5;
  CHECK_THROWS_AS(train(e.graph, e.features, broken, 2, e.split, cfg), Error);
}

TEST_CASE("training with an empty validation set selects on training loss") {
  Easy e = easy_problem();
  e.split.val = NodeSet(16);
  TrainConfig cfg;
  const TrainedModel m = train(e.graph, e.features, e.labels, 2, e.split, cfg);
  CHECK(m.best_epoch >= 0);
  CHECK(accuracy(m.distributions.predictions(), e.labels, e.split.test) == 1.0);
}

TEST_CASE("train config validation") {
  TrainConfig cfg;
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.hidden = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.patience = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("accuracy over a mask") {
  const std::vector<int> preds{0, 1, 1, 2};
  const std::vector<int> truth{0, 1, 0, 0};
  CHECK(accuracy(preds, truth, test::set(4, {0, 1, 2})) == doctest::Approx(2.0 / 3.0));
  CHECK(accuracy(preds, truth, NodeSet::full(4)) == 0.5);
}

TEST_CASE("checkpoint round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "lnu_test_gcn";
  std::filesystem::create_directories(dir);
  const GcnParams p = glorot_init(4, 3, 2, 11);
  save_checkpoint(dir / "ckpt.json", p);
  const GcnParams q = load_checkpoint(dir / "ckpt.json");
  CHECK(q.w1 == p.w1);
  CHECK(q.w2 == p.w2);

  std::ofstream(dir / "bad.json") << R"({"format": "something-else", "version": 1})";
  CHECK_THROWS_AS(load_checkpoint(dir / "bad.json"), Error);
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.json"), Error);
  std::filesystem::remove_all(dir);
}
