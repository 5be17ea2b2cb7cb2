#include "lnu/wgnn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "lnu/error.hpp"
#include "lnu/ranking.hpp"
#include "rng.hpp"

namespace lnu {
namespace {

void check_fraction(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

std::size_t ceil_count(double fraction, std::size_t total) {
  if (fraction <= 0.0 || total == 0) return 0;
  const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total) - 1e-9));
  return std::min(count, total);
}

std::size_t floor_count(double fraction, std::size_t total) {
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total) + 1e-9));
  return std::min(count, total);
}

}  // namespace

std::string_view mode_name(WgnnMode mode) {
  switch (mode) {
    case WgnnMode::base: return "base";
    case WgnnMode::wgnn1: return "wgnn1";
    case WgnnMode::wgnn2: return "wgnn2";
    case WgnnMode::combined: return "combined";
  }
  return "base";
}

WgnnMode parse_mode(std::string_view text) {
  for (WgnnMode m : {WgnnMode::base, WgnnMode::wgnn1, WgnnMode::wgnn2, WgnnMode::combined}) {
    if (mode_name(m) == text) return m;
  }
  throw Error("unknown mode '" + std::string(text) + "' (expected base, wgnn1, wgnn2 or combined)");
}

void WgnnConfig::validate() const {
  check_fraction(eta0, "eta0");
  check_fraction(eta1, "eta1");
  check_fraction(eta2, "eta2");
  train.validate();
}

Split AugmentedSplit::training_split() const {
  Split s = original;
  for (NodeId v : added.members()) {
    s.train.insert(v);
    s.test.erase(v);
  }
  return s;
}

std::vector<int> AugmentedSplit::training_labels(std::span<const int> truth) const {
  if (truth.size() != original.train.universe()) throw Error("training_labels: truth size mismatch");
  std::vector<int> labels(truth.size(), -1);
  for (std::size_t v = 0; v < truth.size(); ++v) {
    const auto id = static_cast<NodeId>(v);
    if (original.train.contains(id) || original.val.contains(id)) labels[v] = truth[v];
    if (added.contains(id)) labels[v] = pseudo_labels[v];
  }
  return labels;
}

AugmentedSplit algorithm1_augment(const DistributionTable& table, const Split& split, double eta0) {
  check_fraction(eta0, "eta0");
  split.validate();
  const std::size_t n = split.train.universe();
  if (table.num_nodes() != n) throw Error("algorithm1_augment: table does not cover the graph");
  AugmentedSplit aug{split, NodeSet(n), std::vector<int>(n, -1)};
  const std::size_t count = ceil_count(eta0, split.test.size());
  if (count == 0) return aug;
  const Ranking ranking = rank_m2(table, split.test);
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId v = ranking.order[i];
    aug.added.insert(v);
    aug.pseudo_labels[static_cast<std::size_t>(v)] = table.argmax(static_cast<std::size_t>(v));
  }
  return aug;
}

EdgeDropResult algorithm2_drop_edges(const Graph& g, const DistributionTable& table, const NodeSet& candidates,
                                     double eta1, double eta2, std::uint64_t seed) {
  check_fraction(eta1, "eta1");
  check_fraction(eta2, "eta2");
  const std::size_t n = g.num_nodes();
  if (table.num_nodes() != n || candidates.universe() != n) {
    throw Error("algorithm2_drop_edges: table or candidate set does not match the graph");
  }
  EdgeDropResult result{g, EdgeSet{}, EdgeSet{}, NodeSet(n)};
  const std::size_t count = ceil_count(eta1, candidates.size());
  if (count == 0) return result;

  const std::vector<double> w = table.non_uniformity();
  std::vector<NodeId> pool = candidates.members();
  std::stable_sort(pool.begin(), pool.end(), [&w](NodeId a, NodeId b) {
    return w[static_cast<std::size_t>(a)] < w[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 0; i < count; ++i) result.selected_lowu.insert(pool[i]);

  const InducedSubgraph sub = induced_subgraph(g, result.selected_lowu);
  auto lift = [&sub](const Edge& e) {
    return Edge::canonical(sub.to_parent[static_cast<std::size_t>(e.u)], sub.to_parent[static_cast<std::size_t>(e.v)]);
  };
  const EdgeSet forest = spanning_forest(sub.graph);
  std::vector<Edge> tree;
  std::vector<Edge> rest;
  for (const Edge& e : sub.graph.edges()) {
    (forest.contains(e) ? tree : rest).push_back(lift(e));
  }
  result.kept_tree = EdgeSet(tree);

  const std::size_t drop = floor_count(eta2, rest.size());
  auto rng = detail::derived_stream(seed, 31);
  // Partial Fisher-Yates over the sorted remainder.
  for (std::size_t i = 0; i < drop; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, rest.size() - 1);
    std::swap(rest[i], rest[pick(rng)]);
  }
  rest.resize(drop);
  result.dropped = EdgeSet(std::move(rest));
  result.graph = g.without_edges(result.dropped);
  return result;
}

double tally_accuracy(const DistributionTable& initial, const DistributionTable& retrained, const AugmentedSplit& aug,
                      std::span<const int> truth) {
  const NodeSet& test = aug.original.test;
  if (initial.num_nodes() != truth.size() || retrained.num_nodes() != truth.size()) {
    throw Error("tally_accuracy: tables do not cover the graph");
  }
  if (test.empty()) return 0.0;
  std::size_t correct = 0;
  for (NodeId v : test.members()) {
    const auto i = static_cast<std::size_t>(v);
    const DistributionTable& source = aug.added.contains(v) ? initial : retrained;
    if (source.argmax(i) == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

BaseStage train_base(const Dataset& data, const Split& split, const TrainConfig& cfg) {
  const AugmentedSplit none{split, NodeSet(data.num_nodes()), std::vector<int>(data.num_nodes(), -1)};
  BaseStage base;
  base.model = train(data.graph, data.features, none.training_labels(data.labels), data.num_classes, split, cfg);
  const auto preds = base.model.distributions.predictions();
  base.test_accuracy = accuracy(preds, data.labels, split.test);
  base.val_accuracy = accuracy(preds, data.labels, split.val);
  return base;
}

RunResult run_from_base(const Dataset& data, const Split& split, const WgnnConfig& cfg, const BaseStage& base,
                        const Graph* stored_graph) {
  cfg.validate();
  RunResult result;
  result.config = cfg;
  result.base_test_accuracy = base.test_accuracy;
  result.base_val_accuracy = base.val_accuracy;
  result.test_accuracy = base.test_accuracy;
  result.val_accuracy = base.val_accuracy;
  if (cfg.mode == WgnnMode::base) return result;

  const DistributionTable& initial = base.model.distributions;
  AugmentedSplit aug = algorithm1_augment(initial, split, cfg.augments() ? cfg.eta0 : 0.0);

  const Graph* graph = &data.graph;
  if (stored_graph != nullptr) {
    if (stored_graph->num_nodes() != data.num_nodes()) {
      throw Error("stored graph has " + std::to_string(stored_graph->num_nodes()) + " nodes, dataset has " +
                  std::to_string(data.num_nodes()));
    }
    graph = stored_graph;
    result.used_stored_graph = true;
  } else if (cfg.drops()) {
    const NodeSet candidates = split.train.complement();
    result.drop = algorithm2_drop_edges(data.graph, initial, candidates, cfg.eta1, cfg.eta2, cfg.drop_seed);
    graph = &result.drop->graph;
  }

  const bool unchanged = aug.added.empty() && *graph == data.graph;
  if (unchanged) {
    // Cold retraining on identical inputs reproduces the base model exactly.
    result.aug = std::move(aug);
    return result;
  }
  const TrainedModel retrained =
      train(*graph, data.features, aug.training_labels(data.labels), data.num_classes, aug.training_split(), cfg.train);
  result.test_accuracy = tally_accuracy(initial, retrained.distributions, aug, data.labels);
  result.val_accuracy = accuracy(retrained.distributions.predictions(), data.labels, split.val);
  result.aug = std::move(aug);
  return result;
}

RunResult run_pipeline(const Dataset& data, const Split& split, const WgnnConfig& cfg) {
  cfg.validate();
  const BaseStage base = train_base(data, split, cfg.train);
  return run_from_base(data, split, cfg, base);
}

RunResult reuse_stored_graph(const Dataset& data, const Split& split, const Graph& stored, const WgnnConfig& cfg) {
  if (stored.num_nodes() != data.num_nodes()) {
    throw Error("stored graph has " + std::to_string(stored.num_nodes()) + " nodes, dataset has " +
                std::to_string(data.num_nodes()));
  }
  if (cfg.mode == WgnnMode::base) throw Error("a stored graph needs mode wgnn1, wgnn2 or combined");
  cfg.validate();
  const BaseStage base = train_base(data, split, cfg.train);
  return run_from_base(data, split, cfg, base, &stored);
}

void GridSpec::validate() const {
  if (eta0.empty() || eta1.empty() || (!couple_eta12 && eta2.empty())) throw Error("grid: empty eta list");
  for (double v : eta0) check_fraction(v, "grid eta0");
  for (double v : eta1) check_fraction(v, "grid eta1");
  if (!couple_eta12) {
    for (double v : eta2) check_fraction(v, "grid eta2");
  }
}

std::size_t best_grid_row(std::span<const GridRow> rows) {
  if (rows.empty()) throw Error("best_grid_row: empty grid");
  auto key = [](const GridRow& r) { return std::tuple(r.eta0, r.eta1, r.eta2); };
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].val_accuracy > rows[best].val_accuracy ||
        (rows[i].val_accuracy == rows[best].val_accuracy && key(rows[i]) < key(rows[best]))) {
      best = i;
    }
  }
  return best;
}

GridResult grid_search(const Dataset& data, const Split& split, const WgnnConfig& base_cfg, const GridSpec& grid,
                       std::size_t workers) {
  grid.validate();
  base_cfg.validate();
  GridResult result;
  for (double e0 : grid.eta0) {
    for (double e1 : grid.eta1) {
      if (grid.couple_eta12) {
        result.rows.push_back({e0, e1, e1, 0.0, 0.0});
        continue;
      }
      for (double e2 : grid.eta2) result.rows.push_back({e0, e1, e2, 0.0, 0.0});
    }
  }
  result.base = train_base(data, split, base_cfg.train);

  auto config_for = [&base_cfg](const GridRow& row) {
    WgnnConfig cfg = base_cfg;
    cfg.eta0 = row.eta0;
    cfg.eta1 = row.eta1;
    cfg.eta2 = row.eta2;
    return cfg;
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < result.rows.size(); i = next++) {
      try {
        const RunResult run = run_from_base(data, split, config_for(result.rows[i]), result.base);
        result.rows[i].val_accuracy = run.val_accuracy;
        result.rows[i].test_accuracy = run.test_accuracy;
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, result.rows.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  result.best_index = best_grid_row(result.rows);
  result.best = config_for(result.rows[result.best_index]);
  return result;
}

}  // namespace lnu
