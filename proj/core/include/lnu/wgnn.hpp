#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lnu/dataset.hpp"
#include "lnu/gcn.hpp"
#include "lnu/graph.hpp"
#include "lnu/nonuniformity.hpp"
#include "lnu/split.hpp"

namespace lnu {

enum class WgnnMode { base, wgnn1, wgnn2, combined };

std::string_view mode_name(WgnnMode mode);
/// Accepts "base", "wgnn1", "wgnn2", "combined".
WgnnMode parse_mode(std::string_view text);

struct WgnnConfig {
  WgnnMode mode = WgnnMode::base;
  double eta0 = 0.0;  // fraction of test nodes added with pseudo-labels
  double eta1 = 0.0;  // fraction of candidate nodes treated as low-w
  double eta2 = 0.0;  // fraction of non-tree low-w edges dropped
  TrainConfig train;
  std::uint64_t drop_seed = 0;

  bool augments() const { return mode == WgnnMode::wgnn1 || mode == WgnnMode::combined; }
  bool drops() const { return mode == WgnnMode::wgnn2 || mode == WgnnMode::combined; }
  void validate() const;
};

struct AugmentedSplit {
  Split original;
  NodeSet added;                    // subset of original.test
  std::vector<int> pseudo_labels;   // by node id; -1 outside `added`

  /// train + added for training; added nodes leave the test set.
  Split training_split() const;
  /// Truth on train and validation nodes, pseudo-labels on added nodes, -1
  /// elsewhere. Test truth never enters.
  std::vector<int> training_labels(std::span<const int> truth) const;
};

/// Adds the ceil(eta0 |T|) test nodes with the largest w (rank_m2 order),
/// labelled with the table's argmax.
AugmentedSplit algorithm1_augment(const DistributionTable& table, const Split& split, double eta0);

struct EdgeDropResult {
  Graph graph;
  EdgeSet dropped;
  EdgeSet kept_tree;
  NodeSet selected_lowu;
};

/// Selects the ceil(eta1 |candidates|) candidates with the smallest w (ties
/// by node id), keeps a spanning forest of their induced subgraph and drops a
/// seeded uniform sample of floor(eta2 m) of the remaining m internal edges.
EdgeDropResult algorithm2_drop_edges(const Graph& g, const DistributionTable& table, const NodeSet& candidates,
                                     double eta1, double eta2, std::uint64_t seed);

/// Test accuracy where added nodes keep their initial prediction and the
/// rest of the test set uses the retrained one.
double tally_accuracy(const DistributionTable& initial, const DistributionTable& retrained,
                      const AugmentedSplit& aug, std::span<const int> truth);

/// Step (a): the base model every mode starts from.
struct BaseStage {
  TrainedModel model;
  double test_accuracy = 0.0;
  double val_accuracy = 0.0;
};

BaseStage train_base(const Dataset& data, const Split& split, const TrainConfig& cfg);

struct RunResult {
  WgnnConfig config;
  double test_accuracy = 0.0;  // tally rule whenever nodes were added
  double val_accuracy = 0.0;
  double base_test_accuracy = 0.0;
  double base_val_accuracy = 0.0;
  std::optional<AugmentedSplit> aug;
  std::optional<EdgeDropResult> drop;
  bool used_stored_graph = false;
};

/// Runs the configured modules on top of an already trained base stage. When
/// `stored_graph` is given, edge dropping is skipped and that graph is used for
/// retraining.
RunResult run_from_base(const Dataset& data, const Split& split, const WgnnConfig& cfg, const BaseStage& base,
                        const Graph* stored_graph = nullptr);

RunResult run_pipeline(const Dataset& data, const Split& split, const WgnnConfig& cfg);

/// Like run_pipeline with a precomputed G' in place of edge dropping. Throws on
/// a node-count mismatch or when cfg.mode is base.
RunResult reuse_stored_graph(const Dataset& data, const Split& split, const Graph& stored, const WgnnConfig& cfg);

struct GridSpec {
  std::vector<double> eta0{0.0};
  std::vector<double> eta1{0.0};
  std::vector<double> eta2{0.0};
  bool couple_eta12 = false;  // eta2 follows eta1; the eta2 list is ignored

  void validate() const;
};

struct GridRow {
  double eta0 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct GridResult {
  std::vector<GridRow> rows;  // eta0-major, then eta1, then eta2
  std::size_t best_index = 0;
  WgnnConfig best;
  BaseStage base;
};

/// Index of the row with the highest validation accuracy; ties go to the
/// lexicographically smallest (eta0, eta1, eta2). Requires nonempty rows.
std::size_t best_grid_row(std::span<const GridRow> rows);

/// Evaluates every grid point on one shared base stage using up to `workers`
/// threads and picks the best row with best_grid_row.
GridResult grid_search(const Dataset& data, const Split& split, const WgnnConfig& base_cfg, const GridSpec& grid,
                       std::size_t workers = 1);

}  // namespace lnu
