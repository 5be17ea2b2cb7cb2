#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lnu/graph.hpp"
#include "lnu/nonuniformity.hpp"

namespace lnu {

/// Ordered target nodes with the key each was sorted by. Ties always break
/// by ascending node id.
struct Ranking {
  std::vector<NodeId> order;
  std::vector<std::pair<double, double>> keys;  // aligned with order
};

/// Sorts target by label non-uniformity, largest first (key = (w, 0)).
Ranking rank_m2(const DistributionTable& table, const NodeSet& target);

/// Geometric ranking: key (f1, f2) ascending, where f1 is the hop distance
/// to the nearest training node and f2 = 1 - g, g being the fraction of the
/// most common label among all training nodes at that distance. Nodes with
/// no reachable training node get (inf, inf) and sort last.
///
/// `labels` is indexed by node id and read only on training nodes.
Ranking rank_m1(const Graph& g, const NodeSet& train, std::span<const int> labels, const NodeSet& target);

struct CurvePoint {
  double alpha = 0.0;
  double accuracy = 0.0;
};

/// Number of top-ranked nodes kept for a fraction alpha of `total`:
/// ceil(alpha * total), at least 1 when total > 0.
std::size_t top_count(double alpha, std::size_t total);

/// Accuracy over the top ceil(alpha |T|) nodes of the ranking for each alpha.
/// `predictions` and `truth` are indexed by node id.
std::vector<CurvePoint> selection_accuracy_curve(const Ranking& ranking, std::span<const int> predictions,
                                                 std::span<const int> truth, std::span<const double> alphas);

}  // namespace lnu
