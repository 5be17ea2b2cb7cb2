#include "lnu/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "lnu/error.hpp"

namespace lnu {
namespace {

Ranking sort_by_key(std::vector<NodeId> nodes, std::vector<std::pair<double, double>> keys_by_node,
                    bool descending) {
  std::stable_sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
    const auto& ka = keys_by_node[static_cast<std::size_t>(a)];
    const auto& kb = keys_by_node[static_cast<std::size_t>(b)];
    if (ka != kb) return descending ? ka > kb : ka < kb;
    return a < b;
  });
  Ranking out;
  out.order = std::move(nodes);
  out.keys.reserve(out.order.size());
  for (NodeId v : out.order) out.keys.push_back(keys_by_node[static_cast<std::size_t>(v)]);
  return out;
}

}  // namespace

Ranking rank_m2(const DistributionTable& table, const NodeSet& target) {
  const auto w = table.non_uniformity();
  std::vector<std::pair<double, double>> keys(w.size());
  for (std::size_t v = 0; v < w.size(); ++v) keys[v] = {w[v], 0.0};
  return sort_by_key(target.members(), std::move(keys), /*descending=*/true);
}

Ranking rank_m1(const Graph& g, const NodeSet& train, std::span<const int> labels, const NodeSet& target) {
  if (train.empty()) throw Error("rank_m1: empty training set");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> keys(g.num_nodes(), {inf, inf});
  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<NodeId> touched;

  for (NodeId v : target.members()) {
    // BFS layer by layer until a layer holds training nodes.
    std::map<int, std::size_t> label_counts;
    std::size_t found = 0;
    int found_at = -1;
    std::deque<NodeId> queue{v};
    dist[static_cast<std::size_t>(v)] = 0;
    touched.assign(1, v);
    while (!queue.empty()) {
      const NodeId x = queue.front();
      queue.pop_front();
      const int dx = dist[static_cast<std::size_t>(x)];
      if (found_at >= 0 && dx > found_at) break;
      if (train.contains(x)) {
        found_at = dx;
        ++found;
        ++label_counts[labels[static_cast<std::size_t>(x)]];
        continue;
      }
      if (found_at >= 0) continue;
      for (NodeId u : g.neighbors(x)) {
        if (dist[static_cast<std::size_t>(u)] == -1) {
          dist[static_cast<std::size_t>(u)] = dx + 1;
          touched.push_back(u);
          queue.push_back(u);
        }
      }
    }
    for (NodeId x : touched) dist[static_cast<std::size_t>(x)] = -1;
    if (found == 0) continue;
    std::size_t majority = 0;
    for (const auto& [label, count] : label_counts) majority = std::max(majority, count);
    const double share = static_cast<double>(majority) / static_cast<double>(found);
    keys[static_cast<std::size_t>(v)] = {static_cast<double>(found_at), 1.0 - share};
  }
  return sort_by_key(target.members(), std::move(keys), /*descending=*/false);
}

std::size_t top_count(double alpha, std::size_t total) {
  if (total == 0) return 0;
  // Guard against alpha * total landing a hair above an integer.
  auto count = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(total) - 1e-9));
  return std::clamp<std::size_t>(count, 1, total);
}

std::vector<CurvePoint> selection_accuracy_curve(const Ranking& ranking, std::span<const int> predictions,
                                                 std::span<const int> truth, std::span<const double> alphas) {
  const std::size_t total = ranking.order.size();
  if (total == 0) throw Error("selection_accuracy_curve: empty test set");
  std::vector<std::size_t> correct_prefix(total + 1, 0);
  for (std::size_t i = 0; i < total; ++i) {
    const auto v = static_cast<std::size_t>(ranking.order[i]);
    correct_prefix[i + 1] = correct_prefix[i] + (predictions[v] == truth[v] ? 1 : 0);
  }
  std::vector<CurvePoint> curve;
  curve.reserve(alphas.size());
  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("selection_accuracy_curve: alpha must lie in (0, 1]");
    const std::size_t top = top_count(alpha, total);
    curve.push_back({alpha, static_cast<double>(correct_prefix[top]) / static_cast<double>(top)});
  }
  return curve;
}

}  // namespace lnu
