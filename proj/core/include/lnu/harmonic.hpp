#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lnu/graph.hpp"

namespace lnu {

/// One finite real value per node of a graph.
class GraphSignal {
 public:
  GraphSignal() = default;
  explicit GraphSignal(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit GraphSignal(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](NodeId v) const { return values_[static_cast<std::size_t>(v)]; }
  double& operator[](NodeId v) { return values_[static_cast<std::size_t>(v)]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Interpolation problem: the signal is clamped to 0 on o0 and 1 on o1.
/// Construction checks that o0 and o1 are nonempty and disjoint and that
/// every connected component touches o0 | o1 (otherwise the interior
/// Laplacian block is singular).
class HarmonicProblem {
 public:
  HarmonicProblem(Graph graph, NodeSet o0, NodeSet o1);

  const Graph& graph() const { return graph_; }
  const NodeSet& o0() const { return o0_; }
  const NodeSet& o1() const { return o1_; }
  /// o0 | o1
  const NodeSet& observed() const { return observed_; }

 private:
  Graph graph_;
  NodeSet o0_;
  NodeSet o1_;
  NodeSet observed_;
};

inline constexpr double kSolverTolerance = 1e-10;
inline constexpr double kLevelTolerance = 1e-9;
inline constexpr std::size_t kDenseSolveLimit = 2000;

/// Sum over edges of (f_u - f_v)^2, i.e. f^T L f.
double laplacian_quadratic(const Graph& g, const GraphSignal& f);

/// Minimizer of f^T L f subject to the clamped values.
GraphSignal solve_harmonic(const HarmonicProblem& p);

namespace detail {
/// Dirichlet solve with arbitrary clamped values (used to check linearity).
/// `values` is read only on `clamped` nodes.
GraphSignal solve_dirichlet(const Graph& g, const NodeSet& clamped, std::span<const double> values);
}  // namespace detail

/// max over v not in o of |f_v - mean of f over neighbors of v|.
/// Throws if some v outside o is isolated.
double verify_averaging(const Graph& g, const GraphSignal& f, const NodeSet& o);

/// Block label per node: u and v share a block iff they are joined by a path
/// whose consecutive values differ by at most eps. Labels follow the
/// smallest node id of each block.
std::vector<int> level_components(const Graph& g, const GraphSignal& f, double eps = kLevelTolerance);

}  // namespace lnu
