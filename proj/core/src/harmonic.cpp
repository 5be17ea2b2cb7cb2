#include "lnu/harmonic.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "lnu/error.hpp"

namespace lnu {

GraphSignal::GraphSignal(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw Error("GraphSignal: non-finite value at node " + std::to_string(i));
  }
}

HarmonicProblem::HarmonicProblem(Graph graph, NodeSet o0, NodeSet o1)
    : graph_(std::move(graph)), o0_(std::move(o0)), o1_(std::move(o1)) {
  const std::size_t n = graph_.num_nodes();
  if (o0_.universe() != n || o1_.universe() != n) throw Error("HarmonicProblem: node sets sized for another graph");
  if (o0_.empty() || o1_.empty()) throw Error("HarmonicProblem: o0 and o1 must be nonempty");
  if (o0_.intersects(o1_)) throw Error("HarmonicProblem: o0 and o1 overlap");
  observed_ = o0_.united(o1_);
  const auto comp = connected_components(graph_);
  std::vector<char> touched(n, 0);
  for (NodeId v : observed_.members()) touched[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (!touched[static_cast<std::size_t>(comp[v])]) {
      throw Error("HarmonicProblem: component containing node " + std::to_string(v) +
                  " has no observed node; the interpolation is undetermined there");
    }
  }
}

double laplacian_quadratic(const Graph& g, const GraphSignal& f) {
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = f[e.u] - f[e.v];
    total += d * d;
  }
  return total;
}

namespace detail {

GraphSignal solve_dirichlet(const Graph& g, const NodeSet& clamped, std::span<const double> values) {
  const std::size_t n = g.num_nodes();
  std::vector<double> out(n, 0.0);
  std::vector<int> index(n, -1);
  std::vector<NodeId> interior;
  double lo = 0.0;
  double hi = 0.0;
  bool have_range = false;
  for (std::size_t v = 0; v < n; ++v) {
    if (clamped.contains(static_cast<NodeId>(v))) {
      out[v] = values[v];
      lo = have_range ? std::min(lo, values[v]) : values[v];
      hi = have_range ? std::max(hi, values[v]) : values[v];
      have_range = true;
    } else {
      index[v] = static_cast<int>(interior.size());
      interior.push_back(static_cast<NodeId>(v));
    }
  }
  if (interior.empty()) return GraphSignal(std::move(out));

  const auto m = static_cast<Eigen::Index>(interior.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (NodeId u : g.neighbors(interior[static_cast<std::size_t>(i)])) {
      if (index[static_cast<std::size_t>(u)] < 0) rhs[i] += values[static_cast<std::size_t>(u)];
    }
  }

  Eigen::VectorXd x;
  if (interior.size() <= kDenseSolveLimit) {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const NodeId v = interior[static_cast<std::size_t>(i)];
      block(i, i) = static_cast<double>(g.degree(v));
      for (NodeId u : g.neighbors(v)) {
        const int j = index[static_cast<std::size_t>(u)];
        if (j >= 0) block(i, j) = -1.0;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() != Eigen::Success) {
      throw Error("harmonic solve: interior Laplacian block is singular (a component has no clamped node)");
    }
    x = llt.solve(rhs);
  } else {
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index i = 0; i < m; ++i) {
      const NodeId v = interior[static_cast<std::size_t>(i)];
      triplets.emplace_back(i, i, static_cast<double>(g.degree(v)));
      for (NodeId u : g.neighbors(v)) {
        const int j = index[static_cast<std::size_t>(u)];
        if (j >= 0) triplets.emplace_back(i, j, -1.0);
      }
    }
    Eigen::SparseMatrix<double> block(m, m);
    block.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(kSolverTolerance);
    cg.setMaxIterations(static_cast<Eigen::Index>(10 * n));
    cg.compute(block);
    x = cg.solve(rhs);
    if (cg.info() != Eigen::Success) throw Error("harmonic solve: conjugate gradient did not converge");
  }

  for (Eigen::Index i = 0; i < m; ++i) {
    double value = x[i];
    // Maximum principle: exact solutions lie in [lo, hi]; trim roundoff only.
    if (have_range) {
      if (value < lo && lo - value < 1e-9) value = lo;
      if (value > hi && value - hi < 1e-9) value = hi;
    }
    out[static_cast<std::size_t>(interior[static_cast<std::size_t>(i)])] = value;
  }
  return GraphSignal(std::move(out));
}

}  // namespace detail

GraphSignal solve_harmonic(const HarmonicProblem& p) {
  std::vector<double> values(p.graph().num_nodes(), 0.0);
  for (NodeId v : p.o1().members()) values[static_cast<std::size_t>(v)] = 1.0;
  return detail::solve_dirichlet(p.graph(), p.observed(), values);
}

double verify_averaging(const Graph& g, const GraphSignal& f, const NodeSet& o) {
  double worst = 0.0;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto id = static_cast<NodeId>(v);
    if (o.contains(id)) continue;
    const auto adj = g.neighbors(id);
    if (adj.empty()) throw Error("verify_averaging: node " + std::to_string(v) + " is isolated and unobserved");
    double sum = 0.0;
    for (NodeId u : adj) sum += f[u];
    worst = std::max(worst, std::abs(f[id] - sum / static_cast<double>(adj.size())));
  }
  return worst;
}

std::vector<int> level_components(const Graph& g, const GraphSignal& f, double eps) {
  std::vector<int> label(g.num_nodes(), -1);
  int current = 0;
  std::deque<NodeId> queue;
  for (std::size_t start = 0; start < g.num_nodes(); ++start) {
    if (label[start] != -1) continue;
    label[start] = current;
    queue.push_back(static_cast<NodeId>(start));
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      for (NodeId u : g.neighbors(v)) {
        auto& lu = label[static_cast<std::size_t>(u)];
        if (lu == -1 && std::abs(f[u] - f[v]) <= eps) {
          lu = current;
          queue.push_back(u);
        }
      }
    }
    ++current;
  }
  return label;
}

}  // namespace lnu
