#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lnu/cuts.hpp"
#include "lnu/graph.hpp"
#include "lnu/harmonic.hpp"

namespace lnu {

// Executable checkers for the structural properties of the harmonic
// interpolation: monotone paths, sublevel-set connectivity, boundary sums
// and the bottleneck bound on the Cheeger constant.

inline constexpr double kAveragingTolerance = 1e-8;

using Path = std::vector<NodeId>;

/// A path from o0 to o1 that passes through the level component of v and
/// along which f never decreases (it stays inside one level component or
/// strictly increases). Built by walking crossing edges down from v's level
/// component to an o0 component and up to an o1 component, taking the
/// smallest-id admissible neighbor each time, then stitching the crossings
/// together with shortest paths inside each component.
///
/// Throws if f violates the averaging property by more than `tolerance`, or
/// if the graph is disconnected.
Path monotone_path(const HarmonicProblem& p, const GraphSignal& f, NodeId v,
                   double tolerance = kAveragingTolerance, double eps = kLevelTolerance);

/// Empty string when `path` satisfies the monotone-path contract for v,
/// otherwise a description of the first defect.
std::string validate_monotone_path(const HarmonicProblem& p, const GraphSignal& f, NodeId v, const Path& path,
                                   double eps = kLevelTolerance);

struct SublevelStep {
  double threshold = 0.0;
  std::size_t sublevel_size = 0;  // |{f <= r}|
  bool sublevel_connected = false;
  std::size_t superlevel_size = 0;  // |{f > r}|
  bool superlevel_connected = false;
};

struct SublevelProfile {
  bool hypothesis_met = false;
  std::string hypothesis_note;
  std::vector<SublevelStep> steps;  // thresholds ascending: 0, then each interior value in (0,1)
  std::vector<std::string> violations;

  bool ok() const { return !hypothesis_met || violations.empty(); }
};

/// Sweeps the thresholds and checks that connected sublevel sets stay
/// connected as r grows and connected superlevel sets stay connected as r
/// shrinks. Values within eps of a threshold count as below it. Requires
/// pairwise-distinct values off o (and a connected graph);
/// otherwise reports the hypothesis as unmet and judges nothing.
SublevelProfile sublevel_connectivity_profile(const Graph& g, const GraphSignal& f, const NodeSet& o,
                                              double eps = kLevelTolerance);

/// Sum of f at the v0-side endpoint of every edge of edge_cut(v0).
double boundary_weighted_sum(const Graph& g, const GraphSignal& f, const NodeSet& v0);

struct BoundaryIdentity {
  double lhs = 0.0;  // sum over v' in O' of (#neighbors of v' in o) * f_v'
  double rhs = 0.0;  // sum over v' in O', over neighbors v in o, of f_v
};

/// Both sides of the identity over the immediate neighbors O' of o; equal
/// whenever f satisfies the averaging property off o.
BoundaryIdentity boundary_sum_identity(const Graph& g, const GraphSignal& f, const NodeSet& o);

struct BoundaryReport {
  double lhs = 0.0;       // A(f, V0)
  double rhs_base = 0.0;  // A(f, V1)
  double a = 0.0;         // min f off o
  double b = 0.0;         // min (1 - f) off o
  std::size_t gamma_o0 = 0;
  std::size_t gamma_o1 = 0;
  double slack = 0.0;
  bool holds = false;
  // A(V0) + sum_{Gamma(o0)} f_v' - A(V1), and
  // A(V0) + |Gamma(o1)| - A(V1) - sum_{Gamma(o1)} f_v'; both vanish exactly.
  double o0_identity_residual = 0.0;
  double o1_identity_residual = 0.0;

  double rhs() const;
};

/// Checks A(f,V0) <= A(f,V1) - max(b |Gamma(o1)|, a |Gamma(o0)|) up to `slack`.
/// Requires o0 inside the interior of v0, o1 inside the interior of its
/// complement and 0 < f < 1 off o; violations throw and name the node.
BoundaryReport check_boundary_inequality(const HarmonicProblem& p, const GraphSignal& f, const NodeSet& v0,
                                         double slack = 10 * kSolverTolerance);

struct BottleneckCertificate {
  double c0 = 0.0;
  double c1 = 0.0;
  std::size_t cut_of_separator = 0;  // C(G[V'])
  double cheeger = 0.0;              // h(G)
  NodeSet cheeger_set;
  bool applicable = false;           // C(G[V']) < c0
  bool bound_holds = false;          // h(G) <= C(G[V']) / c1
  bool crosses_separator = false;    // minimizer meets V' and its complement meets V'
  NodeSet u0;
  NodeSet u1;
};

/// Requires a connected graph whose nodes outside `separator` form exactly
/// two components U0, U1 (U0 holds the smaller node id) with disjoint
/// neighbor sets inside the separator, and n within the brute-force limit.
///
/// With N_i = U_i plus its separator neighbors,
///   c1 = min(|N0|, |N1|)
///   c0 = c1 * min(|Gamma(U0)|/|U0|, |Gamma(U1)|/|U1|, c(G[U0])/|U0|, c(G[U1])/|U1|)
/// where a single-node U_i contributes no min-cut term.
BottleneckCertificate bottleneck_certificate(const Graph& g, const NodeSet& separator,
                                             std::size_t limit = kBruteForceLimit);

}  // namespace lnu
