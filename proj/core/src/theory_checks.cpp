#include "lnu/theory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

#include "lnu/error.hpp"

namespace lnu {
namespace {

// BFS restricted to nodes with block label `block`, from `from` to the first
// node satisfying `is_target`; returns the node sequence from..target.
Path walk_inside_block(const Graph& g, const std::vector<int>& labels, int block, NodeId from,
                       const std::function<bool(NodeId)>& is_target) {
  std::vector<NodeId> parent(g.num_nodes(), -2);
  std::deque<NodeId> queue{from};
  parent[static_cast<std::size_t>(from)] = -1;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    if (is_target(v)) {
      Path out;
      for (NodeId x = v; x != -1; x = parent[static_cast<std::size_t>(x)]) out.push_back(x);
      std::reverse(out.begin(), out.end());
      return out;
    }
    for (NodeId u : g.neighbors(v)) {
      if (labels[static_cast<std::size_t>(u)] == block && parent[static_cast<std::size_t>(u)] == -2) {
        parent[static_cast<std::size_t>(u)] = v;
        queue.push_back(u);
      }
    }
  }
  throw Error("monotone_path: no route inside level component");
}

struct Crossing {
  NodeId from;  // lower endpoint
  NodeId to;    // higher endpoint
};

bool induced_connected(const Graph& g, const NodeSet& s) {
  if (s.empty()) return false;
  const auto members = s.members();
  std::vector<char> seen(g.num_nodes(), 0);
  std::deque<NodeId> queue{members.front()};
  seen[static_cast<std::size_t>(members.front())] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : g.neighbors(v)) {
      if (s.contains(u) && !seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        queue.push_back(u);
      }
    }
  }
  return reached == s.size();
}

}  // namespace

Path monotone_path(const HarmonicProblem& p, const GraphSignal& f, NodeId v, double tolerance, double eps) {
  const Graph& g = p.graph();
  if (!is_connected(g)) throw Error("monotone_path: graph is disconnected");
  const double residual = verify_averaging(g, f, p.observed());
  if (residual > tolerance) {
    std::ostringstream msg;
    msg << "monotone_path: averaging residual " << residual << " exceeds tolerance " << tolerance;
    throw Error(msg.str());
  }

  const auto labels = level_components(g, f, eps);
  const int blocks = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(blocks));
  std::vector<char> has_o0(static_cast<std::size_t>(blocks), 0);
  std::vector<char> has_o1(static_cast<std::size_t>(blocks), 0);
  for (std::size_t x = 0; x < g.num_nodes(); ++x) {
    const auto b = static_cast<std::size_t>(labels[x]);
    members[b].push_back(static_cast<NodeId>(x));
    if (p.o0().contains(static_cast<NodeId>(x))) has_o0[b] = 1;
    if (p.o1().contains(static_cast<NodeId>(x))) has_o1[b] = 1;
  }

  // Smallest-id neighbor strictly above (or below) the block, with the
  // smallest-id block node reaching it.
  auto find_crossing = [&](int block, bool up) {
    NodeId best_out = -1;
    NodeId best_in = -1;
    for (NodeId x : members[static_cast<std::size_t>(block)]) {
      for (NodeId u : g.neighbors(x)) {
        if (labels[static_cast<std::size_t>(u)] == block) continue;
        const bool ok = up ? f[u] > f[x] : f[u] < f[x];
        if (ok && (best_out == -1 || u < best_out)) {
          best_out = u;
          best_in = x;
        }
      }
    }
    if (best_out == -1) {
      throw Error(std::string("monotone_path: level component has no ") + (up ? "ascent" : "descent"));
    }
    return std::pair<NodeId, NodeId>{best_in, best_out};
  };

  std::vector<Crossing> down;
  for (int cur = labels[static_cast<std::size_t>(v)]; !has_o0[static_cast<std::size_t>(cur)];) {
    auto [inside, outside] = find_crossing(cur, false);
    down.push_back({outside, inside});
    cur = labels[static_cast<std::size_t>(outside)];
  }
  std::vector<Crossing> up;
  for (int cur = labels[static_cast<std::size_t>(v)]; !has_o1[static_cast<std::size_t>(cur)];) {
    auto [inside, outside] = find_crossing(cur, true);
    up.push_back({inside, outside});
    cur = labels[static_cast<std::size_t>(outside)];
  }

  std::vector<Crossing> chain(down.rbegin(), down.rend());
  chain.insert(chain.end(), up.begin(), up.end());

  auto in_o0 = [&](NodeId x) { return p.o0().contains(x); };
  auto in_o1 = [&](NodeId x) { return p.o1().contains(x); };

  // Bottom block: from the first crossing (or v) back to the nearest o0 node.
  const NodeId bottom_exit = chain.empty() ? v : chain.front().from;
  Path path = walk_inside_block(g, labels, labels[static_cast<std::size_t>(bottom_exit)], bottom_exit, in_o0);
  std::reverse(path.begin(), path.end());

  for (std::size_t i = 0; i < chain.size(); ++i) {
    const NodeId entry = chain[i].to;
    const int block = labels[static_cast<std::size_t>(entry)];
    Path leg;
    if (i + 1 < chain.size()) {
      const NodeId exit = chain[i + 1].from;
      leg = walk_inside_block(g, labels, block, entry, [exit](NodeId x) { return x == exit; });
    } else {
      leg = walk_inside_block(g, labels, block, entry, in_o1);
    }
    path.insert(path.end(), leg.begin(), leg.end());
  }
  if (chain.empty()) {
    // v's block touches both o0 and o1; only possible for degenerate eps.
    Path leg = walk_inside_block(g, labels, labels[static_cast<std::size_t>(v)], path.back(), in_o1);
    path.insert(path.end(), leg.begin() + 1, leg.end());
  }
  return path;
}

std::string validate_monotone_path(const HarmonicProblem& p, const GraphSignal& f, NodeId v, const Path& path,
                                   double eps) {
  const Graph& g = p.graph();
  if (path.empty()) return "path is empty";
  if (!p.o0().contains(path.front())) return "path does not start in o0";
  if (!p.o1().contains(path.back())) return "path does not end in o1";
  const auto labels = level_components(g, f, eps);
  std::vector<char> seen(g.num_nodes(), 0);
  bool meets_v = false;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const NodeId x = path[i];
    if (x < 0 || static_cast<std::size_t>(x) >= g.num_nodes()) return "node id out of range";
    if (seen[static_cast<std::size_t>(x)]) return "node " + std::to_string(x) + " repeats";
    seen[static_cast<std::size_t>(x)] = 1;
    if (labels[static_cast<std::size_t>(x)] == labels[static_cast<std::size_t>(v)]) meets_v = true;
    if (i == 0) continue;
    const NodeId prev = path[i - 1];
    if (!g.has_edge(prev, x)) {
      return "nodes " + std::to_string(prev) + " and " + std::to_string(x) + " are not adjacent";
    }
    const bool same_block = labels[static_cast<std::size_t>(prev)] == labels[static_cast<std::size_t>(x)];
    if (!same_block && !(f[x] > f[prev])) {
      return "value does not increase from node " + std::to_string(prev) + " to node " + std::to_string(x);
    }
  }
  if (!meets_v) return "path misses the level component of node " + std::to_string(v);
  return {};
}

SublevelProfile sublevel_connectivity_profile(const Graph& g, const GraphSignal& f, const NodeSet& o, double eps) {
  SublevelProfile profile;
  if (!is_connected(g)) {
    profile.hypothesis_note = "graph is disconnected";
    return profile;
  }
  std::vector<double> interior;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (!o.contains(static_cast<NodeId>(v))) interior.push_back(f[static_cast<NodeId>(v)]);
  }
  std::sort(interior.begin(), interior.end());
  for (std::size_t i = 1; i < interior.size(); ++i) {
    if (interior[i] - interior[i - 1] <= eps) {
      profile.hypothesis_note = "interior values are not pairwise distinct";
      return profile;
    }
  }
  profile.hypothesis_met = true;

  // Interior values within eps of 0 or 1 are those levels up to roundoff;
  // they are not thresholds of their own.
  std::vector<double> thresholds{0.0};
  for (double x : interior) {
    if (x > eps && x < 1.0 - eps) thresholds.push_back(x);
  }
  for (double r : thresholds) {
    NodeSet below(g.num_nodes());
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      if (f[static_cast<NodeId>(v)] <= r + eps) below.insert(static_cast<NodeId>(v));
    }
    const NodeSet above = below.complement();
    SublevelStep step;
    step.threshold = r;
    step.sublevel_size = below.size();
    step.sublevel_connected = induced_connected(g, below);
    step.superlevel_size = above.size();
    step.superlevel_connected = induced_connected(g, above);
    profile.steps.push_back(step);
  }

  auto describe = [](const char* what, double r0, double r) {
    std::ostringstream msg;
    msg << what << " connected at r=" << r0 << " but not at r=" << r;
    return msg.str();
  };
  const auto& steps = profile.steps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!steps[i].sublevel_connected) continue;
    for (std::size_t j = i + 1; j < steps.size(); ++j) {
      if (steps[j].sublevel_size > 0 && !steps[j].sublevel_connected) {
        profile.violations.push_back(describe("sublevel set", steps[i].threshold, steps[j].threshold));
        break;
      }
    }
    break;  // the first connected step dominates all later ones
  }
  for (std::size_t i = steps.size(); i-- > 0;) {
    if (!steps[i].superlevel_connected) continue;
    for (std::size_t j = i; j-- > 0;) {
      if (steps[j].superlevel_size > 0 && !steps[j].superlevel_connected) {
        profile.violations.push_back(describe("superlevel set", steps[i].threshold, steps[j].threshold));
        break;
      }
    }
    break;
  }
  return profile;
}

double boundary_weighted_sum(const Graph& g, const GraphSignal& f, const NodeSet& v0) {
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const bool in_u = v0.contains(e.u);
    if (in_u != v0.contains(e.v)) total += in_u ? f[e.u] : f[e.v];
  }
  return total;
}

BoundaryIdentity boundary_sum_identity(const Graph& g, const GraphSignal& f, const NodeSet& o) {
  BoundaryIdentity out;
  for (std::size_t x = 0; x < g.num_nodes(); ++x) {
    const auto v = static_cast<NodeId>(x);
    if (o.contains(v)) continue;
    std::size_t observed_neighbors = 0;
    for (NodeId u : g.neighbors(v)) {
      if (o.contains(u)) {
        ++observed_neighbors;
        out.rhs += f[u];
      }
    }
    out.lhs += static_cast<double>(observed_neighbors) * f[v];
  }
  return out;
}

double BoundaryReport::rhs() const {
  return rhs_base - std::max(b * static_cast<double>(gamma_o1), a * static_cast<double>(gamma_o0));
}

BoundaryReport check_boundary_inequality(const HarmonicProblem& p, const GraphSignal& f, const NodeSet& v0,
                                         double slack) {
  const Graph& g = p.graph();
  const NodeSet v1 = v0.complement();
  const NodeSet edge0 = boundary(g, v0);
  const NodeSet edge1 = boundary(g, v1);
  for (NodeId x : p.o0().members()) {
    if (!v0.contains(x) || edge0.contains(x)) {
      throw Error("check_boundary_inequality: o0 node " + std::to_string(x) + " is not in the interior of V0");
    }
  }
  for (NodeId x : p.o1().members()) {
    if (!v1.contains(x) || edge1.contains(x)) {
      throw Error("check_boundary_inequality: o1 node " + std::to_string(x) + " is not in the interior of V1");
    }
  }

  BoundaryReport report;
  report.a = std::numeric_limits<double>::infinity();
  report.b = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < g.num_nodes(); ++x) {
    const auto v = static_cast<NodeId>(x);
    if (p.observed().contains(v)) continue;
    if (!(f[v] > 0.0 && f[v] < 1.0)) {
      std::ostringstream msg;
      msg << "check_boundary_inequality: value " << f[v] << " at unobserved node " << v << " is not inside (0,1)";
      throw Error(msg.str());
    }
    report.a = std::min(report.a, f[v]);
    report.b = std::min(report.b, 1.0 - f[v]);
  }
  if (!std::isfinite(report.a)) {
    report.a = 0.0;
    report.b = 0.0;
  }

  report.lhs = boundary_weighted_sum(g, f, v0);
  report.rhs_base = boundary_weighted_sum(g, f, v1);
  double o0_side = 0.0;
  double o1_side = 0.0;
  for (const Edge& e : edge_cut(g, p.o0())) {
    ++report.gamma_o0;
    o0_side += p.o0().contains(e.u) ? f[e.v] : f[e.u];
  }
  for (const Edge& e : edge_cut(g, p.o1())) {
    ++report.gamma_o1;
    o1_side += p.o1().contains(e.u) ? f[e.v] : f[e.u];
  }
  report.o0_identity_residual = report.lhs + o0_side - report.rhs_base;
  report.o1_identity_residual =
      report.lhs + static_cast<double>(report.gamma_o1) - report.rhs_base - o1_side;
  report.slack = slack;
  report.holds = report.lhs <= report.rhs() + slack;
  return report;
}

BottleneckCertificate bottleneck_certificate(const Graph& g, const NodeSet& separator, std::size_t limit) {
  const std::size_t n = g.num_nodes();
  if (n > limit) {
    throw Error("bottleneck_certificate: " + std::to_string(n) + " nodes exceeds the brute-force limit of " +
                std::to_string(limit));
  }
  if (!is_connected(g)) throw Error("bottleneck_certificate: graph is disconnected");

  const NodeSet outside = separator.complement();
  const auto sub = induced_subgraph(g, outside);
  const auto comp = connected_components(sub.graph);
  const int parts = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  if (parts != 2) {
    throw Error("bottleneck_certificate: separator leaves " + std::to_string(parts) +
                " components, expected exactly 2");
  }

  BottleneckCertificate cert;
  cert.u0 = NodeSet(n);
  cert.u1 = NodeSet(n);
  for (std::size_t i = 0; i < comp.size(); ++i) {
    (comp[i] == 0 ? cert.u0 : cert.u1).insert(sub.to_parent[i]);
  }

  NodeSet n0 = cert.u0;
  NodeSet n1 = cert.u1;
  for (NodeId s : separator.members()) {
    bool near0 = false;
    bool near1 = false;
    for (NodeId u : g.neighbors(s)) {
      near0 = near0 || cert.u0.contains(u);
      near1 = near1 || cert.u1.contains(u);
    }
    if (near0 && near1) {
      throw Error("bottleneck_certificate: separator node " + std::to_string(s) + " neighbors both components");
    }
    if (near0) n0.insert(s);
    if (near1) n1.insert(s);
  }

  cert.c1 = static_cast<double>(std::min(n0.size(), n1.size()));
  double ratio = std::numeric_limits<double>::infinity();
  for (const NodeSet* part : {&cert.u0, &cert.u1}) {
    const auto size = static_cast<double>(part->size());
    ratio = std::min(ratio, static_cast<double>(edge_cut_size(g, *part)) / size);
    if (part->size() >= 2) {
      ratio = std::min(ratio, static_cast<double>(min_cut_size(induced_subgraph(g, *part).graph, limit)) / size);
    }
  }
  cert.c0 = cert.c1 * ratio;

  const auto inner = induced_subgraph(g, separator);
  cert.cut_of_separator = inner.graph.num_nodes() >= 2 ? max_cut_size(inner.graph, limit) : 0;

  const auto cheeger = cheeger_constant(g, limit);
  cert.cheeger = cheeger.value;
  cert.cheeger_set = cheeger.minimizer;
  cert.applicable = static_cast<double>(cert.cut_of_separator) < cert.c0;
  cert.bound_holds = cert.cheeger <= static_cast<double>(cert.cut_of_separator) / cert.c1 + 1e-12;
  cert.crosses_separator =
      cheeger.minimizer.intersects(separator) && cheeger.minimizer.complement().intersects(separator);
  return cert;
}

}  // namespace lnu
