#pragma once

#include "lnu/graph.hpp"

namespace lnu {

/// Train / validation / test node sets over one graph.
struct Split {
  NodeSet train;
  NodeSet val;
  NodeSet test;

  /// Throws unless the sets are pairwise disjoint, share a universe and
  /// train is nonempty.
  void validate() const;
};

}  // namespace lnu
