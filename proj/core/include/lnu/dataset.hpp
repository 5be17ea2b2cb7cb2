#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lnu/gcn.hpp"
#include "lnu/graph.hpp"
#include "lnu/split.hpp"

namespace lnu {

struct Dataset {
  std::string name;
  Graph graph;
  FeatureMatrix features;
  std::vector<int> labels;  // class id per node, 0..k-1
  std::size_t num_classes = 0;

  std::size_t num_nodes() const { return graph.num_nodes(); }
  /// Throws unless shapes agree and labels lie in 0..k-1.
  void validate() const;
};

/// Reads edges.tsv (edge-list format), features.csv ("node,x0,x1,..." header,
/// one row per node) and labels.csv ("node,label" header). The node count is
/// the number of label rows; k is max label + 1.
Dataset load_dataset(const std::filesystem::path& edges, const std::filesystem::path& features,
                     const std::filesystem::path& labels);

/// Manifest JSON: {"name": ..., "edges": ..., "features": ..., "labels": ..., "k": ...}.
/// Relative paths resolve against the manifest's directory. When "k" is
/// present it overrides the inferred class count (it must not be smaller).
Dataset load_manifest(const std::filesystem::path& manifest);

/// Writes edges.tsv, features.csv, labels.csv and manifest.json into `dir`.
/// Features are written with round-trip precision.
void write_dataset(const std::filesystem::path& dir, const Dataset& data);

struct SbmParams {
  std::vector<std::size_t> block_sizes;
  double p_in = 0.1;
  double p_out = 0.01;
  std::size_t feature_dim = 16;
  /// Distance between any two class-mean vectors; noise is unit Gaussian.
  double signal = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Stochastic block model: node labels are block indices (blocks laid out
/// contiguously), each intra-block pair is an edge with probability p_in and
/// each inter-block pair with probability p_out. Deterministic in the seed.
Dataset generate_sbm(const SbmParams& params);

/// Exactly per_class_train random nodes of every class go to train, then
/// val_size and test_size nodes are drawn without replacement from the rest.
/// Deterministic in the seed; throws naming the class that is too small.
Split make_split(std::span<const int> labels, std::size_t num_classes, std::size_t per_class_train,
                 std::size_t val_size, std::size_t test_size, std::uint64_t seed);

}  // namespace lnu
