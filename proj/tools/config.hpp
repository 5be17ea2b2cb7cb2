#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lnu/dataset.hpp"
#include "lnu/graph.hpp"
#include "lnu/wgnn.hpp"

namespace lnu::cli {

struct DatasetRef {
  enum class Kind { files, manifest, sbm, path_graph } kind = Kind::files;
  std::filesystem::path edges;
  std::filesystem::path features;
  std::filesystem::path labels;
  std::filesystem::path manifest;
  SbmParams sbm;
  std::size_t path_nodes = 0;
};

struct SplitSpec {
  std::size_t per_class_train = 20;
  std::size_t val_size = 500;
  std::size_t test_size = 1000;
  std::uint64_t seed = 0;
};

struct VerifySpec {
  int observed_class = 0;
  std::optional<std::vector<NodeId>> o0;
  std::optional<std::vector<NodeId>> o1;
  std::size_t instances = 50;
  std::size_t max_nodes = 30;
  std::size_t paths_per_instance = 20;
  bool corrupt = false;
  std::uint64_t seed = 0;
};

/// One experiment per JSON file. Everything but "dataset" has a default.
/// Relative paths are taken relative to the working directory.
struct ExperimentConfig {
  nlohmann::json raw;
  DatasetRef dataset;
  SplitSpec split;
  WgnnConfig wgnn;
  GridSpec grid;
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds{0};
  bool share_gprime = false;
  std::optional<std::filesystem::path> stored_gprime;
  std::optional<std::filesystem::path> checkpoint;
  VerifySpec verify;
  std::filesystem::path out = "out";
};

/// Parse errors carry "file:line:col" context.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const nlohmann::json& doc);

/// 0.05, 0.10, ..., 1.00
std::vector<double> default_alphas();

Dataset load_dataset(const DatasetRef& ref);
Split make_split(const Dataset& data, const SplitSpec& spec);

}  // namespace lnu::cli
