#include "lnu/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lnu/error.hpp"
#include "lnu/graph_io.hpp"
#include "lnu/io_util.hpp"
#include "rng.hpp"

namespace lnu {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (table.header.empty()) {
      table.header = split_csv(line);
      continue;
    }
    table.rows.push_back(split_csv(line));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) throw Error(path.string() + ": missing header row");
  return table;
}

long long parse_int(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw Error(path.string() + " line " + std::to_string(line) + ": expected an integer, got '" + text + "'");
  }
}

double parse_double(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw Error(path.string() + " line " + std::to_string(line) + ": expected a number, got '" + text + "'");
  }
}

}  // namespace

void Split::validate() const {
  const std::size_t n = train.universe();
  if (val.universe() != n || test.universe() != n) throw Error("Split: sets sized for different graphs");
  if (train.empty()) throw Error("Split: empty training set");
  if (train.intersects(val) || train.intersects(test) || val.intersects(test)) {
    throw Error("Split: train, validation and test sets overlap");
  }
}

void Dataset::validate() const {
  const std::size_t n = graph.num_nodes();
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw Error("dataset " + name + ": " + std::to_string(features.rows()) + " feature rows for " +
                std::to_string(n) + " nodes");
  }
  if (labels.size() != n) throw Error("dataset " + name + ": label count does not match node count");
  for (std::size_t v = 0; v < n; ++v) {
    if (labels[v] < 0 || static_cast<std::size_t>(labels[v]) >= num_classes) {
      throw Error("dataset " + name + ": label " + std::to_string(labels[v]) + " of node " + std::to_string(v) +
                  " outside 0.." + std::to_string(num_classes - 1));
    }
  }
}

Dataset load_dataset(const std::filesystem::path& edges, const std::filesystem::path& features,
                     const std::filesystem::path& labels) {
  Dataset data;
  data.name = edges.parent_path().filename().string();

  const CsvTable label_rows = read_csv(labels);
  const std::size_t n = label_rows.rows.size();
  data.labels.assign(n, -1);
  int max_label = -1;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = label_rows.rows[r];
    const std::size_t line = label_rows.line_numbers[r];
    if (row.size() != 2) throw Error(labels.string() + " line " + std::to_string(line) + ": expected node,label");
    const long long id = parse_int(row[0], labels, line);
    const long long label = parse_int(row[1], labels, line);
    if (id < 0 || static_cast<std::size_t>(id) >= n || data.labels[static_cast<std::size_t>(id)] != -1) {
      throw Error(labels.string() + " line " + std::to_string(line) + ": node id " + std::to_string(id) +
                  " is out of range or repeated");
    }
    if (label < 0) throw Error(labels.string() + " line " + std::to_string(line) + ": negative label");
    data.labels[static_cast<std::size_t>(id)] = static_cast<int>(label);
    max_label = std::max(max_label, static_cast<int>(label));
  }
  data.num_classes = static_cast<std::size_t>(max_label + 1);

  const CsvTable feature_rows = read_csv(features);
  if (feature_rows.rows.size() != n) {
    throw Error(features.string() + ": " + std::to_string(feature_rows.rows.size()) + " feature rows but " +
                std::to_string(n) + " labelled nodes");
  }
  const std::size_t d = feature_rows.header.size() - 1;
  data.features = FeatureMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<char> seen(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = feature_rows.rows[r];
    const std::size_t line = feature_rows.line_numbers[r];
    if (row.size() != d + 1) {
      throw Error(features.string() + " line " + std::to_string(line) + ": expected " + std::to_string(d + 1) +
                  " fields");
    }
    const long long id = parse_int(row[0], features, line);
    if (id < 0 || static_cast<std::size_t>(id) >= n || seen[static_cast<std::size_t>(id)]) {
      throw Error(features.string() + " line " + std::to_string(line) + ": node id " + std::to_string(id) +
                  " is out of range or repeated");
    }
    seen[static_cast<std::size_t>(id)] = 1;
    for (std::size_t j = 0; j < d; ++j) {
      data.features(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(j)) =
          parse_double(row[j + 1], features, line);
    }
  }

  try {
    data.graph = read_edge_list(edges, n);
  } catch (const Error& e) {
    throw Error(edges.string() + ": " + e.what());
  }
  data.validate();
  return data;
}

Dataset load_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open manifest " + manifest.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest " + manifest.string() + ": " + e.what());
  }
  const auto base = manifest.parent_path();
  auto resolve = [&](const char* key) {
    if (!doc.contains(key)) throw Error("manifest " + manifest.string() + ": missing \"" + key + "\"");
    std::filesystem::path p = doc.at(key).get<std::string>();
    return p.is_relative() ? base / p : p;
  };
  Dataset data = load_dataset(resolve("edges"), resolve("features"), resolve("labels"));
  data.name = doc.value("name", manifest.parent_path().filename().string());
  if (doc.contains("k")) {
    const auto k = doc.at("k").get<std::size_t>();
    if (k < data.num_classes) {
      throw Error("manifest " + manifest.string() + ": k=" + std::to_string(k) + " but labels reach " +
                  std::to_string(data.num_classes - 1));
    }
    data.num_classes = k;
  }
  return data;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& data) {
  write_edge_list(dir / "edges.tsv", data.graph);

  std::ostringstream features;
  features.precision(17);
  features << "node";
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) features << ",x" << j;
  features << '\n';
  for (Eigen::Index v = 0; v < data.features.rows(); ++v) {
    features << v;
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) features << ',' << data.features(v, j);
    features << '\n';
  }
  write_file_atomic(dir / "features.csv", features.str());

  std::ostringstream labels;
  labels << "node,label\n";
  for (std::size_t v = 0; v < data.labels.size(); ++v) labels << v << ',' << data.labels[v] << '\n';
  write_file_atomic(dir / "labels.csv", labels.str());

  nlohmann::json manifest;
  manifest["name"] = data.name;
  manifest["edges"] = "edges.tsv";
  manifest["features"] = "features.csv";
  manifest["labels"] = "labels.csv";
  manifest["k"] = data.num_classes;
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

void SbmParams::validate() const {
  if (block_sizes.empty()) throw Error("SbmParams: no blocks");
  for (std::size_t s : block_sizes) {
    if (s == 0) throw Error("SbmParams: block sizes must be positive");
  }
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
    throw Error("SbmParams: probabilities must lie in [0, 1]");
  }
  if (feature_dim < block_sizes.size()) {
    throw Error("SbmParams: feature_dim must be at least the number of blocks");
  }
  if (!(signal >= 0.0)) throw Error("SbmParams: signal must be nonnegative");
}

Dataset generate_sbm(const SbmParams& params) {
  params.validate();
  Dataset data;
  data.name = "sbm";
  data.num_classes = params.block_sizes.size();
  for (std::size_t b = 0; b < params.block_sizes.size(); ++b) {
    data.labels.insert(data.labels.end(), params.block_sizes[b], static_cast<int>(b));
  }
  const std::size_t n = data.labels.size();

  auto edge_rng = detail::derived_stream(params.seed, 11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = data.labels[u] == data.labels[v] ? params.p_in : params.p_out;
      if (unit(edge_rng) < p) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
  }
  data.graph = Graph::from_edges(n, edges);

  // Class means a * e_c are pairwise `signal` apart.
  const double scale = params.signal / std::sqrt(2.0);
  auto feature_rng = detail::derived_stream(params.seed, 12);
  std::normal_distribution<double> noise(0.0, 1.0);
  data.features = FeatureMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(params.feature_dim));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < params.feature_dim; ++j) {
      const double mean = static_cast<std::size_t>(data.labels[v]) == j ? scale : 0.0;
      data.features(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)) = mean + noise(feature_rng);
    }
  }
  return data;
}

Split make_split(std::span<const int> labels, std::size_t num_classes, std::size_t per_class_train,
                 std::size_t val_size, std::size_t test_size, std::uint64_t seed) {
  const std::size_t n = labels.size();
  auto rng = detail::derived_stream(seed, 21);
  std::vector<std::vector<NodeId>> by_class(num_classes);
  for (std::size_t v = 0; v < n; ++v) {
    if (labels[v] < 0 || static_cast<std::size_t>(labels[v]) >= num_classes) {
      throw Error("make_split: node " + std::to_string(v) + " has label outside 0.." +
                  std::to_string(num_classes - 1));
    }
    by_class[static_cast<std::size_t>(labels[v])].push_back(static_cast<NodeId>(v));
  }
  Split split{NodeSet(n), NodeSet(n), NodeSet(n)};
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& nodes = by_class[c];
    if (nodes.size() < per_class_train) {
      throw Error("make_split: class " + std::to_string(c) + " has " + std::to_string(nodes.size()) +
                  " nodes, fewer than the " + std::to_string(per_class_train) + " training nodes requested");
    }
    std::shuffle(nodes.begin(), nodes.end(), rng);
    for (std::size_t i = 0; i < per_class_train; ++i) split.train.insert(nodes[i]);
  }
  std::vector<NodeId> rest = split.train.complement().members();
  if (val_size + test_size > rest.size()) {
    throw Error("make_split: validation + test size " + std::to_string(val_size + test_size) + " exceeds the " +
                std::to_string(rest.size()) + " nodes left after training selection");
  }
  std::shuffle(rest.begin(), rest.end(), rng);
  for (std::size_t i = 0; i < val_size; ++i) split.val.insert(rest[i]);
  for (std::size_t i = val_size; i < val_size + test_size; ++i) split.test.insert(rest[i]);
  split.validate();
  return split;
}

}  // namespace lnu
