#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "lnu/error.hpp"
#include "lnu/fixtures.hpp"

namespace lnu::cli {
namespace {

using nlohmann::json;

// Typed access to one JSON object with errors naming the key path.
class Section {
 public:
  Section(const json& obj, std::string path, std::initializer_list<const char*> allowed) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw Error(where() + " must be an object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& item : obj_.items()) {
      if (!known.count(item.key())) throw Error("unknown key " + key_path(item.key()));
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }
  const json& at(const char* key) const { return obj_.at(key); }
  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <typename T>
  void read(const char* key, T& target) const {
    if (!obj_.contains(key)) return;
    try {
      target = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw Error(key_path(key) + ": " + e.what());
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
};

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

DatasetRef parse_dataset(const json& obj) {
  const Section s(obj, "dataset", {"edges", "features", "labels", "manifest", "sbm", "path_graph"});
  DatasetRef ref;
  if (s.has("manifest")) {
    ref.kind = DatasetRef::Kind::manifest;
    ref.manifest = s.at("manifest").get<std::string>();
  } else if (s.has("sbm")) {
    ref.kind = DatasetRef::Kind::sbm;
    const Section p(s.at("sbm"), "dataset.sbm", {"block_sizes", "p_in", "p_out", "feature_dim", "signal", "seed"});
    p.read("block_sizes", ref.sbm.block_sizes);
    p.read("p_in", ref.sbm.p_in);
    p.read("p_out", ref.sbm.p_out);
    p.read("feature_dim", ref.sbm.feature_dim);
    p.read("signal", ref.sbm.signal);
    p.read("seed", ref.sbm.seed);
    ref.sbm.validate();
  } else if (s.has("path_graph")) {
    ref.kind = DatasetRef::Kind::path_graph;
    s.read("path_graph", ref.path_nodes);
    if (ref.path_nodes < 2) throw Error("dataset.path_graph needs at least 2 nodes");
  } else {
    if (!s.has("edges") || !s.has("features") || !s.has("labels")) {
      throw Error("dataset needs \"manifest\", \"sbm\", \"path_graph\" or all of \"edges\", \"features\", \"labels\"");
    }
    ref.edges = s.at("edges").get<std::string>();
    ref.features = s.at("features").get<std::string>();
    ref.labels = s.at("labels").get<std::string>();
  }
  return ref;
}

}  // namespace

std::vector<double> default_alphas() {
  std::vector<double> alphas;
  for (int i = 1; i <= 20; ++i) alphas.push_back(i / 20.0);
  return alphas;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    throw Error(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

ExperimentConfig parse_config(const json& doc) {
  const Section top(doc, "", {"dataset", "split", "train", "wgnn", "grid", "alphas", "seeds", "share_gprime",
                              "stored_gprime", "checkpoint", "verify", "out"});
  ExperimentConfig cfg;
  cfg.raw = doc;
  if (!top.has("dataset")) throw Error("missing \"dataset\"");
  cfg.dataset = parse_dataset(top.at("dataset"));

  if (top.has("split")) {
    const Section s(top.at("split"), "split", {"per_class_train", "val_size", "test_size", "seed"});
    s.read("per_class_train", cfg.split.per_class_train);
    s.read("val_size", cfg.split.val_size);
    s.read("test_size", cfg.split.test_size);
    s.read("seed", cfg.split.seed);
  }

  if (top.has("train")) {
    const Section s(top.at("train"), "train",
                    {"hidden", "learning_rate", "weight_decay", "epochs", "patience", "dropout"});
    TrainConfig& t = cfg.wgnn.train;
    s.read("hidden", t.hidden);
    s.read("learning_rate", t.learning_rate);
    s.read("weight_decay", t.weight_decay);
    s.read("epochs", t.epochs);
    s.read("patience", t.patience);
    s.read("dropout", t.dropout);
  }

  if (top.has("wgnn")) {
    const Section s(top.at("wgnn"), "wgnn", {"mode", "eta0", "eta1", "eta2"});
    std::string mode(mode_name(cfg.wgnn.mode));
    s.read("mode", mode);
    cfg.wgnn.mode = parse_mode(mode);
    s.read("eta0", cfg.wgnn.eta0);
    s.read("eta1", cfg.wgnn.eta1);
    s.read("eta2", cfg.wgnn.eta2);
  }

  if (top.has("grid")) {
    const Section s(top.at("grid"), "grid", {"eta0", "eta1", "eta2", "couple_eta12"});
    s.read("eta0", cfg.grid.eta0);
    s.read("eta1", cfg.grid.eta1);
    s.read("eta2", cfg.grid.eta2);
    s.read("couple_eta12", cfg.grid.couple_eta12);
    cfg.grid.validate();
  }

  cfg.alphas = default_alphas();
  top.read("alphas", cfg.alphas);
  for (double a : cfg.alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw Error("alphas must lie in (0, 1]");
  }
  top.read("seeds", cfg.seeds);
  if (cfg.seeds.empty()) throw Error("seeds must not be empty");
  top.read("share_gprime", cfg.share_gprime);
  if (top.has("stored_gprime")) cfg.stored_gprime = top.at("stored_gprime").get<std::string>();
  if (top.has("checkpoint")) cfg.checkpoint = top.at("checkpoint").get<std::string>();

  if (top.has("verify")) {
    const Section s(top.at("verify"), "verify",
                    {"class", "o0", "o1", "instances", "max_nodes", "paths_per_instance", "corrupt", "seed"});
    s.read("class", cfg.verify.observed_class);
    if (s.has("o0")) cfg.verify.o0 = s.at("o0").get<std::vector<NodeId>>();
    if (s.has("o1")) cfg.verify.o1 = s.at("o1").get<std::vector<NodeId>>();
    if (cfg.verify.o0.has_value() != cfg.verify.o1.has_value()) throw Error("verify.o0 and verify.o1 go together");
    s.read("instances", cfg.verify.instances);
    s.read("max_nodes", cfg.verify.max_nodes);
    s.read("paths_per_instance", cfg.verify.paths_per_instance);
    s.read("corrupt", cfg.verify.corrupt);
    s.read("seed", cfg.verify.seed);
    if (cfg.verify.max_nodes < 4) throw Error("verify.max_nodes must be at least 4");
  }

  std::string out = cfg.out.string();
  top.read("out", out);
  cfg.out = out;
  cfg.wgnn.validate();
  return cfg;
}

Dataset load_dataset(const DatasetRef& ref) {
  switch (ref.kind) {
    case DatasetRef::Kind::manifest:
      return load_manifest(ref.manifest);
    case DatasetRef::Kind::sbm:
      return generate_sbm(ref.sbm);
    case DatasetRef::Kind::path_graph: {
      Dataset data;
      data.name = "path";
      data.graph = fixtures::path_graph(ref.path_nodes);
      data.features = FeatureMatrix::Ones(static_cast<Eigen::Index>(ref.path_nodes), 1);
      data.labels.assign(ref.path_nodes, 0);
      data.num_classes = 1;
      return data;
    }
    case DatasetRef::Kind::files:
      break;
  }
  return lnu::load_dataset(ref.edges, ref.features, ref.labels);
}

Split make_split(const Dataset& data, const SplitSpec& spec) {
  return lnu::make_split(data.labels, data.num_classes, spec.per_class_train, spec.val_size, spec.test_size,
                         spec.seed);
}

}  // namespace lnu::cli
