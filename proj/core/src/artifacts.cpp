#include "lnu/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lnu/error.hpp"
#include "lnu/io_util.hpp"

namespace lnu {
namespace {

using nlohmann::json;

// Rounds to 6 significant digits so the JSON dump matches the CSV output.
json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_float(x));
}

json members(const NodeSet& s) { return s.members(); }

json edges(const EdgeSet& s) {
  json out = json::array();
  for (const Edge& e : s) out.push_back({e.u, e.v});
  return out;
}

json config(const WgnnConfig& cfg) {
  return {
      {"mode", std::string(mode_name(cfg.mode))},
      {"eta0", num(cfg.eta0)},
      {"eta1", num(cfg.eta1)},
      {"eta2", num(cfg.eta2)},
      {"drop_seed", cfg.drop_seed},
      {"train",
       {{"hidden", cfg.train.hidden},
        {"learning_rate", num(cfg.train.learning_rate)},
        {"weight_decay", num(cfg.train.weight_decay)},
        {"epochs", cfg.train.epochs},
        {"patience", cfg.train.patience},
        {"dropout", num(cfg.train.dropout)},
        {"seed", cfg.train.seed}}},
  };
}

json augmented(const AugmentedSplit& aug) {
  json pseudo = json::array();
  for (NodeId v : aug.added.members()) pseudo.push_back({{"node", v}, {"label", aug.pseudo_labels[static_cast<std::size_t>(v)]}});
  return {
      {"train", members(aug.original.train)},
      {"val", members(aug.original.val)},
      {"test", members(aug.original.test)},
      {"added", pseudo},
      {"labels_from", "step (a) predictions"},
  };
}

}  // namespace

std::string signal_csv(const GraphSignal& f) {
  std::string out = "node_id,value\n";
  for (std::size_t v = 0; v < f.size(); ++v) {
    out += std::to_string(v) + "," + format_float(f[static_cast<NodeId>(v)]) + "\n";
  }
  return out;
}

std::string distribution_csv(const DistributionTable& table) {
  std::string out = "node";
  for (std::size_t c = 0; c < table.num_classes(); ++c) out += ",p" + std::to_string(c);
  out += "\n";
  for (std::size_t v = 0; v < table.num_nodes(); ++v) {
    out += std::to_string(v);
    for (double p : table.row(v)) out += "," + format_float(p);
    out += "\n";
  }
  return out;
}

DistributionTable read_distribution_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
  const auto k = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (k == 0) throw Error(path.string() + ": header has no class columns");
  std::vector<double> data;
  std::size_t expected = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    if (field != std::to_string(expected)) {
      throw Error(path.string() + " line " + std::to_string(line_no) + ": expected node " + std::to_string(expected));
    }
    std::size_t count = 0;
    while (std::getline(row, field, ',')) {
      try {
        data.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw Error(path.string() + " line " + std::to_string(line_no) + ": bad probability '" + field + "'");
      }
      ++count;
    }
    if (count != k) throw Error(path.string() + " line " + std::to_string(line_no) + ": wrong column count");
    ++expected;
  }
  return DistributionTable(k, std::move(data));
}

std::string ranking_csv(const Ranking& ranking) {
  std::string out = "rank,node,key1,key2\n";
  for (std::size_t i = 0; i < ranking.order.size(); ++i) {
    out += std::to_string(i + 1) + "," + std::to_string(ranking.order[i]) + "," +
           format_float(ranking.keys[i].first) + "," + format_float(ranking.keys[i].second) + "\n";
  }
  return out;
}

std::string curve_csv(std::span<const CurvePoint> curve) {
  std::string out = "alpha,accuracy\n";
  for (const CurvePoint& p : curve) out += format_float(p.alpha) + "," + format_float(p.accuracy) + "\n";
  return out;
}

std::string curves_csv(std::span<const CurvePoint> m1, std::span<const CurvePoint> m2) {
  if (m1.size() != m2.size()) throw Error("curves_csv: curves have different lengths");
  std::string out = "alpha,m1_accuracy,m2_accuracy\n";
  for (std::size_t i = 0; i < m1.size(); ++i) {
    if (m1[i].alpha != m2[i].alpha) throw Error("curves_csv: curves use different alpha grids");
    out += format_float(m1[i].alpha) + "," + format_float(m1[i].accuracy) + "," + format_float(m2[i].accuracy) + "\n";
  }
  return out;
}

std::string grid_csv(std::span<const GridRow> rows) {
  std::string out = "eta0,eta1,eta2,val_acc,test_acc\n";
  for (const GridRow& r : rows) {
    out += format_float(r.eta0) + "," + format_float(r.eta1) + "," + format_float(r.eta2) + "," +
           format_float(r.val_accuracy) + "," + format_float(r.test_accuracy) + "\n";
  }
  return out;
}

std::string boundary_report_json(const BoundaryReport& r) {
  return json{
      {"lhs", num(r.lhs)},
      {"rhs", num(r.rhs())},
      {"rhs_base", num(r.rhs_base)},
      {"a", num(r.a)},
      {"b", num(r.b)},
      {"gamma_o0", r.gamma_o0},
      {"gamma_o1", r.gamma_o1},
      {"slack", num(r.slack)},
      {"holds", r.holds},
      {"o0_identity_residual", num(r.o0_identity_residual)},
      {"o1_identity_residual", num(r.o1_identity_residual)},
  }
      .dump(2);
}

std::string bottleneck_certificate_json(const BottleneckCertificate& c) {
  return json{
      {"c0", num(c.c0)},
      {"c1", num(c.c1)},
      {"cut_of_separator", c.cut_of_separator},
      {"cheeger", num(c.cheeger)},
      {"cheeger_set", members(c.cheeger_set)},
      {"applicable", c.applicable},
      {"bound_holds", c.bound_holds},
      {"crosses_separator", c.crosses_separator},
      {"u0", members(c.u0)},
      {"u1", members(c.u1)},
  }
      .dump(2);
}

std::string sublevel_profile_json(const SublevelProfile& p) {
  json steps = json::array();
  for (const SublevelStep& s : p.steps) {
    steps.push_back({{"threshold", num(s.threshold)},
                     {"sublevel_size", s.sublevel_size},
                     {"sublevel_connected", s.sublevel_connected},
                     {"superlevel_size", s.superlevel_size},
                     {"superlevel_connected", s.superlevel_connected}});
  }
  return json{
      {"hypothesis_met", p.hypothesis_met},
      {"hypothesis_note", p.hypothesis_note},
      {"ok", p.ok()},
      {"violations", p.violations},
      {"steps", steps},
  }
      .dump(2);
}

std::string wgnn_config_json(const WgnnConfig& cfg) { return config(cfg).dump(2); }

std::string augmented_split_json(const AugmentedSplit& aug) { return augmented(aug).dump(2); }

std::string run_result_json(const RunResult& r) {
  json out{
      {"config", config(r.config)},
      {"test_accuracy", num(r.test_accuracy)},
      {"val_accuracy", num(r.val_accuracy)},
      {"base_test_accuracy", num(r.base_test_accuracy)},
      {"base_val_accuracy", num(r.base_val_accuracy)},
      {"used_stored_graph", r.used_stored_graph},
  };
  if (r.aug) out["added_nodes"] = r.aug->added.size();
  if (r.drop) {
    out["selected_lowu"] = r.drop->selected_lowu.size();
    out["kept_tree_edges"] = r.drop->kept_tree.size();
    out["dropped_edges"] = edges(r.drop->dropped);
  }
  return out.dump(2);
}

}  // namespace lnu
