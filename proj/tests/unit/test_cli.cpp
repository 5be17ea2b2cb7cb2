#include "doctest.h"
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Workspace {
 public:
  explicit Workspace(const std::string& name) : dir_(fs::temp_directory_path() / ("lnu_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  const fs::path& dir() const { return dir_; }
  fs::path operator/(const std::string& rel) const { return dir_ / rel; }

  fs::path write(const std::string& rel, const std::string& text) const {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
    return p;
  }

  fs::path config(const std::string& rel, const json& doc) const { return write(rel, doc.dump(2)); }

  Run lnu(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(LNU_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
};

json small_sbm() {
  return {{"sbm",
           {{"block_sizes", {40, 40, 40, 40}},
            {"p_in", 0.2},
            {"p_out", 0.02},
            {"feature_dim", 8},
            {"signal", 1.0},
            {"seed", 3}}}};
}

json small_config(const Workspace& ws, const std::string& out) {
  return {{"dataset", small_sbm()},
          {"split", {{"per_class_train", 5}, {"val_size", 20}, {"test_size", 40}, {"seed", 0}}},
          {"train", {{"epochs", 40}, {"patience", 10}}},
          {"wgnn", {{"mode", "base"}}},
          {"seeds", {0}},
          {"out", (ws / out).string()}};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("train in base mode reports one accuracy per seed") {
  Workspace ws("train_base");
  json cfg = small_config(ws, "out");
  cfg["seeds"] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const Run r = ws.lnu("train -c " + ws.config("cfg.json", cfg).string());
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const json metrics = json::parse(slurp(ws / "out/metrics.json"));
  CHECK(metrics["test_accuracy"]["values"].size() == 10);
  CHECK(metrics["runs"].size() == 10);
  for (double acc : metrics["test_accuracy"]["values"]) {
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
  CHECK(fs::exists(ws / "out/checkpoint.json"));
  CHECK_FALSE(fs::exists(ws / "out/gprime.tsv"));
}

TEST_CASE("train in combined mode writes the modified graph and split") {
  Workspace ws("train_combined");
  json cfg = small_config(ws, "out");
  cfg["wgnn"] = {{"mode", "combined"}, {"eta0", 0.3}, {"eta1", 0.3}, {"eta2", 0.3}};
  const Run r = ws.lnu("train -c " + ws.config("cfg.json", cfg).string());
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(ws / "out/gprime.tsv"));
  const json aug = json::parse(slurp(ws / "out/augmented_split.json"));
  CHECK(aug.is_object());

  // Flags override the config.
  const Run again = ws.lnu("train -c " + (ws / "cfg.json").string() + " --mode base --seed 4 --out " +
                           (ws / "flags").string());
  REQUIRE_MESSAGE(again.code == 0, again.err);
  const json metrics = json::parse(slurp(ws / "flags/metrics.json"));
  CHECK(metrics["mode"] == "base");
  CHECK(metrics["seeds"] == json::array({4}));
}

TEST_CASE("missing dataset files fail with the path named") {
  Workspace ws("missing");
  json cfg = small_config(ws, "out");
  const std::string missing = (ws / "nowhere/edges.tsv").string();
  cfg["dataset"] = {{"edges", missing}, {"features", missing}, {"labels", missing}};
  const Run r = ws.lnu("train -c " + ws.config("cfg.json", cfg).string());
  CHECK(r.code != 0);
  CHECK(r.err.find(missing) != std::string::npos);
  const json err = json::parse(r.err);
  CHECK(err["command"] == "train");
}

TEST_CASE("config parse errors point at the offending line") {
  Workspace ws("parse");
  const fs::path cfg = ws.write("cfg.json", "{\n  \"dataset\": {\"path_graph\": 5},\n  \"seeds\": [0,,1]\n}\n");
  const Run r = ws.lnu("train -c " + cfg.string());
  CHECK(r.code != 0);
  CHECK(r.err.find("cfg.json:3") != std::string::npos);

  const fs::path unknown = ws.write("unknown.json", R"({"dataset": {"path_graph": 5}, "sedes": [0]})");
  const Run u = ws.lnu("train -c " + unknown.string());
  CHECK(u.code != 0);
  CHECK(u.err.find("sedes") != std::string::npos);
}

TEST_CASE("verify passes on a path graph and fails on a corrupted solution") {
  Workspace ws("verify");
  json cfg = {{"dataset", {{"path_graph", 9}}},
              {"verify", {{"instances", 10}, {"max_nodes", 15}, {"seed", 1}}},
              {"out", (ws / "ok").string()}};
  const Run ok = ws.lnu("verify -c " + ws.config("ok.json", cfg).string());
  REQUIRE_MESSAGE(ok.code == 0, ok.err);
  const json report = json::parse(slurp(ws / "ok/verify.json"));
  CHECK(report["pass"] == true);
  CHECK(report["dataset_checks"]["checks"].size() >= 4);

  cfg["verify"]["corrupt"] = true;
  cfg["out"] = (ws / "bad").string();
  const Run bad = ws.lnu("verify -c " + ws.config("bad.json", cfg).string());
  CHECK(bad.code == 2);
  const json broken = json::parse(slurp(ws / "bad/verify.json"));
  CHECK(broken["pass"] == false);
  bool averaging_failed = false;
  for (const json& c : broken["dataset_checks"]["checks"]) {
    if (c["name"] == "averaging") {
      averaging_failed = !c["pass"].get<bool>();
      CHECK(c["residual"].get<double>() > 1e-3);
    }
  }
  CHECK(averaging_failed);
}

TEST_CASE("grid search writes one row per point and a runnable best config") {
  Workspace ws("grid");
  json cfg = small_config(ws, "one");
  cfg["wgnn"] = {{"mode", "combined"}};
  cfg["grid"] = {{"eta0", {0.2}}, {"eta1", {0.1}}, {"eta2", {0.1}}};
  const Run one = ws.lnu("grid -c " + ws.config("one.json", cfg).string());
  REQUIRE_MESSAGE(one.code == 0, one.err);
  CHECK(lines(slurp(ws / "one/grid.csv")).size() == 2);

  cfg["grid"] = {{"eta0", {0.0, 0.2}}, {"eta1", {0.0, 0.1, 0.2}}, {"couple_eta12", true}};
  cfg["out"] = (ws / "coupled").string();
  const Run coupled = ws.lnu("grid -c " + ws.config("coupled.json", cfg).string());
  REQUIRE_MESSAGE(coupled.code == 0, coupled.err);
  const auto rows = lines(slurp(ws / "coupled/grid.csv"));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "eta0,eta1,eta2,val_acc,test_acc");
  CHECK(rows[2].rfind("0,0.1,0.1,", 0) == 0);

  // eta1 = eta2 over 0..0.8 step 0.1 gives 9 rows per eta0.
  std::vector<double> sweep;
  for (int i = 0; i <= 8; ++i) sweep.push_back(i / 10.0);
  cfg["grid"] = {{"eta0", {0.0, 0.5}}, {"eta1", sweep}, {"couple_eta12", true}};
  cfg["out"] = (ws / "sweep").string();
  const Run swept = ws.lnu("grid -c " + ws.config("sweep.json", cfg).string());
  REQUIRE_MESSAGE(swept.code == 0, swept.err);
  CHECK(lines(slurp(ws / "sweep/grid.csv")).size() == 1 + 9 * 2);

  const json best = json::parse(slurp(ws / "coupled/best_config.json"));
  CHECK_FALSE(best.contains("grid"));
  const Run rerun = ws.lnu("train -c " + (ws / "coupled/best_config.json").string());
  REQUIRE_MESSAGE(rerun.code == 0, rerun.err);
  CHECK(fs::exists(ws / "coupled/best_run/metrics.json"));
}

TEST_CASE("rank writes both curves and they meet at alpha = 1") {
  Workspace ws("rank");
  json cfg = small_config(ws, "out");
  cfg["seeds"] = {0, 1};
  const Run r = ws.lnu("rank -c " + ws.config("cfg.json", cfg).string());
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto rows = lines(slurp(ws / "out/curves.csv"));
  REQUIRE(rows.size() == 21);
  CHECK(rows[0] == "alpha,m1_accuracy,m2_accuracy");
  const std::string last = rows.back();
  const auto c1 = last.find(',');
  const auto c2 = last.find(',', c1 + 1);
  CHECK(last.substr(0, c1) == "1");
  CHECK(last.substr(c1 + 1, c2 - c1 - 1) == last.substr(c2 + 1));
  for (const char* name : {"curve_m1.csv", "curve_m2.csv", "rank_m1.csv", "rank_m2.csv", "distributions.csv"}) {
    CHECK_MESSAGE(fs::exists(ws / ("out/" + std::string(name))), name);
  }
  const json metrics = json::parse(slurp(ws / "out/metrics.json"));
  CHECK(metrics.contains("spearman_m1"));
  CHECK(metrics.contains("spearman_m2"));
}

TEST_CASE("gen-sbm writes a dataset that train can load") {
  Workspace ws("gen");
  json gen = {{"dataset", small_sbm()}, {"out", (ws / "data").string()}};
  const Run g = ws.lnu("gen-sbm -c " + ws.config("gen.json", gen).string() + " --seed 11");
  REQUIRE_MESSAGE(g.code == 0, g.err);
  for (const char* name : {"edges.tsv", "features.csv", "labels.csv", "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(ws / ("data/" + std::string(name))), name);
  }
  CHECK(lines(slurp(ws / "data/labels.csv")).size() == 161);

  json cfg = small_config(ws, "out");
  cfg["dataset"] = {{"manifest", (ws / "data/manifest.json").string()}};
  const Run t = ws.lnu("train -c " + ws.config("cfg.json", cfg).string());
  REQUIRE_MESSAGE(t.code == 0, t.err);
}
