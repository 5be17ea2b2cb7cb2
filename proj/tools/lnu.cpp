// lnu: train, rank, verify, grid and gen-sbm subcommands driven by one JSON
// config per invocation.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <atomic>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "lnu/artifacts.hpp"
#include "lnu/error.hpp"
#include "lnu/fixtures.hpp"
#include "lnu/graph_io.hpp"
#include "lnu/harmonic.hpp"
#include "lnu/io_util.hpp"
#include "lnu/ranking.hpp"
#include "lnu/stats.hpp"
#include "lnu/theory_checks.hpp"
#include "lnu/wgnn.hpp"

namespace {

using nlohmann::json;
using namespace lnu;
using cli::ExperimentConfig;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
};

std::size_t worker_count() {
  if (const char* env = std::getenv("LNU_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
    throw Error(std::string("LNU_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, count) on up to `workers` threads; the first
// exception is rethrown after all threads finish.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(workers, count); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ExperimentConfig load(const Overrides& o) {
  ExperimentConfig cfg = cli::load_config(o.config);
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.out) cfg.out = *o.out;
  if (o.mode) cfg.wgnn.mode = parse_mode(*o.mode);
  return cfg;
}

json summary(std::span<const double> xs) {
  return {{"values", std::vector<double>(xs.begin(), xs.end())}, {"mean", mean(xs)}, {"std", stddev(xs)}};
}

void write_json(const std::filesystem::path& path, const json& doc) { write_file_atomic(path, doc.dump(2) + "\n"); }

WgnnConfig seeded(const WgnnConfig& base, std::uint64_t seed) {
  WgnnConfig cfg = base;
  cfg.train.seed = seed;
  cfg.drop_seed = seed;
  return cfg;
}

int cmd_train(const ExperimentConfig& cfg) {
  const Dataset data = cli::load_dataset(cfg.dataset);
  const Split split = cli::make_split(data, cfg.split);
  std::optional<Graph> stored;
  if (cfg.stored_gprime) stored = read_edge_list(*cfg.stored_gprime, data.num_nodes());

  const std::size_t runs = cfg.seeds.size();
  std::vector<RunResult> results(runs);
  std::optional<BaseStage> first_base;
  auto run_seed = [&](std::size_t i) {
    const WgnnConfig wcfg = seeded(cfg.wgnn, cfg.seeds[i]);
    BaseStage base = train_base(data, split, wcfg.train);
    results[i] = run_from_base(data, split, wcfg, base, stored ? &*stored : nullptr);
    if (i == 0) first_base = std::move(base);
  };
  run_seed(0);
  if (cfg.share_gprime && !stored && results[0].drop) stored = results[0].drop->graph;
  parallel_for(runs - 1, worker_count(), [&](std::size_t i) { run_seed(i + 1); });

  std::vector<double> test;
  std::vector<double> val;
  std::vector<double> base_test;
  json run_docs = json::array();
  for (const RunResult& r : results) {
    test.push_back(r.test_accuracy);
    val.push_back(r.val_accuracy);
    base_test.push_back(r.base_test_accuracy);
    run_docs.push_back(json::parse(run_result_json(r)));
  }
  json metrics{
      {"command", "train"},
      {"dataset", data.name},
      {"mode", std::string(mode_name(cfg.wgnn.mode))},
      {"seeds", cfg.seeds},
      {"test_accuracy", summary(test)},
      {"val_accuracy", summary(val)},
      {"base_test_accuracy", summary(base_test)},
      {"shared_gprime", cfg.share_gprime || cfg.stored_gprime.has_value()},
      {"runs", run_docs},
  };
  write_json(cfg.out / "metrics.json", metrics);
  save_checkpoint(cfg.out / "checkpoint.json", first_base->model.params);
  if (results[0].drop) write_edge_list(cfg.out / "gprime.tsv", results[0].drop->graph);
  if (results[0].aug && cfg.wgnn.augments()) {
    write_file_atomic(cfg.out / "augmented_split.json", augmented_split_json(*results[0].aug) + "\n");
  }
  std::cout << json{{"status", "ok"}, {"out", cfg.out.string()}, {"test_accuracy_mean", mean(test)}}.dump() << "\n";
  return 0;
}

int cmd_rank(const ExperimentConfig& cfg) {
  const Dataset data = cli::load_dataset(cfg.dataset);
  const Split split = cli::make_split(data, cfg.split);
  // A checkpoint fixes the model, so one pass suffices.
  const std::size_t runs = cfg.checkpoint ? 1 : cfg.seeds.size();
  std::vector<DistributionTable> tables(runs);
  parallel_for(runs, worker_count(), [&](std::size_t i) {
    if (cfg.checkpoint) {
      tables[i] = forward(normalize_adjacency(data.graph), data.features, load_checkpoint(*cfg.checkpoint)).distributions;
    } else {
      tables[i] = train_base(data, split, seeded(cfg.wgnn, cfg.seeds[i]).train).model.distributions;
    }
  });

  const Ranking m1 = rank_m1(data.graph, split.train, data.labels, split.test);
  std::vector<CurvePoint> mean_m1(cfg.alphas.size());
  std::vector<CurvePoint> mean_m2(cfg.alphas.size());
  std::vector<double> test_acc;
  for (const DistributionTable& table : tables) {
    const auto preds = table.predictions();
    const auto c1 = selection_accuracy_curve(m1, preds, data.labels, cfg.alphas);
    const auto c2 = selection_accuracy_curve(rank_m2(table, split.test), preds, data.labels, cfg.alphas);
    for (std::size_t j = 0; j < cfg.alphas.size(); ++j) {
      mean_m1[j].alpha = mean_m2[j].alpha = cfg.alphas[j];
      mean_m1[j].accuracy += c1[j].accuracy / static_cast<double>(runs);
      mean_m2[j].accuracy += c2[j].accuracy / static_cast<double>(runs);
    }
    test_acc.push_back(accuracy(preds, data.labels, split.test));
  }

  auto accuracies = [](const std::vector<CurvePoint>& c) {
    std::vector<double> out;
    for (const auto& p : c) out.push_back(p.accuracy);
    return out;
  };
  auto rho = [&](const std::vector<CurvePoint>& c) -> json {
    if (c.size() < 2) return nullptr;
    const double r = spearman(cfg.alphas, accuracies(c));
    return std::isnan(r) ? json(nullptr) : json(r);
  };

  write_file_atomic(cfg.out / "curve_m1.csv", curve_csv(mean_m1));
  write_file_atomic(cfg.out / "curve_m2.csv", curve_csv(mean_m2));
  write_file_atomic(cfg.out / "curves.csv", curves_csv(mean_m1, mean_m2));
  write_file_atomic(cfg.out / "rank_m1.csv", ranking_csv(m1));
  write_file_atomic(cfg.out / "rank_m2.csv", ranking_csv(rank_m2(tables[0], split.test)));
  write_file_atomic(cfg.out / "distributions.csv", distribution_csv(tables[0]));
  json metrics{
      {"command", "rank"},
      {"dataset", data.name},
      {"runs", runs},
      {"test_accuracy", summary(test_acc)},
      {"spearman_m1", rho(mean_m1)},
      {"spearman_m2", rho(mean_m2)},
  };
  write_json(cfg.out / "metrics.json", metrics);
  std::cout << json{{"status", "ok"}, {"out", cfg.out.string()}}.dump() << "\n";
  return 0;
}

json check(const std::string& name, bool pass, json details = json::object()) {
  details["name"] = name;
  details["pass"] = pass;
  return details;
}

// Observed sets and the graph the dataset checks run on (the largest
// component when none are given explicitly).
struct VerifyTarget {
  Graph graph;
  NodeSet o0;
  NodeSet o1;
  std::vector<NodeId> to_parent;
};

VerifyTarget verify_target(const ExperimentConfig& cfg, const Dataset& data) {
  const std::size_t n = data.num_nodes();
  if (cfg.verify.o0) {
    VerifyTarget t{data.graph, NodeSet::of(n, *cfg.verify.o0), NodeSet::of(n, *cfg.verify.o1), {}};
    for (std::size_t v = 0; v < n; ++v) t.to_parent.push_back(static_cast<NodeId>(v));
    return t;
  }
  if (cfg.dataset.kind == cli::DatasetRef::Kind::path_graph) {
    const std::vector<NodeId> first{0};
    const std::vector<NodeId> last{static_cast<NodeId>(n - 1)};
    VerifyTarget t{data.graph, NodeSet::of(n, first), NodeSet::of(n, last), {}};
    for (std::size_t v = 0; v < n; ++v) t.to_parent.push_back(static_cast<NodeId>(v));
    return t;
  }
  const Split split = cli::make_split(data, cfg.split);
  const auto comp = connected_components(data.graph);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(*std::max_element(comp.begin(), comp.end()) + 1));
  for (int c : comp) ++sizes[static_cast<std::size_t>(c)];
  const auto largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  NodeSet keep(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] == largest) keep.insert(static_cast<NodeId>(v));
  }
  const InducedSubgraph sub = induced_subgraph(data.graph, keep);
  VerifyTarget t{sub.graph, NodeSet(sub.graph.num_nodes()), NodeSet(sub.graph.num_nodes()), sub.to_parent};
  for (NodeId v : split.train.members()) {
    const NodeId s = sub.to_sub[static_cast<std::size_t>(v)];
    if (s < 0) continue;
    (data.labels[static_cast<std::size_t>(v)] == cfg.verify.observed_class ? t.o0 : t.o1).insert(s);
  }
  if (t.o0.empty() || t.o1.empty()) {
    throw Error("verify: class " + std::to_string(cfg.verify.observed_class) +
                " does not split the training nodes of the largest component into two nonempty sets");
  }
  return t;
}

json dataset_checks(const ExperimentConfig& cfg, const Dataset& data, std::mt19937_64& rng) {
  const VerifyTarget target = verify_target(cfg, data);
  const HarmonicProblem problem(target.graph, target.o0, target.o1);
  GraphSignal f = solve_harmonic(problem);
  const std::vector<NodeId> interior = problem.observed().complement().members();
  if (cfg.verify.corrupt && !interior.empty()) {
    const NodeId v = interior.front();
    f[v] = 0.5 * (f[v] + 1.0);
  }
  json checks = json::array();

  const double residual = verify_averaging(problem.graph(), f, problem.observed());
  checks.push_back(check("averaging", residual <= kAveragingTolerance,
                         {{"residual", residual}, {"tolerance", kAveragingTolerance}}));

  const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
  checks.push_back(check("range", *lo >= 0.0 && *hi <= 1.0, {{"min", *lo}, {"max", *hi}}));

  {
    std::vector<NodeId> sample = interior;
    std::shuffle(sample.begin(), sample.end(), rng);
    sample.resize(std::min(sample.size(), cfg.verify.paths_per_instance));
    json failures = json::array();
    for (NodeId v : sample) {
      try {
        const Path path = monotone_path(problem, f, v);
        const std::string defect = validate_monotone_path(problem, f, v, path);
        if (!defect.empty()) failures.push_back({{"node", v}, {"defect", defect}});
      } catch (const Error& e) {
        failures.push_back({{"node", v}, {"defect", e.what()}});
      }
    }
    checks.push_back(check("monotone_paths", failures.empty(), {{"checked", sample.size()}, {"failures", failures}}));
  }

  const SublevelProfile profile = sublevel_connectivity_profile(problem.graph(), f, problem.observed());
  checks.push_back(check("sublevel_profile", profile.ok(), {{"profile", json::parse(sublevel_profile_json(profile))}}));

  {
    const std::optional<NodeSet> v0 = fixtures::random_valid_partition(problem, rng);
    if (!v0) {
      checks.push_back(check("boundary_inequality", true,
                             {{"skipped", "closed neighborhoods of o0 and o1 meet; no valid partition exists"}}));
    } else {
      try {
        const BoundaryReport report = check_boundary_inequality(problem, f, *v0);
        checks.push_back(check("boundary_inequality", report.holds, {{"report", json::parse(boundary_report_json(report))}}));
      } catch (const Error& e) {
        checks.push_back(check("boundary_inequality", false, {{"error", e.what()}}));
      }
    }
  }

  json out{{"nodes", problem.graph().num_nodes()},
           {"o0", problem.o0().size()},
           {"o1", problem.o1().size()},
           {"corrupted", cfg.verify.corrupt},
           {"checks", checks}};
  return out;
}

json random_suites(const ExperimentConfig& cfg, std::mt19937_64& rng) {
  const cli::VerifySpec& spec = cfg.verify;
  json checks = json::array();

  std::size_t passed = 0;
  std::size_t redraws = 0;
  double worst_residual = 0.0;
  std::uniform_int_distribution<std::size_t> size(4, spec.max_nodes);
  std::uniform_real_distribution<double> density(0.05, 0.3);
  for (std::size_t i = 0; i < spec.instances; ++i) {
    for (;;) {
      const HarmonicProblem problem = fixtures::random_harmonic_problem(size(rng), density(rng), 3, rng);
      const std::optional<NodeSet> v0 = fixtures::random_valid_partition(problem, rng);
      if (!v0) {
        ++redraws;
        continue;
      }
      const GraphSignal f = solve_harmonic(problem);
      worst_residual = std::max(worst_residual, verify_averaging(problem.graph(), f, problem.observed()));
      if (check_boundary_inequality(problem, f, *v0, 1e-7).holds) ++passed;
      break;
    }
  }
  checks.push_back(check("random_boundary_inequality", passed == spec.instances,
                         {{"instances", spec.instances},
                          {"passed", passed},
                          {"redraws", redraws},
                          {"max_averaging_residual", worst_residual}}));

  std::size_t applicable = 0;
  std::size_t holds = 0;
  std::uniform_int_distribution<std::size_t> block(3, 8);
  std::uniform_int_distribution<std::size_t> sep(2, 4);
  for (std::size_t i = 0; i < spec.instances; ++i) {
    const auto inst = fixtures::random_bottleneck_instance(block(rng), block(rng), sep(rng), 0.6, rng);
    const BottleneckCertificate cert = bottleneck_certificate(inst.graph, inst.separator);
    if (!cert.applicable) continue;
    ++applicable;
    if (cert.bound_holds && cert.crosses_separator) ++holds;
  }
  checks.push_back(check("random_bottleneck_certificate", holds == applicable,
                         {{"instances", spec.instances}, {"applicable", applicable}, {"passed", holds}}));
  return checks;
}

int cmd_verify(const ExperimentConfig& cfg) {
  const Dataset data = cli::load_dataset(cfg.dataset);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.verify.seed), static_cast<std::uint32_t>(cfg.verify.seed >> 32)};
  std::mt19937_64 rng(seq);
  json report{{"command", "verify"}, {"dataset", data.name}};
  report["dataset_checks"] = dataset_checks(cfg, data, rng);
  report["random_suites"] = random_suites(cfg, rng);

  std::size_t failed = 0;
  for (const auto& c : report["dataset_checks"]["checks"]) failed += c["pass"].get<bool>() ? 0 : 1;
  for (const auto& c : report["random_suites"]) failed += c["pass"].get<bool>() ? 0 : 1;
  report["pass"] = failed == 0;
  report["failed_checks"] = failed;
  const auto path = cfg.out / "verify.json";
  write_json(path, report);
  if (failed > 0) {
    std::cerr << json{{"error", std::to_string(failed) + " check(s) failed"}, {"command", "verify"}, {"report", path.string()}}.dump()
              << "\n";
    return 2;
  }
  std::cout << json{{"status", "ok"}, {"out", cfg.out.string()}}.dump() << "\n";
  return 0;
}

int cmd_grid(const ExperimentConfig& cfg) {
  const Dataset data = cli::load_dataset(cfg.dataset);
  const Split split = cli::make_split(data, cfg.split);
  WgnnConfig base = cfg.wgnn;
  if (base.mode == WgnnMode::base) base.mode = WgnnMode::combined;

  std::vector<GridRow> rows;
  const double share = 1.0 / static_cast<double>(cfg.seeds.size());
  for (std::uint64_t seed : cfg.seeds) {
    const GridResult result = grid_search(data, split, seeded(base, seed), cfg.grid, worker_count());
    if (rows.empty()) {
      rows = result.rows;
      for (auto& r : rows) r.val_accuracy = r.test_accuracy = 0.0;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].val_accuracy += share * result.rows[i].val_accuracy;
      rows[i].test_accuracy += share * result.rows[i].test_accuracy;
    }
  }
  const GridRow& best = rows[best_grid_row(rows)];

  json rerun = cfg.raw;
  rerun.erase("grid");
  rerun["wgnn"]["mode"] = std::string(mode_name(base.mode));
  rerun["wgnn"]["eta0"] = best.eta0;
  rerun["wgnn"]["eta1"] = best.eta1;
  rerun["wgnn"]["eta2"] = best.eta2;
  rerun["out"] = (cfg.out / "best_run").string();

  write_file_atomic(cfg.out / "grid.csv", grid_csv(rows));
  write_json(cfg.out / "best_config.json", rerun);
  std::cout << json{{"status", "ok"}, {"out", cfg.out.string()}, {"best", {best.eta0, best.eta1, best.eta2}}}.dump()
            << "\n";
  return 0;
}

int cmd_gen_sbm(ExperimentConfig cfg, const Overrides& o) {
  if (cfg.dataset.kind != cli::DatasetRef::Kind::sbm) throw Error("gen-sbm needs dataset.sbm in the config");
  if (o.seed) cfg.dataset.sbm.seed = *o.seed;
  Dataset data = generate_sbm(cfg.dataset.sbm);
  write_dataset(cfg.out, data);
  std::cout << json{{"status", "ok"}, {"manifest", (cfg.out / "manifest.json").string()}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label non-uniformity tools for GNN node classification"};
  app.require_subcommand(1);
  Overrides overrides;
  std::string active = "lnu";

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", overrides.config, "Experiment config (JSON)")->required();
    sub->add_option("--seed", overrides.seed, "Replace the seed list with a single seed");
    sub->add_option("--out", overrides.out, "Output directory");
    sub->add_option("--mode", overrides.mode, "base, wgnn1, wgnn2 or combined");
    return sub;
  };
  CLI::App* train_cmd = add("train", "Run the configured pipeline for every seed and write metrics.json");
  CLI::App* rank_cmd = add("rank", "Selection-accuracy curves for the M1 and M2 rankings");
  CLI::App* verify_cmd = add("verify", "Check the harmonic-interpolation properties and write verify.json");
  CLI::App* grid_cmd = add("grid", "Grid search over eta0, eta1, eta2 on validation accuracy");
  CLI::App* gen_cmd = add("gen-sbm", "Write a stochastic block model dataset and manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) active = sub->get_name();
    const ExperimentConfig cfg = load(overrides);
    if (train_cmd->parsed()) return cmd_train(cfg);
    if (rank_cmd->parsed()) return cmd_rank(cfg);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (grid_cmd->parsed()) return cmd_grid(cfg);
    if (gen_cmd->parsed()) return cmd_gen_sbm(cfg, overrides);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"command", active}}.dump() << "\n";
    return 1;
  }
  return 1;
}
