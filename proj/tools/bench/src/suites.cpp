#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "congest/bench.hpp"
#include "congest/errors.hpp"

namespace congest::bench {

namespace fs = std::filesystem;

namespace {

const std::vector<SuiteInfo> kSuites = {
    {"bcsim-oracle", 1, "bc-sim outputs equal direct runs: BFS, flood, Bellman-Ford on 50 gnp(64,0.3)"},
    {"aggsim-oracle", 2, "general and star simulations equal direct runs, 25 seeds at n=64 and n=128"},
    {"apsp-correctness", 3, "trade-off APSP vs BFS oracle on gnp(128,0.1), weighted APSP vs Dijkstra"},
    {"tradeoff-scaling", 4, "message and round exponents of trade-off APSP for eps 0.5 and 1"},
    {"message-bound", 5, "bc-sim messages within C (In + Out + B) log2^2 n on the criterion 1 corpus"},
    {"structural", 6, "LDC, hierarchy properties, subtree bound and cluster-edge rarity"},
    {"scheduler-audit", 7, "distinct BFS sources per node and round with l = n = 256"},
    {"smoothing", 8, "ensemble vs single-hierarchy cluster congestion, 10 paired seeds"},
    {"matching", 9, "maximum matching size equals Hopcroft-Karp on 100 bipartite instances"},
    {"cover", 10, "neighborhood cover properties on gnp(128,0.1), k and W in {1,2}"},
    {"determinism", 11, "criterion 1 corpus rerun gives bitwise-identical metrics files"},
};

CellConfig cell(std::string name, std::string alg, GraphKind kind, std::vector<std::size_t> n, double p,
                std::vector<double> eps, std::uint64_t seeds, json params = json::object()) {
  CellConfig c;
  c.name = std::move(name);
  c.algorithm = std::move(alg);
  c.graph.kind = kind;
  c.graph.n = std::move(n);
  c.graph.p = p;
  c.epsilons = std::move(eps);
  for (std::uint64_t s = 0; s < seeds; ++s) c.seeds.push_back(s);
  c.params = std::move(params);
  return c;
}

ExperimentConfig criterion1_corpus() {
  ExperimentConfig cfg;
  cfg.name = "bcsim-oracle";
  for (const char* p : {"bfs", "flood", "bellman_ford"})
    cfg.cells.push_back(cell(std::string("bcsim_") + p, "bcsim", GraphKind::Gnp, {64}, 0.3, {1.0}, 50, {{"program", p}}));
  return cfg;
}

bool flag(const Row& r, const char* key) { return r.extras.contains(key) && r.extras[key].get<bool>(); }

std::string first_failure(const SweepResult& s) {
  for (const auto& r : s.rows)
    if (!r.ok) return r.key() + (r.error.empty() ? "" : " (" + r.error + ")");
  return "";
}

std::string fmt(double x, int prec = 3) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(prec);
  o << x;
  return o.str();
}

// Every row ok; detail counts rows.
void judge_all_ok(SuiteOutcome& o) {
  std::size_t good = 0;
  for (const auto& r : o.sweep.rows) good += r.ok;
  o.pass = good == o.sweep.rows.size() && !o.sweep.rows.empty();
  o.detail = std::to_string(good) + "/" + std::to_string(o.sweep.rows.size()) + " runs pass";
  if (!o.pass) o.detail += "; first failure " + first_failure(o.sweep);
}

void judge_bcsim_oracle(SuiteOutcome& o) {
  std::size_t good = 0;
  for (const auto& r : o.sweep.rows) good += flag(r, "outputs_equal");
  o.pass = good == o.sweep.rows.size() && !o.sweep.rows.empty();
  o.detail = std::to_string(good) + "/" + std::to_string(o.sweep.rows.size()) + " outputs bitwise equal";
  if (!o.pass) o.detail += "; first failure " + first_failure(o.sweep);
}

void judge_message_bound(SuiteOutcome& o) {
  std::size_t good = 0;
  double worst = 0;
  for (const auto& r : o.sweep.rows) {
    if (!r.extras.contains("message_bound")) continue;
    const double ratio = static_cast<double>(r.messages) / r.extras["message_bound"].get<double>();
    worst = std::max(worst, ratio);
    good += flag(r, "message_bound_ok");
  }
  o.pass = good == o.sweep.rows.size() && !o.sweep.rows.empty();
  o.detail = std::to_string(good) + "/" + std::to_string(o.sweep.rows.size()) +
             " within bound, max messages/bound " + fmt(worst, 4);
}

void judge_scaling(SuiteOutcome& o) {
  o.pass = o.sweep.fit_errors.empty() && !o.sweep.fits.empty();
  std::ostringstream d;
  for (const auto& f : o.sweep.fits) {
    const double centre = f.metric == "messages" ? 2 + f.epsilon : 2 - f.epsilon;
    const bool in = std::abs(f.result.slope - centre) <= 0.4 + 1e-12;
    o.pass = o.pass && in;
    d << "eps " << fmt(f.epsilon, 2) << ' ' << f.metric << ' ' << fmt(f.result.slope) << " in [" << fmt(centre - 0.4, 1)
      << ',' << fmt(centre + 0.4, 1) << "] " << (in ? "yes" : "NO") << "; ";
  }
  for (const auto& e : o.sweep.fit_errors) d << "fit error " << e << "; ";
  std::size_t good = 0;
  for (const auto& r : o.sweep.rows) good += r.ok;
  if (good != o.sweep.rows.size()) {
    o.pass = false;
    d << "failed run " << first_failure(o.sweep);
  }
  o.detail = d.str();
  if (o.detail.size() >= 2) o.detail.resize(o.detail.size() - 2);
}

void judge_structural(SuiteOutcome& o) {
  judge_all_ok(o);
  for (const auto& r : o.sweep.rows)
    if (r.algorithm == "rarity")
      o.detail += "; rarity max " + fmt(r.extras["max_rate"].get<double>(), 4) + " mean " +
                  fmt(r.extras["mean_rate"].get<double>(), 4) + " bound " + fmt(r.extras["bound"].get<double>(), 4);
}

void judge_audit(SuiteOutcome& o) {
  judge_all_ok(o);
  std::size_t worst = 0;
  double bound = 0;
  for (const auto& r : o.sweep.rows) {
    if (!r.extras.contains("max_distinct_sources")) continue;
    worst = std::max(worst, r.extras["max_distinct_sources"].get<std::size_t>());
    bound = r.extras["audit_bound"].get<double>();
  }
  o.detail += "; max distinct " + std::to_string(worst) + " vs bound " + fmt(bound, 2);
}

void judge_smoothing(SuiteOutcome& o) {
  std::size_t lower = 0, correct = 0;
  for (const auto& r : o.sweep.rows) {
    lower += r.ok && flag(r, "ensemble_lower");
    correct += r.ok;
  }
  const std::size_t total = o.sweep.rows.size();
  o.pass = correct == total && total >= 10 && lower * 10 >= total * 9;
  o.detail = "ensemble lower on " + std::to_string(lower) + "/" + std::to_string(total) + " pairs, tables correct " +
             std::to_string(correct) + "/" + std::to_string(total);
  if (correct != total) o.detail += "; first failure " + first_failure(o.sweep);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json without_wall_time(json rows) {
  for (auto& r : rows) r.erase("wall_time");
  return rows;
}

}  // namespace

std::vector<SuiteInfo> suites() { return kSuites; }

ExperimentConfig suite_config(const std::string& name, const Constants& c) {
  ExperimentConfig cfg;
  if (name == "bcsim-oracle" || name == "message-bound" || name == "determinism") {
    cfg = criterion1_corpus();
  } else if (name == "aggsim-oracle") {
    cfg.cells.push_back(cell("general", "aggsim", GraphKind::Gnp, {64, 128}, 0.1, {1.0 / 3}, 25, {{"mode", "general"}}));
    cfg.cells.push_back(cell("star", "aggsim", GraphKind::Gnp, {64, 128}, 0.1, {0.5}, 25, {{"mode", "star"}}));
  } else if (name == "apsp-correctness") {
    cfg.cells.push_back(cell("unweighted", "apsp_unweighted", GraphKind::Gnp, {128}, 0.1, {0.25, 0.5, 1.0}, 10));
    auto w = cell("weighted", "apsp_weighted", GraphKind::Gnp, {64}, 0.3, {1.0}, 25);
    w.graph.weighted = true;
    w.graph.max_weight = 100;
    cfg.cells.push_back(w);
  } else if (name == "tradeoff-scaling") {
    auto t = cell("tradeoff", "apsp_unweighted", GraphKind::Gnp, {64, 128, 256}, 0, {0.5, 1.0}, 5);
    t.graph.p_formula = "16log2n/n";
    t.fit = {"messages", "rounds"};
    cfg.cells.push_back(t);
  } else if (name == "structural") {
    cfg.cells.push_back(cell("ldc", "ldc", GraphKind::Gnp, {256}, 0.1, {1.0}, 100));
    cfg.cells.push_back(cell("hierarchy", "hierarchy", GraphKind::Gnp, {256}, 0.1, {0.25, 1.0 / 3, 0.5}, 20,
                             {{"sample_edges", 1024}}));
    cfg.cells.push_back(cell("hierarchy_exhaustive", "hierarchy", GraphKind::Gnp, {64}, 0.1, {0.25, 1.0 / 3, 0.5}, 20));
    cfg.cells.push_back(cell("rarity", "rarity", GraphKind::Gnp, {256}, 0.1, {0.5}, 1, {{"builds", 1000}}));
  } else if (name == "scheduler-audit") {
    cfg.cells.push_back(cell("audit", "schedule_audit", GraphKind::Gnp, {256}, 0.1, {1.0}, 5));
  } else if (name == "smoothing") {
    cfg.cells.push_back(cell("pair", "smoothing_pair", GraphKind::Gnp, {256}, 0.3, {0.5}, 10));
  } else if (name == "matching") {
    auto a = cell("small", "matching", GraphKind::BipartiteGnp, {20, 50}, 0, {1.0}, 20);
    a.graph.p_min = 0.25;
    a.graph.p_max = 0.45;
    auto b = cell("large", "matching", GraphKind::BipartiteGnp, {100, 150, 200}, 0, {1.0}, 20);
    b.graph.p_min = 0.1;
    b.graph.p_max = 0.25;
    for (auto* x : {&a, &b}) {
      x->graph.left_lo = 0.3;
      x->graph.left_hi = 0.7;
      x->graph.max_part = 100;
      cfg.cells.push_back(*x);
    }
  } else if (name == "cover") {
    for (unsigned k : {1u, 2u})
      for (int w : {1, 2})
        cfg.cells.push_back(cell("k" + std::to_string(k) + "w" + std::to_string(w), "cover", GraphKind::Gnp, {128},
                                 0.1, {1.0}, 20, {{"k", k}, {"w", w}}));
  } else {
    throw InvalidArgument("unknown suite '" + name + "'");
  }
  cfg.name = name;
  cfg.constants = c;
  return cfg;
}

SuiteOutcome run_suite(const std::string& name, const Constants& c, const RunOptions& opt, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteOutcome o;
  o.name = name;
  for (const auto& s : kSuites)
    if (s.name == name) o.criterion = s.criterion;
  const ExperimentConfig cfg = suite_config(name, c);
  o.sweep = run_sweep(cfg, opt);

  if (name == "bcsim-oracle") judge_bcsim_oracle(o);
  else if (name == "message-bound") judge_message_bound(o);
  else if (name == "tradeoff-scaling") judge_scaling(o);
  else if (name == "structural") judge_structural(o);
  else if (name == "scheduler-audit") judge_audit(o);
  else if (name == "smoothing") judge_smoothing(o);
  else if (name != "determinism") judge_all_ok(o);

  if (name == "determinism") {
    // Second run single-threaded: the artifacts must not depend on the pool.
    RunOptions serial = opt;
    serial.jobs = 1;
    serial.progress = nullptr;
    SweepResult again = run_sweep(cfg, serial);
    const fs::path root = out_dir.empty()
                              ? fs::temp_directory_path() / ("congest_determinism_" + std::to_string(::getpid()))
                              : fs::path(out_dir);
    write_artifacts(cfg, o.sweep, (root / "run1").string());
    write_artifacts(cfg, again, (root / "run2").string());
    std::size_t files = 0, same = 0;
    std::string differing;
    for (const auto& e : fs::directory_iterator(root / "run1" / "metrics")) {
      ++files;
      const fs::path other = root / "run2" / "metrics" / e.path().filename();
      if (fs::exists(other) && read_file(e.path()) == read_file(other))
        ++same;
      else if (differing.empty())
        differing = e.path().filename().string();
    }
    const bool rows_same = without_wall_time(rows_json(o.sweep)) == without_wall_time(rows_json(again));
    const bool fits_same = read_file(root / "run1" / "fits.json") == read_file(root / "run2" / "fits.json");
    o.pass = files == o.sweep.rows.size() && same == files && rows_same && fits_same && files > 0;
    o.detail = std::to_string(same) + "/" + std::to_string(files) + " metrics files identical, rows " +
               (rows_same ? "identical" : "DIFFER") + " modulo wall_time";
    if (!differing.empty()) o.detail += "; first difference " + differing;
    if (out_dir.empty()) fs::remove_all(root);
  } else if (!out_dir.empty()) {
    write_artifacts(cfg, o.sweep, out_dir);
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

}  // namespace congest::bench
