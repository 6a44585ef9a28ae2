#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "congest/bench.hpp"
#include "congest/errors.hpp"

namespace congest::bench {

namespace fs = std::filesystem;

namespace {

struct Task {
  std::size_t cell;
  std::size_t n;
  double eps;
  std::uint64_t seed;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + p.string());
  out << text;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

bool SweepResult::ok() const {
  if (!fit_errors.empty()) return false;
  for (const auto& r : rows)
    if (!r.ok) return false;
  return true;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    const auto& cell = cfg.cells[c];
    for (std::size_t n : cell.graph.n)
      for (double e : cell.epsilons)
        for (std::uint64_t s : cell.seeds) tasks.push_back({c, n, e, s + opt.seed_offset});
  }
  SweepResult res;
  res.config_name = cfg.name;
  res.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      const Task& t = tasks[i];
      res.rows[i] = run_cell(cfg.cells[t.cell], t.n, t.eps, t.seed, cfg.constants);
      if (opt.progress) {
        std::lock_guard lock(progress_mu);
        opt.progress(res.rows[i]);
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& cell : cfg.cells) {
    for (const auto& metric : cell.fit) {
      for (double e : cell.epsilons) {
        std::vector<Row> sel;
        for (const auto& r : res.rows)
          if (r.cell == cell.name && r.epsilon == e) sel.push_back(r);
        Fit f{cell.name, e, metric, {}};
        try {
          f.result = fit_exponent(sel, metric);
          res.fits.push_back(f);
        } catch (const std::exception& ex) {
          res.fit_errors.push_back(cell.name + " " + metric + ": " + ex.what());
        }
      }
    }
  }
  return res;
}

json rows_json(const SweepResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j;
    j["key"] = row.key();
    j["cell"] = row.cell;
    j["algorithm"] = row.algorithm;
    j["n"] = row.n;
    j["m"] = row.m;
    j["epsilon"] = row.epsilon;
    j["seed"] = row.seed;
    j["rounds"] = row.rounds;
    j["messages"] = row.messages;
    j["broadcasts"] = row.broadcasts;
    j["max_edge_congestion"] = row.max_edge_congestion;
    j["wall_time"] = row.wall_time;
    j["ok"] = row.ok;
    if (!row.error.empty()) j["error"] = row.error;
    j["extras"] = row.extras;
    rows.push_back(j);
  }
  return rows;
}

std::string results_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "cell,algorithm,n,m,epsilon,seed,rounds,messages,broadcasts,max_edge_congestion,wall_time,ok,error\n";
  for (const auto& row : r.rows) {
    out << csv_field(row.cell) << ',' << row.algorithm << ',' << row.n << ',' << row.m << ',' << row.epsilon << ','
        << row.seed << ',' << row.rounds << ',' << row.messages << ',' << row.broadcasts << ','
        << row.max_edge_congestion << ',' << std::setprecision(6) << row.wall_time << ',' << (row.ok ? 1 : 0) << ','
        << csv_field(row.error) << '\n';
  }
  return out.str();
}

json fits_json(const SweepResult& r) {
  json fits = json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"cell", f.cell},
                    {"epsilon", f.epsilon},
                    {"metric", f.metric},
                    {"slope", f.result.slope},
                    {"intercept", f.result.intercept},
                    {"residual", f.result.residual},
                    {"stderr", f.result.stderr_slope},
                    {"ci95", {f.result.ci_low, f.result.ci_high}},
                    {"points", f.result.points}});
  }
  json j;
  j["fits"] = fits;
  j["errors"] = r.fit_errors;
  return j;
}

void write_artifacts(const ExperimentConfig& cfg, const SweepResult& r, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root / "metrics");
  write_file(root / "config.json", cfg.to_json().dump(2) + "\n");
  json res;
  res["name"] = r.config_name;
  res["ok"] = r.ok();
  res["constants"] = cfg.to_json()["constants"];
  res["rows"] = rows_json(r);
  write_file(root / "results.json", res.dump(2) + "\n");
  write_file(root / "results.csv", results_csv(r));
  write_file(root / "fits.json", fits_json(r).dump(2) + "\n");
  for (const auto& row : r.rows)
    if (!row.metrics_json.empty()) write_file(root / "metrics" / (row.key() + ".json"), row.metrics_json + "\n");
}

}  // namespace congest::bench
