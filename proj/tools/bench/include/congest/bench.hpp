#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "congest/constants.hpp"
#include "congest/graph.hpp"

namespace congest::bench {

using nlohmann::json;

struct GraphConfig {
  GraphKind kind = GraphKind::Gnp;
  std::vector<std::size_t> n;
  double p = 0.0;
  // Density formula instead of the fixed p: "<c>log2n/n" or "<c>lnn/n", capped at 1.
  std::string p_formula;
  // Bipartite: left side size, 0 for n / 2. Ignored otherwise.
  std::size_t left = 0;
  bool weighted = false;
  std::int64_t max_weight = 100;
  // Per seed: left side round(f n) with f uniform in the fraction range,
  // clamped so neither side exceeds max_part; p uniform in [p_min, p_max].
  double left_lo = 0, left_hi = 0;
  std::size_t max_part = 0;
  double p_min = 0, p_max = 0;

  double p_for(std::size_t n) const;
};

struct CellConfig {
  std::string name;
  std::string algorithm;
  GraphConfig graph;
  std::vector<double> epsilons{1.0};
  std::vector<std::uint64_t> seeds;
  json params = json::object();
  // Metrics to fit against n, per epsilon.
  std::vector<std::string> fit;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Constants constants;
  std::vector<CellConfig> cells;
  json to_json() const;
};

// Throws InvalidArgument on malformed configs. Constants in the config
// override `base` field by field.
ExperimentConfig parse_config(const std::string& text, const Constants& base = {});
ExperimentConfig load_config(const std::string& path, const Constants& base = {});
std::vector<std::string> algorithms();

struct Row {
  std::string cell;
  std::string algorithm;
  std::size_t n = 0;
  std::size_t m = 0;
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t broadcasts = 0;
  std::uint64_t max_edge_congestion = 0;
  double wall_time = 0;
  bool ok = false;
  std::string error;
  json extras = json::object();
  // SimMetrics JSON of the run; deterministic.
  std::string metrics_json;

  std::string key() const;
  double metric(const std::string& name) const;
};

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square in log space
  double stderr_slope = 0;
  double ci_low = 0, ci_high = 0;  // 95% Student t interval, equal to slope for 3 exact points
  std::size_t points = 0;
};

// Least squares on (ln x, ln y). Needs three distinct x.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);
// Averages the metric over seeds per n, then fits. Needs three distinct n.
FitResult fit_exponent(const std::vector<Row>& rows, const std::string& metric);

struct Fit {
  std::string cell;
  double epsilon = 1.0;
  std::string metric;
  FitResult result;
};

struct SweepResult {
  std::string config_name;
  std::vector<Row> rows;  // sorted by cell order, n, epsilon, seed
  std::vector<Fit> fits;
  std::vector<std::string> fit_errors;
  bool ok() const;
};

struct RunOptions {
  unsigned jobs = 1;
  std::uint64_t seed_offset = 0;
  // Called after each finished row, from the worker thread.
  std::function<void(const Row&)> progress;
};

// One (instance, seed) cell. Never throws for run failures: they become
// rows with ok = false and the error text.
Row run_cell(const CellConfig& cell, std::size_t n, double epsilon, std::uint64_t seed, const Constants& c);
SweepResult run_sweep(const ExperimentConfig& cfg, const RunOptions& opt = {});

json rows_json(const SweepResult& r);
std::string results_csv(const SweepResult& r);
json fits_json(const SweepResult& r);
// results.csv, results.json, fits.json, config.json and metrics/<key>.json.
void write_artifacts(const ExperimentConfig& cfg, const SweepResult& r, const std::string& dir);

struct SuiteOutcome {
  std::string name;
  int criterion = 0;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  SweepResult sweep;
};

struct SuiteInfo {
  std::string name;
  int criterion;
  std::string summary;
};

std::vector<SuiteInfo> suites();
// The sweep a suite runs. The determinism suite reuses the criterion 1 corpus.
ExperimentConfig suite_config(const std::string& name, const Constants& c);
// Runs and judges a suite; writes artifacts under out_dir when it is not empty.
SuiteOutcome run_suite(const std::string& name, const Constants& c, const RunOptions& opt,
                       const std::string& out_dir = "");

}  // namespace congest::bench
