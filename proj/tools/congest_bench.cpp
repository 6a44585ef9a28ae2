#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "congest/bench.hpp"
#include "congest/errors.hpp"

using namespace congest;
using namespace congest::bench;

namespace {

void print_row(const Row& r) {
  std::fprintf(stderr, "%-4s %-48s rounds=%llu messages=%llu %.2fs%s%s\n", r.ok ? "ok" : "FAIL", r.key().c_str(),
               static_cast<unsigned long long>(r.rounds), static_cast<unsigned long long>(r.messages), r.wall_time,
               r.error.empty() ? "" : "  ", r.error.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment sweeps and acceptance suites for the CONGEST simulators"};
  std::string config_path, suite, out_dir = "bench_out", constants_path;
  unsigned jobs = 1;
  std::uint64_t seed_offset = 0;
  bool list = false, quiet = false;
  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--suite", suite, "Named acceptance suite");
  app.add_option("--out-dir", out_dir, "Directory for results.csv, results.json, fits.json");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed-offset", seed_offset, "Added to every seed");
  app.add_option("--constants", constants_path, "Constants file; defaults to the built-in version 1 values");
  app.add_flag("--list-suites", list, "Print the suite names and exit");
  app.add_flag("-q,--quiet", quiet, "No per-run progress");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& s : suites()) std::printf("%-18s criterion %-2d %s\n", s.name.c_str(), s.criterion, s.summary.c_str());
    return 0;
  }
  if (config_path.empty() == suite.empty()) {
    std::cerr << "exactly one of --config and --suite is required\n";
    return 2;
  }
  RunOptions opt;
  opt.jobs = jobs;
  opt.seed_offset = seed_offset;
  if (!quiet) opt.progress = print_row;
  try {
    const Constants base = constants_path.empty() ? default_constants() : load_constants(constants_path);
    if (!suite.empty()) {
      SuiteOutcome o = run_suite(suite, base, opt, out_dir);
      std::printf("criterion %d %s: %s (%s) %.1fs\n", o.criterion, o.name.c_str(), o.pass ? "PASS" : "FAIL",
                  o.detail.c_str(), o.seconds);
      return o.pass ? 0 : 1;
    }
    const ExperimentConfig cfg = load_config(config_path, base);
    SweepResult r = run_sweep(cfg, opt);
    write_artifacts(cfg, r, out_dir);
    std::size_t failed = 0;
    for (const auto& row : r.rows) failed += !row.ok;
    for (const auto& f : r.fits)
      std::printf("fit %s eps=%.4g %s: slope %.4f ci95 [%.4f, %.4f] residual %.2e\n", f.cell.c_str(), f.epsilon,
                  f.metric.c_str(), f.result.slope, f.result.ci_low, f.result.ci_high, f.result.residual);
    for (const auto& e : r.fit_errors) std::printf("fit error: %s\n", e.c_str());
    std::printf("%zu runs, %zu failed; artifacts in %s\n", r.rows.size(), failed, out_dir.c_str());
    return r.ok() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
