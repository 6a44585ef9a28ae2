#include <cstdio>
#include <set>

#include <CLI11.hpp>

#include "congest/bench.hpp"
#include "congest/errors.hpp"

using namespace congest;
using namespace congest::bench;

namespace {

// Wall-clock limits per criterion, seconds.
double limit_for(int criterion) {
  switch (criterion) {
    case 1: case 5: case 11: return 300;
    case 2: case 7: case 9: return 600;
    case 3: return 1200;
    case 4: return 3600;
    case 6: case 8: return 1800;
    case 10: return 900;
    default: return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria, one PASS/FAIL line each"};
  std::string constants_path = CONGEST_CONSTANTS_FILE, out_dir;
  std::vector<int> only, known;
  unsigned jobs = 1;
  app.add_option("--constants", constants_path, "Pinned constants file");
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--out-dir", out_dir, "Keep suite artifacts under this directory");
  app.add_option("--jobs", jobs, "Worker threads per suite");
  app.add_option("--known-deviation", known,
                 "Criteria still judged and printed, whose FAIL does not change the exit code");
  CLI11_PARSE(app, argc, argv);

  Constants c;
  try {
    c = load_constants(constants_path);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  const std::set<int> selected(only.begin(), only.end()), waived(known.begin(), known.end());
  RunOptions opt;
  opt.jobs = jobs;
  int failed = 0, deviations = 0, ran = 0;
  for (const auto& s : suites()) {
    if (!selected.empty() && !selected.count(s.criterion)) continue;
    ++ran;
    const std::string dir = out_dir.empty() ? "" : out_dir + "/" + s.name;
    SuiteOutcome o;
    try {
      o = run_suite(s.name, c, opt, dir);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("suite error: ") + e.what();
    }
    const bool in_time = o.seconds <= limit_for(s.criterion);
    const bool pass = o.pass && in_time;
    const bool tolerated = !pass && waived.count(s.criterion);
    failed += !pass && !tolerated;
    deviations += tolerated;
    std::printf("criterion %2d %-17s %s  %s; %.1fs of %.0fs%s%s\n", s.criterion, s.name.c_str(), pass ? "PASS" : "FAIL",
                o.detail.c_str(), o.seconds, limit_for(s.criterion), in_time ? "" : " (over time)",
                tolerated ? " [known deviation]" : "");
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass, %d known deviation(s)\n", ran - failed - deviations, ran, deviations);
  return failed == 0 ? 0 : 1;
}
