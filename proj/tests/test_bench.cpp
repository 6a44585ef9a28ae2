#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "congest/bench.hpp"
#include "congest/errors.hpp"

using namespace congest;
using namespace congest::bench;

namespace {

std::vector<Row> synthetic(const std::vector<std::size_t>& ns, double (*f)(double)) {
  std::vector<Row> rows;
  for (auto n : ns) {
    for (std::uint64_t s = 0; s < 2; ++s) {
      Row r;
      r.n = n;
      r.seed = s;
      r.ok = true;
      r.messages = static_cast<std::uint64_t>(std::llround(f(static_cast<double>(n))));
      r.extras["exact"] = f(static_cast<double>(n));
      rows.push_back(r);
    }
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("congest_bench_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

const char* kPathConfig = R"({
  "name": "path-apsp",
  "cells": [{"name": "path", "algorithm": "apsp_unweighted", "graph": {"kind": "path", "n": 16}, "seeds": [0]}]
})";

}  // namespace

TEST(Fit, QuadraticIsExact) {
  auto rows = synthetic({64, 128, 256}, [](double n) { return n * n; });
  auto f = fit_exponent(rows, "messages");
  EXPECT_NEAR(f.slope, 2.0, 1e-9);
  EXPECT_NEAR(f.residual, 0.0, 1e-9);
  EXPECT_EQ(f.points, 3u);
}

TEST(Fit, ScaledPowerIsExact) {
  auto rows = synthetic({64, 128, 256, 512}, [](double n) { return 7 * std::pow(n, 2.5); });
  auto f = fit_exponent(rows, "exact");
  EXPECT_NEAR(f.slope, 2.5, 1e-9);
  EXPECT_NEAR(f.intercept, std::log(7.0), 1e-9);
  EXPECT_NEAR(f.ci_low, 2.5, 1e-6);
  EXPECT_NEAR(f.ci_high, 2.5, 1e-6);
}

TEST(Fit, NoisyPointsGiveAnInterval) {
  auto f = fit_loglog({{10, 100}, {20, 420}, {40, 1500}, {80, 6600}});
  EXPECT_NEAR(f.slope, 2.0, 0.1);
  EXPECT_LT(f.ci_low, f.slope);
  EXPECT_GT(f.ci_high, f.slope);
  EXPECT_GT(f.residual, 0.0);
}

TEST(Fit, NeedsThreeDistinctN) {
  auto rows = synthetic({64, 128}, [](double n) { return n; });
  EXPECT_THROW(fit_exponent(rows, "messages"), InvalidArgument);
  EXPECT_THROW(fit_loglog({{1, 1}, {2, 2}, {2, 3}}), InvalidArgument);
  EXPECT_THROW(fit_loglog({{1, 1}, {2, 0}, {3, 3}}), InvalidArgument);
}

TEST(Config, ParsesAndRoundTrips) {
  auto cfg = parse_config(R"({
    "name": "x",
    "constants": {"c2": 5},
    "cells": [{"algorithm": "cover", "graph": {"kind": "gnp", "n": [32, 64], "p": "16log2n/n"},
               "epsilon": [0.5], "seeds": {"from": 3, "count": 2}, "params": {"k": 2}, "fit": ["rounds"]}]
  })");
  EXPECT_EQ(cfg.constants.c2, 5);
  EXPECT_EQ(cfg.constants.c1, 8);
  ASSERT_EQ(cfg.cells.size(), 1u);
  EXPECT_EQ(cfg.cells[0].name, "cell0");
  EXPECT_EQ(cfg.cells[0].seeds, (std::vector<std::uint64_t>{3, 4}));
  EXPECT_DOUBLE_EQ(cfg.cells[0].graph.p_for(32), std::min(1.0, 16 * 5.0 / 32));
  EXPECT_DOUBLE_EQ(cfg.cells[0].graph.p_for(256), 16 * 8.0 / 256);
  auto again = parse_config(cfg.to_json().dump());
  EXPECT_EQ(again.to_json(), cfg.to_json());
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("{"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"cells": []})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"cells": [{"algorithm": "nope", "graph": {"n": 4}}]})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"cells": [{"algorithm": "ldc"}]})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"cells": [{"algorithm": "ldc", "graph": {"n": 4, "p": "n^2"}}]})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"cells": [{"algorithm": "ldc", "graph": {"n": 4}, "epsilon": 0}]})"),
               InvalidArgument);
  EXPECT_THROW(parse_config(R"({"constants": {"c9": 1}, "cells": [{"algorithm": "ldc", "graph": {"n": 4}}]})"),
               InvalidArgument);
  EXPECT_THROW(parse_config(R"({"constants": {"c1": -1}, "cells": [{"algorithm": "ldc", "graph": {"n": 4}}]})"),
               InvalidArgument);
}

TEST(Run, PathApspGivesOneRow) {
  auto cfg = parse_config(kPathConfig);
  auto r = run_sweep(cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.ok()) << r.rows[0].error;
  EXPECT_EQ(r.rows[0].extras["regime"], "full");
  auto dir = scratch("path");
  write_artifacts(cfg, r, dir.string());
  std::istringstream csv(slurp(dir / "results.csv"));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 2u);
  auto res = json::parse(slurp(dir / "results.json"));
  EXPECT_EQ(res["rows"].size(), 1u);
  EXPECT_EQ(res["constants"]["c1"], 8);
  EXPECT_TRUE(std::filesystem::exists(dir / "fits.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "metrics" / (r.rows[0].key() + ".json")));
  std::filesystem::remove_all(dir);
}

TEST(Run, BrokenConstantSurfacesBudgetError) {
  auto cfg = parse_config(R"({"constants": {"c1": 0}, "cells": [{"algorithm": "bcsim",
      "graph": {"kind": "gnp", "n": 32, "p": 0.2}, "params": {"program": "bfs"}}]})");
  auto r = run_sweep(cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.rows[0].error.rfind("BudgetError", 0), 0u) << r.rows[0].error;
}

TEST(Run, FitsPerEpsilon) {
  auto cfg = parse_config(R"({"cells": [{"name": "t", "algorithm": "apsp_unweighted",
      "graph": {"kind": "cycle", "n": [16, 24, 32]}, "epsilon": [0.5, 1.0], "fit": ["messages"]}]})");
  auto r = run_sweep(cfg);
  EXPECT_TRUE(r.ok());
  ASSERT_EQ(r.fits.size(), 2u);
  EXPECT_EQ(r.fits[0].epsilon, 0.5);
  EXPECT_EQ(r.fits[1].epsilon, 1.0);
  for (const auto& f : r.fits) EXPECT_GT(f.result.slope, 1.0);
  auto j = fits_json(r);
  EXPECT_EQ(j["fits"].size(), 2u);
}

TEST(Run, WorkerPoolKeepsOrderAndMetrics) {
  auto cfg = parse_config(R"({"cells": [
      {"name": "a", "algorithm": "bcsim", "graph": {"kind": "gnp", "n": 24, "p": 0.3}, "seeds": {"count": 4}},
      {"name": "b", "algorithm": "matching", "graph": {"kind": "bipartite_gnp", "n": 20, "p": 0.4}, "seeds": [1, 2]}]})");
  RunOptions serial, pooled;
  pooled.jobs = 3;
  pooled.seed_offset = 0;
  auto a = run_sweep(cfg, serial), b = run_sweep(cfg, pooled);
  ASSERT_EQ(a.rows.size(), 6u);
  ASSERT_EQ(b.rows.size(), 6u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].key(), b.rows[i].key());
    EXPECT_EQ(a.rows[i].metrics_json, b.rows[i].metrics_json);
    EXPECT_EQ(a.rows[i].extras, b.rows[i].extras);
  }
  RunOptions shifted;
  shifted.seed_offset = 10;
  auto c = run_sweep(cfg, shifted);
  EXPECT_EQ(c.rows[0].seed, 10u);
}

TEST(Run, EveryAlgorithmRunsOnASmallInstance) {
  for (const auto& a : algorithms()) {
    json cfg = {{"cells", {{{"algorithm", a}, {"graph", {{"kind", "gnp"}, {"n", 24}, {"p", 0.3}}}}}}};
    if (a == "matching") cfg["cells"][0]["graph"]["kind"] = "bipartite_gnp";
    if (a == "apsp_weighted") cfg["cells"][0]["graph"]["weighted"] = true;
    if (a == "aggsim" || a == "smoothing_pair" || a == "hierarchy" || a == "rarity") cfg["cells"][0]["epsilon"] = 0.5;
    if (a == "rarity") cfg["cells"][0]["params"] = {{"builds", 20}};
    auto r = run_sweep(parse_config(cfg.dump()));
    ASSERT_EQ(r.rows.size(), 1u) << a;
    EXPECT_TRUE(r.rows[0].ok) << a << ": " << r.rows[0].error;
  }
}

TEST(Suites, NamesCoverEveryCriterion) {
  auto s = suites();
  ASSERT_EQ(s.size(), 11u);
  for (int i = 0; i < 11; ++i) {
    EXPECT_EQ(s[static_cast<std::size_t>(i)].criterion, i + 1);
    EXPECT_NO_THROW(suite_config(s[static_cast<std::size_t>(i)].name, Constants{}));
  }
  EXPECT_THROW(suite_config("nope", Constants{}), InvalidArgument);
  auto c9 = suite_config("matching", Constants{});
  std::size_t instances = 0;
  for (const auto& c : c9.cells) instances += c.graph.n.size() * c.seeds.size();
  EXPECT_EQ(instances, 100u);
}

TEST(Suites, BipartiteInstancesRespectPartCap) {
  auto cfg = suite_config("matching", Constants{});
  for (const auto& cell : cfg.cells) {
    for (auto n : cell.graph.n) {
      auto row = run_cell(cell, n, 1.0, 0, Constants{});
      ASSERT_TRUE(row.ok) << row.error;
      const auto left = row.extras["left"].get<std::size_t>();
      EXPECT_LE(left, 100u);
      EXPECT_LE(n - left, 100u);
    }
  }
}
