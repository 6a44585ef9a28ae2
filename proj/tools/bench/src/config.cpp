#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "congest/bench.hpp"
#include "congest/errors.hpp"

namespace congest::bench {

namespace {

const std::vector<std::string> kAlgorithms = {
    "bcsim",  "aggsim", "apsp_unweighted", "apsp_weighted", "smoothing_pair", "matching",
    "cover",  "ldc",    "hierarchy",       "rarity",        "schedule_audit",
};

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw InvalidArgument("config: " + where + ": " + what);
}

template <class T>
std::vector<T> list_of(const json& v, const std::string& where) {
  if (v.is_array()) {
    std::vector<T> out;
    for (const auto& x : v) out.push_back(x.get<T>());
    return out;
  }
  if (v.is_number()) return {v.get<T>()};
  bad(where, "expected a number or a list");
}

std::vector<std::uint64_t> parse_seeds(const json& v, const std::string& where) {
  if (v.is_object()) {
    const auto from = v.value("from", std::uint64_t{0});
    const auto count = v.value("count", std::uint64_t{0});
    if (count == 0) bad(where, "seed range needs count > 0");
    std::vector<std::uint64_t> out(count);
    for (std::uint64_t i = 0; i < count; ++i) out[i] = from + i;
    return out;
  }
  return list_of<std::uint64_t>(v, where);
}

GraphConfig parse_graph(const json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "graph must be an object");
  GraphConfig g;
  g.kind = parse_graph_kind(j.value("kind", std::string("gnp")));
  if (!j.contains("n")) bad(where, "graph.n is required");
  g.n = list_of<std::size_t>(j["n"], where + ".n");
  if (g.n.empty()) bad(where, "graph.n is empty");
  if (j.contains("p")) {
    if (j["p"].is_string()) {
      g.p_formula = j["p"].get<std::string>();
      (void)g.p_for(g.n.front());
    } else {
      g.p = j["p"].get<double>();
    }
  }
  g.left = j.value("left", std::size_t{0});
  g.weighted = j.value("weighted", false);
  g.max_weight = j.value("max_weight", std::int64_t{100});
  if (j.contains("left_fraction")) {
    auto r = j["left_fraction"].get<std::vector<double>>();
    if (r.size() != 2 || !(0 < r[0] && r[0] <= r[1] && r[1] < 1)) bad(where, "left_fraction must be [lo, hi] in (0,1)");
    g.left_lo = r[0];
    g.left_hi = r[1];
  }
  g.max_part = j.value("max_part", std::size_t{0});
  if (j.contains("p_range")) {
    auto r = j["p_range"].get<std::vector<double>>();
    if (r.size() != 2 || r[0] > r[1]) bad(where, "p_range must be [lo, hi]");
    g.p_min = r[0];
    g.p_max = r[1];
  }
  return g;
}

json graph_json(const GraphConfig& g) {
  json j;
  j["kind"] = to_string(g.kind);
  j["n"] = g.n;
  if (g.p_formula.empty())
    j["p"] = g.p;
  else
    j["p"] = g.p_formula;
  if (g.left) j["left"] = g.left;
  if (g.weighted) {
    j["weighted"] = true;
    j["max_weight"] = g.max_weight;
  }
  if (g.left_hi > 0) j["left_fraction"] = {g.left_lo, g.left_hi};
  if (g.max_part) j["max_part"] = g.max_part;
  if (g.p_max > 0) j["p_range"] = {g.p_min, g.p_max};
  return j;
}

}  // namespace

double GraphConfig::p_for(std::size_t nodes) const {
  if (p_formula.empty()) return p;
  static const std::regex re(R"(^\s*([0-9.]+)\s*\*?\s*(log2n|lnn)\s*/\s*n\s*$)");
  std::smatch m;
  if (!std::regex_match(p_formula, m, re)) throw InvalidArgument("config: unknown p formula '" + p_formula + "'");
  const double c = std::stod(m[1].str());
  const double x = static_cast<double>(std::max<std::size_t>(nodes, 2));
  const double lg = m[2].str() == "log2n" ? std::log2(x) : std::log(x);
  return std::min(1.0, c * lg / x);
}

std::vector<std::string> algorithms() { return kAlgorithms; }

ExperimentConfig parse_config(const std::string& text, const Constants& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) bad("top level", "expected an object");
  ExperimentConfig cfg;
  cfg.name = j.value("name", std::string("experiment"));
  cfg.constants = base;
  try {
    if (j.contains("constants")) {
      json merged = json::parse(constants_to_json(base));
      for (const auto& [k, v] : j["constants"].items()) {
        if (!merged["constants"].contains(k)) bad("constants", "unknown constant '" + k + "'");
        merged["constants"][k] = v;
      }
      cfg.constants = parse_constants(merged.dump());
    }
    if (!j.contains("cells") || !j["cells"].is_array() || j["cells"].empty()) bad("top level", "no cells");
    std::size_t idx = 0;
    for (const auto& cj : j["cells"]) {
      CellConfig cell;
      cell.name = cj.value("name", "cell" + std::to_string(idx));
      const std::string where = "cell '" + cell.name + "'";
      cell.algorithm = cj.value("algorithm", std::string());
      if (std::find(kAlgorithms.begin(), kAlgorithms.end(), cell.algorithm) == kAlgorithms.end())
        bad(where, "unknown algorithm '" + cell.algorithm + "'");
      if (!cj.contains("graph")) bad(where, "graph is required");
      cell.graph = parse_graph(cj["graph"], where);
      if (cj.contains("epsilon")) cell.epsilons = list_of<double>(cj["epsilon"], where + ".epsilon");
      for (double e : cell.epsilons)
        if (!(e > 0.0 && e <= 1.0)) bad(where, "epsilon must lie in (0, 1]");
      cell.seeds = cj.contains("seeds") ? parse_seeds(cj["seeds"], where + ".seeds") : std::vector<std::uint64_t>{0};
      if (cj.contains("params")) {
        if (!cj["params"].is_object()) bad(where, "params must be an object");
        cell.params = cj["params"];
      }
      if (cj.contains("fit")) cell.fit = cj["fit"].get<std::vector<std::string>>();
      for (const auto& c : cfg.cells)
        if (c.name == cell.name) bad(where, "duplicate cell name");
      cfg.cells.push_back(std::move(cell));
      ++idx;
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const Constants& base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

json ExperimentConfig::to_json() const {
  json j;
  j["name"] = name;
  j["constants"] = json::parse(constants_to_json(constants))["constants"];
  j["cells"] = json::array();
  for (const auto& c : cells) {
    json cj;
    cj["name"] = c.name;
    cj["algorithm"] = c.algorithm;
    cj["graph"] = graph_json(c.graph);
    cj["epsilon"] = c.epsilons;
    cj["seeds"] = c.seeds;
    cj["params"] = c.params;
    if (!c.fit.empty()) cj["fit"] = c.fit;
    j["cells"].push_back(cj);
  }
  return j;
}

}  // namespace congest::bench
