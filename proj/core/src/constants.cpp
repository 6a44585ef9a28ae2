#include "congest/constants.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "congest/errors.hpp"

namespace congest {

namespace {

using nlohmann::ordered_json;

template <class F>
void each_field(Constants& c, F&& f) {
  f("ldc_beta", c.ldc_beta);
  f("ldc_diameter_c", c.ldc_diameter_c);
  f("ldc_degree_c", c.ldc_degree_c);
  f("bs_degree_c", c.bs_degree_c);
  f("rarity_c", c.rarity_c);
  f("smoothing_c", c.smoothing_c);
  f("c1", c.c1);
  f("c2", c.c2);
  f("c3", c.c3);
  f("sim_message_c", c.sim_message_c);
  f("slot_c", c.slot_c);
  f("source_audit_c", c.source_audit_c);
  f("schedule_c", c.schedule_c);
  f("depth_c", c.depth_c);
  f("landmark_c", c.landmark_c);
  f("matching_c", c.matching_c);
  f("maximal_iter_c", c.maximal_iter_c);
  f("cover_depth_c", c.cover_depth_c);
  f("cover_membership_c", c.cover_membership_c);
}

}  // namespace

Constants default_constants() { return Constants{}; }

Constants parse_constants(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("constants: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("constants: expected an object");
  Constants c;
  c.version = j.value("version", 1);
  if (c.version != 1) throw InvalidArgument("constants: unsupported version " + std::to_string(c.version));
  const ordered_json& v = j.contains("constants") ? j["constants"] : j;
  each_field(c, [&](const char* key, double& x) {
    if (v.contains(key)) {
      if (!v[key].is_number()) throw InvalidArgument(std::string("constants: ") + key + " must be a number");
      x = v[key].get<double>();
      if (x < 0) throw InvalidArgument(std::string("constants: ") + key + " must be nonnegative");
    }
  });
  if (v.contains("max_reseeds")) c.max_reseeds = v["max_reseeds"].get<unsigned>();
  return c;
}

Constants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open constants file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_constants(ss.str());
}

std::string constants_to_json(const Constants& c0) {
  Constants c = c0;
  ordered_json v;
  each_field(c, [&](const char* key, double& x) { v[key] = x; });
  v["max_reseeds"] = c.max_reseeds;
  ordered_json j;
  j["version"] = c.version;
  j["constants"] = v;
  return j.dump(2);
}

}  // namespace congest
