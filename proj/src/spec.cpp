#include "nullcontact/spec.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nullcontact/error.hpp"

namespace nc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, "region spec: " + what); }

double number(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  if (!j[key].is_number()) bad(std::string("field \"") + key + "\" must be a number");
  return j[key].get<double>();
}

std::vector<double> numbers(const json& j, const char* key, std::size_t expect = 0) {
  if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  const json& a = j[key];
  if (!a.is_array()) bad(std::string("field \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const json& x : a) {
    if (!x.is_number()) bad(std::string("field \"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  if (expect && out.size() != expect)
    bad(std::string("field \"") + key + "\" must have " + std::to_string(expect) + " entries");
  return out;
}

Event event_of(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

Region build(const json& j) {
  if (!j.is_object()) bad("expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) bad("missing string field \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "ellipsoid") return make_revolution(RadiusSquaredProfile::ellipsoid(number(j, "a"), number(j, "b")));
  if (kind == "revolution")
    return make_revolution(
        RadiusSquaredProfile::polynomial(numbers(j, "rho_poly"), number(j, "t_min"), number(j, "t_max")));
  if (kind == "diamond") return make_diamond();
  if (kind == "ball_union") {
    const double smoothing = j.contains("smoothing") ? number(j, "smoothing") : 0.05;
    return smoothed_ball_union(event_of(numbers(j, "c1", 3)), event_of(numbers(j, "c2", 3)), number(j, "radius"),
                               smoothing);
  }
  if (kind == "transformed") {
    if (!j.contains("base")) bad("transformed spec needs \"base\"");
    const Region base = build(j["base"]);
    std::vector<ConformalMap::Factor> factors;
    if (j.contains("boost")) {
      const json& b = j["boost"];
      if (!b.is_object()) bad("\"boost\" must be an object");
      const auto axis = numbers(b, "axis", 2);
      factors.push_back(boost(number(b, "rapidity"), {axis[0], axis[1]}));
    }
    if (j.contains("rotate")) factors.push_back(rotation(number(j, "rotate")));
    if (j.contains("dilate")) factors.push_back(Dilation{number(j, "dilate")});
    if (j.contains("translate")) factors.push_back(Translation{event_of(numbers(j, "translate", 3))});
    return make_transformed(base, ConformalMap(std::move(factors)));
  }
  bad("unknown kind \"" + kind + "\"");
}

}  // namespace

Region parse_region_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
  return build(j);
}

Region load_region_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read region spec " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_region_spec(ss.str());
}

}  // namespace nc
