#include "lep/config.hpp"

#include <fstream>

#include "lep/errors.hpp"
#include "lep/set_classes.hpp"

namespace lep {

namespace {

Point2 parse_point(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(what + " must be a pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

IntervalSet parse_intervals(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be a list of [lo, hi] pairs");
  IntervalSet out;
  for (const auto& iv : j) {
    const Point2 p = parse_point(iv, what);
    if (p.y < p.x) throw ConfigError(what + " has an interval with hi < lo");
    out = out | IntervalSet(p.x, p.y);
  }
  return out;
}

double required(const nlohmann::json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(what + " needs a numeric '" + key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ConvexBody parse_body(const nlohmann::json& j) {
  try {
    if (j.is_null()) return ConvexBody::unit_disc();
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "unit_disc") return ConvexBody::unit_disc();
      if (s == "unit_square") return ConvexBody::unit_square();
      throw ConfigError("unknown body '" + s + "'");
    }
    const auto type = value_or<std::string>(j, "type", "");
    if (type == "disc") {
      return ConvexBody::disc(j.contains("center") ? parse_point(j["center"], "center") : Point2{},
                              required(j, "radius", "disc"));
    }
    if (type == "polygon") {
      if (!j.contains("vertices") || !j["vertices"].is_array()) {
        throw ConfigError("polygon needs 'vertices'");
      }
      std::vector<Point2> v;
      for (const auto& p : j["vertices"]) v.push_back(parse_point(p, "vertex"));
      return ConvexBody::polygon(std::move(v));
    }
    throw ConfigError("unknown body type '" + type + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("body: ") + e.what());
  }
}

BoundaryDensity parse_density(const nlohmann::json& j, const ConvexBody& body) {
  try {
    if (j.is_null()) return BoundaryDensity::uniform_box(2.0);
    const auto type = value_or<std::string>(j, "type", "");
    const double h = value_or(j, "half_width", 2.0);
    if (type == "uniform_box") return BoundaryDensity::uniform_box(h);
    if (type == "two_level") {
      return BoundaryDensity::two_level(required(j, "c_in", type), required(j, "c_out", type), h);
    }
    if (type == "two_level_normalized") {
      return BoundaryDensity::two_level_normalized(body, required(j, "ratio", type), h);
    }
    throw ConfigError("unknown density type '" + type + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("density: ") + e.what());
  }
}

NamedRegion parse_region(const nlohmann::json& j, const ConvexBody& body, std::size_t index) {
  const std::string fallback = "region_" + std::to_string(index);
  try {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "upper") return {s, CylinderRegion::upper()};
      if (s == "lower") return {s, CylinderRegion::lower()};
      if (s == "full") return {s, CylinderRegion::full()};
      if (s == "empty") return {s, CylinderRegion::empty()};
      throw ConfigError("unknown region '" + s + "'");
    }
    const auto name = value_or<std::string>(j, "name", fallback);
    const auto type = value_or<std::string>(j, "type", "");
    if (type == "sband") {
      if (!j.contains("s")) throw ConfigError("sband needs 's'");
      const IntervalSet s = parse_intervals(j["s"], "s");
      if (j.contains("theta")) {
        return {name, CylinderRegion::sband(s, parse_intervals(j["theta"], "theta"))};
      }
      return {name, CylinderRegion::sband(s)};
    }
    if (type == "fe") {
      if (!body.is_disc()) throw ConfigError("fe regions need a disc body");
      const FEParams p{value_or(j, "alpha", 0.0), value_or(j, "a", 0.0), value_or(j, "b", 0.0),
                       value_or(j, "c", 0.0), value_or(j, "d", 0.0)};
      return {name, fe_band(p, body.as_disc().radius)};
    }
    throw ConfigError("unknown region type '" + type + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fallback + ": " + e.what());
  }
}

std::vector<NamedRegion> parse_regions(const nlohmann::json& j, const ConvexBody& body) {
  if (j.is_object() && j.contains("lattice")) {
    const auto& l = j["lattice"];
    const auto s_cells = value_or<std::size_t>(l, "s_cells", 2);
    const auto theta_cells = value_or<std::size_t>(l, "theta_cells", 4);
    if (s_cells < 1 || theta_cells < 1) throw ConfigError("lattice needs >= 1 cell");
    std::vector<NamedRegion> out;
    for (auto& r : sband_lattice(s_cells, theta_cells)) {
      out.push_back({"lattice_" + std::to_string(out.size()), std::move(r)});
    }
    return out;
  }
  if (!j.is_array() || j.empty()) throw ConfigError("'regions' must be a nonempty list");
  std::vector<NamedRegion> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_region(j[k], body, k));
  return out;
}

Schedule parse_schedule(const nlohmann::json& j) {
  Schedule s;
  s.n = value_or<std::vector<std::uint64_t>>(j, "n", {});
  s.eps0 = value_or(j, "eps0", s.eps0);
  s.beta = value_or(j, "beta", s.beta);
  s.eps = value_or<std::vector<double>>(j, "eps", {});
  return s;
}

DiscSearchBox parse_search_box(const nlohmann::json& j) {
  DiscSearchBox b;
  b.c_lo = value_or(j, "c_lo", b.c_lo);
  b.c_hi = value_or(j, "c_hi", b.c_hi);
  b.r_lo = value_or(j, "r_lo", b.r_lo);
  b.r_hi = value_or(j, "r_hi", b.r_hi);
  b.step = value_or(j, "step", b.step);
  b.stages = value_or(j, "stages", b.stages);
  b.refine = value_or(j, "refine", b.refine);
  b.support_half_width = value_or(j, "support_half_width", b.support_half_width);
  return b;
}

}  // namespace lep
