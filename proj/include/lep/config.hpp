#pragma once

/**
 * @file config.hpp
 * @brief JSON experiment configs.
 *
 * body:    {"type": "disc", "center": [x, y], "radius": r}
 *          {"type": "polygon", "vertices": [[x, y], ...]}
 *          "unit_disc" | "unit_square"
 * density: {"type": "uniform_box", "half_width": h}
 *          {"type": "two_level", "c_in": a, "c_out": b, "half_width": h}
 *          {"type": "two_level_normalized", "ratio": k, "half_width": h}
 * region:  {"type": "sband", "s": [[lo, hi], ...], "theta": [[lo, hi], ...]}
 *          {"type": "fe", "alpha": .., "a": .., "b": .., "c": .., "d": ..}
 *          "upper" | "lower" | "full" | "empty"
 * Every region may carry a "name". A region list is either an array of
 * regions or {"lattice": {"s_cells": m, "theta_cells": k}} (see sband_lattice).
 */

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "lep/density.hpp"
#include "lep/empirical.hpp"
#include "lep/errors.hpp"
#include "lep/geometry.hpp"
#include "lep/region.hpp"
#include "lep/verify.hpp"

namespace lep {

struct NamedRegion {
  std::string name;
  CylinderRegion region;
};

/// Throws ConfigError if the file is missing or is not valid JSON.
nlohmann::json load_config(const std::string& path);

ConvexBody parse_body(const nlohmann::json& j);
BoundaryDensity parse_density(const nlohmann::json& j, const ConvexBody& body);
NamedRegion parse_region(const nlohmann::json& j, const ConvexBody& body, std::size_t index);
std::vector<NamedRegion> parse_regions(const nlohmann::json& j, const ConvexBody& body);
/// {"n": [...], "eps0": .., "beta": .., "eps": [...]}
Schedule parse_schedule(const nlohmann::json& j);
/// Keys of DiscSearchBox; missing keys keep their defaults.
DiscSearchBox parse_search_box(const nlohmann::json& j);

/// j[key] converted to T, or `fallback` when the key is absent. Throws
/// ConfigError on a type mismatch.
template <class T>
T value_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

}  // namespace lep
