#pragma once

/**
 * @file region.hpp
 * @brief Measurable subsets of the cylinder Gamma = boundary x [-1, 1].
 *
 * A region is queried column by column: `section(theta)` returns the set of
 * s in [-1, 1] with (theta, s) in the region. All measures are integrals of
 * section lengths, which keeps them exact in s for every representation
 * except the tau-image, whose sections are located by sampling and
 * bisection.
 *
 * Points in an outer corner sector of a polygon carry a normal that is not
 * determined by theta. `corner_section` answers the query along one such
 * normal; only tau-images actually depend on it.
 */

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lep/geometry.hpp"
#include "lep/interval_set.hpp"

namespace lep {

using AmbientSet = std::function<bool(const Point2&)>;
using BoundaryFunction = std::function<double(double)>;

class CylinderRegion;

/// Boolean raster over theta x s, cell (i, j) covering
/// [i L / n_theta, (i + 1) L / n_theta) x [-1 + 2 j / n_s, -1 + 2 (j + 1) / n_s).
class Raster {
 public:
  Raster(std::size_t n_theta, std::size_t n_s, double perimeter);

  /// Cell-midpoint rasterization. Cells whose midpoint has no defined
  /// normal (polygon corners) are left empty.
  static Raster rasterize(const CylinderRegion& region, std::size_t n_theta, std::size_t n_s,
                          double perimeter);

  std::size_t n_theta() const { return n_theta_; }
  std::size_t n_s() const { return n_s_; }
  double perimeter() const { return perimeter_; }
  double cell_theta() const { return perimeter_ / static_cast<double>(n_theta_); }
  double cell_s() const { return 2.0 / static_cast<double>(n_s_); }
  double theta_mid(std::size_t i) const { return (static_cast<double>(i) + 0.5) * cell_theta(); }
  double s_mid(std::size_t j) const { return -1.0 + (static_cast<double>(j) + 0.5) * cell_s(); }

  bool get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, bool value);
  std::size_t column_of(double theta) const;
  std::size_t row_of(double s) const;
  IntervalSet column_section(std::size_t i) const;
  std::size_t count() const;
  /// Number of cells set in exactly one of the two rasters.
  std::size_t count_xor(const Raster& other) const;

 private:
  std::size_t n_theta_;
  std::size_t n_s_;
  double perimeter_;
  std::vector<std::uint64_t> bits_;
};

class CylinderRegion {
 public:
  enum class Kind { Band, SBand, Grid, TauImage, Composite };
  enum class Op { Union, Intersection, Difference, SymmetricDifference };

  /// {(theta, s) : 0 < s <= f(theta) or f(theta) < s <= 0}. Rejects f with
  /// |f| > 1 on a 4096-point probe of [0, perimeter).
  static CylinderRegion band(BoundaryFunction f, double perimeter);
  /// Band of clamp(f, -1, 1), without the probe.
  static CylinderRegion band_clamped(BoundaryFunction f);
  /// Product of s-intervals with theta-intervals (all of theta when absent).
  static CylinderRegion sband(IntervalSet s, std::optional<IntervalSet> theta = std::nullopt);
  static CylinderRegion grid(Raster raster);
  /// tau_eps A for A a subset of the eps-collar, given by its membership.
  static CylinderRegion tau_image(const ConvexBody& body, double eps, AmbientSet member);
  static CylinderRegion empty() { return sband(IntervalSet{}); }
  static CylinderRegion full() { return sband(IntervalSet{-1.0, 1.0}); }
  /// {s > 0} and {s <= 0}.
  static CylinderRegion upper() { return sband(IntervalSet{0.0, 1.0}); }
  static CylinderRegion lower() { return sband(IntervalSet{-1.0, 0.0}); }

  Kind kind() const;

  bool contains(double theta, double s) const;
  /// Membership of a collar point; tau-images test the ambient position.
  bool contains(const LocalPoint& p) const;
  IntervalSet section(double theta) const;
  /// Section in s in (0, 1] along the outer normal at angle phi of a corner.
  IntervalSet corner_section(const Corner& corner, double phi) const;
  /// True when some leaf is a tau-image.
  bool depends_on_normal() const;
  /// Theta positions where sections may jump.
  void collect_breakpoints(std::vector<double>& out) const;

  /// Set algebra, evaluated lazily and exactly on sections.
  friend CylinderRegion operator|(const CylinderRegion& a, const CylinderRegion& b);
  friend CylinderRegion operator&(const CylinderRegion& a, const CylinderRegion& b);
  friend CylinderRegion operator-(const CylinderRegion& a, const CylinderRegion& b);
  friend CylinderRegion operator^(const CylinderRegion& a, const CylinderRegion& b);

  /// The band function when kind() == Band.
  const BoundaryFunction* band_function() const;
  /// The s-intervals when kind() == SBand with no theta restriction.
  const IntervalSet* sband_intervals() const;

  struct Node;

 private:
  explicit CylinderRegion(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static CylinderRegion combine(Op op, const CylinderRegion& a, const CylinderRegion& b);

  std::shared_ptr<const Node> node_;
};

}  // namespace lep
