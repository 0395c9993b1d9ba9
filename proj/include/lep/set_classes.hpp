#pragma once

/**
 * @file set_classes.hpp
 * @brief Indexing classes near the boundary and their limits on the cylinder.
 *
 * Ambient families are symmetric differences A = K' xor K with K' close to
 * K (ellipses around a disc, quadrangles or convex polygons around the unit
 * square), or normal-distance shells {z : d_s(z)/eps in [a,b] u [c,d]}.
 * Their limits are boundary-function bands and s-interval pairs.
 */

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lep/density.hpp"
#include "lep/geometry.hpp"
#include "lep/region.hpp"

namespace lep {

enum class FamilyKind { EllipseSymmDiff, IntervalBands, QuadrangleSymmDiff, ConvexSymmDiff };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// Closed ellipse with the given center, semi-axes and rotation of the
/// first axis.
struct Ellipse {
  Point2 center;
  double semi_a{1.0};
  double semi_b{1.0};
  double alpha{0.0};

  bool contains(const Point2& z) const;
  /// Distance from `from` (inside the ellipse) to the boundary along the unit
  /// direction `dir`.
  double radial(const Point2& from, const Vec2& dir) const;
};

/// Ellipse described relative to a disc of radius R and a collar width eps:
/// center c_K + eps (x0, y0), semi-axes R + eps u1 and R + eps u2,
/// rotation alpha.
struct EllipseOffsets {
  double u1{0.0};
  double u2{0.0};
  double x0{0.0};
  double y0{0.0};
  double alpha{0.0};
};

Ellipse ellipse_from_offsets(const ConvexBody& disc, double eps, const EllipseOffsets& o);

struct IntervalParams {
  double a{0.0};
  double b{0.0};
  double c{0.0};
  double d{0.0};
};

/// One element A of a family, validated against the eps-collar.
class FamilyMember {
 public:
  /// E xor K for a disc body; rejects E unless B(c, R - eps) is inside E and
  /// E is inside B(c, R + eps).
  static FamilyMember ellipse(const ConvexBody& body, double eps, const Ellipse& e);
  /// {z : d_s(z)/eps in [a,b] u [c,d]} with -1 <= a <= b <= c <= d <= 1.
  static FamilyMember interval_bands(const ConvexBody& body, double eps, IntervalParams p);
  /// Q xor K for the unit square and a convex counterclockwise quadrangle Q.
  static FamilyMember quadrangle(const ConvexBody& body, double eps,
                                 const std::array<Point2, 4>& q);
  /// C xor K for the unit square and a convex polygon C.
  static FamilyMember convex(const ConvexBody& body, double eps, const ConvexBody& c);

  FamilyKind kind() const { return kind_; }
  double eps() const { return eps_; }
  const ConvexBody& body() const { return body_; }
  bool contains(const Point2& z) const;
  AmbientSet membership() const;
  nlohmann::json params_json() const;

  const Ellipse* ellipse_params() const { return std::get_if<Ellipse>(&shape_); }
  const IntervalParams* interval_params() const { return std::get_if<IntervalParams>(&shape_); }

 private:
  FamilyMember(FamilyKind kind, ConvexBody body, double eps,
               std::variant<Ellipse, IntervalParams, ConvexBody> shape)
      : kind_(kind), body_(std::move(body)), eps_(eps), shape_(std::move(shape)) {}

  FamilyKind kind_;
  ConvexBody body_;
  double eps_;
  std::variant<Ellipse, IntervalParams, ConvexBody> shape_;
};

/// tau_eps A. Interval shells map to their s-band exactly; an ellipse
/// symmetric difference on a disc maps to the band of
/// f(theta) = (rho_E(theta) - R) / eps, with rho_E the radial function of E
/// around the disc center; the polygon families give generic tau-images.
CylinderRegion tau_image(const FamilyMember& member);

/// Coefficients of a + b sin^2(phi - alpha) + c sin(phi - alpha) + d cos(phi - alpha),
/// phi = theta / R on a disc of radius R.
struct FEParams {
  double alpha{0.0};
  double a{0.0};
  double b{0.0};
  double c{0.0};
  double d{0.0};

  double operator()(double phi) const;
};

/// Band of an F_E function; rejects |f| > 1.
CylinderRegion fe_band(const FEParams& p, double radius);
/// Limit of tau_eps(E xor K) as eps -> 0 for the given offsets.
FEParams fe_limit(const EllipseOffsets& o);

/// Band of f(theta) = a_m (theta - m) + b_m on [m, m + 1) around the unit
/// square; rejects |a_m| > 2 or |f| > 1.
CylinderRegion fq_band(const std::array<double, 4>& a, const std::array<double, 4>& b);
/// Band of f(theta) = f_m(theta - m) with each f_m concave on [0, 1);
/// concavity and |f| <= 1 are checked on a 256-point probe per side.
CylinderRegion fc_band(const std::array<BoundaryFunction, 4>& sides);

/// d(B, B') = Q(B xor B')^(1/2).
double d_metric(const CylinderRegion& b1, const CylinderRegion& b2, const BoundaryDensity& dens,
                const ConvexBody& body);
/// d_n(A, A') = (P(A xor A') / a)^(1/2), computed on the tau-images.
double dn_metric(const FamilyMember& a1, const FamilyMember& a2, const BoundaryDensity& dens);
double dn_metric(const CylinderRegion& tau1, const CylinderRegion& tau2,
                 const BoundaryDensity& dens, const ConvexBody& body, double eps);

/// Matrix of d(B_i, B'_j). Band-only inputs use a 4096-point midpoint rule
/// on their profiles; anything else goes through q_measure.
std::vector<std::vector<double>> d_matrix(const std::vector<CylinderRegion>& rows,
                                          const std::vector<CylinderRegion>& cols,
                                          const BoundaryDensity& dens, const ConvexBody& body);
/// Hausdorff distance between two finite classes under d.
double hausdorff_gamma(const std::vector<CylinderRegion>& bn_grid,
                       const std::vector<CylinderRegion>& b_grid, const BoundaryDensity& dens,
                       const ConvexBody& body);
double hausdorff_gamma(const std::vector<std::vector<double>>& d);

struct Bracket {
  CylinderRegion lower;
  CylinderRegion upper;
  double size{0.0};  ///< certified d_n(lower, upper)
  nlohmann::json params;
};

struct BracketSet {
  double delta{0.0};
  std::vector<Bracket> brackets;
  std::size_t count() const { return brackets.size(); }
  nlohmann::json to_json() const;
};

/// Parameter box for F_E bracketing.
struct FEBox {
  std::array<double, 2> alpha{0.0, 1.5707963267948966};
  std::array<double, 2> a{-1.0, 1.0};
  std::array<double, 2> b{-2.0, 2.0};
  std::array<double, 2> c{-1.0, 1.0};
  std::array<double, 2> d{-1.0, 1.0};
};

/// Brackets [lower, upper] of d_n-size at most delta covering the family.
/// IntervalBands uses a Q_n-quantile grid in s; EllipseSymmDiff brackets
/// the F_E bands by adaptive splitting of `box` (disc bodies only).
/// Throws UnsupportedFamily for the other kinds.
BracketSet bracket_cover(FamilyKind kind, double delta, const BoundaryDensity& dens,
                         const ConvexBody& body, double eps, const FEBox& box = {});

/// Index of a bracket of `set` that contains the interval-shell member, by
/// its parameters; nullopt if none.
std::optional<std::size_t> find_bracket(const BracketSet& set, const IntervalParams& p);
std::optional<std::size_t> find_bracket(const BracketSet& set, const FEParams& p);

enum class ShatterClass { SBand, FEBand };

struct ShatterReport {
  bool shattered{false};
  std::size_t labelings{0};
  std::size_t realized{0};
  /// Labeling (bit k = point k included) that no element realized.
  std::optional<std::uint32_t> missing;
  /// "exact" for SBand; the parameter grid otherwise.
  std::string resolution;
  nlohmann::json to_json() const;
};

/// Whether the class picks out every subset of the points. SBand
/// (two s-intervals) is decided exactly; FEBand searches a grid of 8 alpha
/// values and 9 values for each of a, b, c, d, so a false is grid-relative.
/// Throws TooManyPoints above 12 points.
ShatterReport shatter_check(ShatterClass cls, const std::vector<CylinderPoint>& points,
                            double radius = 1.0);

}  // namespace lep
