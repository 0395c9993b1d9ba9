#pragma once

/**
 * @file geometry.hpp
 * @brief Planar convex bodies: metric projection, signed distance, local
 * interior reach, the eps-collar around the boundary, and the local
 * magnification map onto the cylinder (boundary arclength x [-1, 1]).
 *
 * Bodies are discs or strictly convex counterclockwise polygons. Boundary
 * points are addressed by counterclockwise arclength theta in
 * [0, perimeter); a disc starts at angle 0, a polygon at its first vertex.
 * All values are immutable after construction.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace lep {

struct Point2 {
  double x{0.0};
  double y{0.0};

  constexpr Point2() = default;
  constexpr Point2(double X, double Y) : x(X), y(Y) {}

  constexpr Point2 operator+(const Point2& r) const { return {x + r.x, y + r.y}; }
  constexpr Point2 operator-(const Point2& r) const { return {x - r.x, y - r.y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  friend constexpr Point2 operator*(double s, const Point2& p) { return {p.x * s, p.y * s}; }
  constexpr double dot(const Point2& r) const { return x * r.x + y * r.y; }
  constexpr double cross(const Point2& r) const { return x * r.y - y * r.x; }
  double norm() const { return std::hypot(x, y); }
  constexpr bool operator==(const Point2&) const = default;
};

using Vec2 = Point2;

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

/// A point of the boundary, addressed by arclength.
struct BoundaryPoint {
  double theta{0.0};
  Point2 position;
};

/// Output of the metric projection: foot, signed distance (positive
/// outside), and the outer normal at the foot that satisfies
/// z = foot + signed_distance * normal.
struct SignedProjection {
  BoundaryPoint foot;
  double signed_distance{0.0};
  Vec2 normal;
};

/// A point of the cylinder Gamma = boundary x [-1, 1].
struct CylinderPoint {
  double theta{0.0};
  double s{0.0};
};

/// A point of the collar kept in both coordinate systems. Points in an
/// outer corner sector all map to the corner's theta, so the ambient
/// position is the only faithful record of where they are.
struct LocalPoint {
  CylinderPoint cyl;
  Point2 ambient;
};

/// Outer corner of a polygon: the sector of outer normals between the
/// normals of the two adjacent edges.
struct Corner {
  std::size_t index{0};
  double theta{0.0};
  Point2 vertex;
  double phi_begin{0.0};  ///< angle of the first outer normal in the cone
  double phi_span{0.0};   ///< exterior angle, in (0, pi)
};

class ConvexBody {
 public:
  struct Disc {
    Point2 center;
    double radius{1.0};
  };
  struct Polygon {
    std::vector<Point2> vertices;
  };

  static ConvexBody disc(Point2 center, double radius);
  /// Vertices must be counterclockwise with strictly convex turning.
  static ConvexBody polygon(std::vector<Point2> vertices);
  static ConvexBody unit_disc() { return disc({0.0, 0.0}, 1.0); }
  static ConvexBody unit_square() { return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

  bool is_disc() const { return std::holds_alternative<Disc>(shape_); }
  const Disc& as_disc() const { return std::get<Disc>(shape_); }
  const Polygon& as_polygon() const { return std::get<Polygon>(shape_); }

  double perimeter() const { return perimeter_; }
  double area() const { return area_; }
  /// Radius of the largest inscribed ball.
  double inradius() const { return inradius_; }
  /// Axis-aligned bounding box of the body, as (min, max).
  std::pair<Point2, Point2> bounding_box() const;

  /// Wraps theta into [0, perimeter).
  double wrap(double theta) const;
  Point2 boundary_point(double theta) const;
  /// Outer normal at theta. For a polygon, theta on a vertex returns the
  /// normal of the edge that starts there.
  Vec2 edge_normal(double theta) const;
  /// Index of the polygon corner within `tol` of theta, if any.
  std::optional<std::size_t> corner_at(double theta, double tol = 1e-12) const;
  std::span<const Corner> corners() const { return corners_; }
  /// Arclength positions where the boundary is not smooth (polygon vertices).
  std::vector<double> breakpoints() const;

  bool contains(const Point2& z) const;
  /// Euclidean distance to the boundary; defined everywhere.
  double boundary_distance(const Point2& z) const;
  /// Metric projection without the skeleton check: on the skeleton one of
  /// the nearest feet is returned.
  SignedProjection project_any(const Point2& z) const;
  /// True when z has more than one nearest boundary point (1e-12 distance
  /// tie between feet more than 1e-9 apart).
  bool on_skeleton(const Point2& z) const;

  // Polygon internals, exposed for the measure code.
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t edge_index(double theta) const;
  /// Signed distance of z to the supporting line of edge i, positive inside.
  double edge_depth(std::size_t i, const Point2& z) const;
  Vec2 edge_outer_normal(std::size_t i) const { return edges_[i].normal; }
  double edge_theta0(std::size_t i) const { return edges_[i].theta0; }
  double edge_length(std::size_t i) const { return edges_[i].length; }

 private:
  struct Edge {
    Point2 start;
    Vec2 dir;     // unit
    Vec2 normal;  // unit, outward
    double length{0.0};
    double theta0{0.0};
  };

  explicit ConvexBody(std::variant<Disc, Polygon> shape) : shape_(std::move(shape)) {}
  void finish_polygon();

  std::variant<Disc, Polygon> shape_;
  double perimeter_{0.0};
  double area_{0.0};
  double inradius_{0.0};
  std::vector<Edge> edges_;
  std::vector<Corner> corners_;
};

/// Nearest boundary point, signed distance and outer normal.
/// Throws SkeletonPoint when the nearest point is not unique.
SignedProjection project(const ConvexBody& body, const Point2& z);

/// Largest r such that the boundary point at theta lies on a ball of
/// radius r contained in the body.
double local_reach(const ConvexBody& body, double theta);

/// True iff the distance from z to the boundary is at most eps.
bool in_neighborhood(const ConvexBody& body, double eps, const Point2& z);

/// Local magnification map: (theta of the foot, signed distance / eps).
/// Throws EpsTooLarge, OutsideNeighborhood or SkeletonPoint.
CylinderPoint magnify(const ConvexBody& body, double eps, const Point2& z);

/// Inverse of magnify: boundary_point(theta) + s * eps * normal(theta).
/// Throws NormalUndefinedAtCorner for s > 0 on a polygon corner.
Point2 unmagnify(const ConvexBody& body, double eps, const CylinderPoint& c);

/// Lebesgue area of the closed eps-collar of the boundary (exact).
/// Throws EpsTooLarge unless eps < inradius.
double neighborhood_area(const ConvexBody& body, double eps);

/// Throws EpsTooLarge unless 0 < eps < inradius.
void require_eps(const ConvexBody& body, double eps);

/// Area of a simple polygon given counterclockwise (shoelace).
double polygon_area(std::span<const Point2> vertices);

/// Clips a convex counterclockwise polygon to {z : n.z <= offset}.
std::vector<Point2> clip_halfplane(std::span<const Point2> polygon, const Vec2& n, double offset);

/// The inner parallel body {z in K : dist(z, boundary) >= eps} of a polygon.
std::vector<Point2> inner_parallel_polygon(const ConvexBody& body, double eps);

}  // namespace lep
