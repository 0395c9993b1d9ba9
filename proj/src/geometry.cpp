#include "lep/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lep/errors.hpp"

namespace lep {

namespace {

constexpr double kTieDistance = 1e-12;
constexpr double kDistinctFeet = 1e-9;

double clamp01(double t, double len) { return std::clamp(t, 0.0, len); }

}  // namespace

ConvexBody ConvexBody::disc(Point2 center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center.x) ||
      !std::isfinite(center.y)) {
    throw std::invalid_argument("disc radius must be positive and finite");
  }
  ConvexBody body(Disc{center, radius});
  body.perimeter_ = 2.0 * std::numbers::pi * radius;
  body.area_ = std::numbers::pi * radius * radius;
  body.inradius_ = radius;
  return body;
}

ConvexBody ConvexBody::polygon(std::vector<Point2> vertices) {
  if (vertices.size() < 3) {
    throw std::invalid_argument("polygon needs at least 3 vertices");
  }
  for (const auto& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw std::invalid_argument("polygon vertex is not finite");
    }
  }
  ConvexBody body(Polygon{std::move(vertices)});
  body.finish_polygon();
  return body;
}

void ConvexBody::finish_polygon() {
  const auto& v = as_polygon().vertices;
  const std::size_t m = v.size();
  edges_.clear();
  edges_.reserve(m);
  double theta = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % m];
    const double len = distance(a, b);
    if (!(len > 0.0)) {
      throw std::invalid_argument("polygon has a repeated vertex");
    }
    const Vec2 dir = (b - a) * (1.0 / len);
    edges_.push_back(Edge{a, dir, Vec2{dir.y, -dir.x}, len, theta});
    theta += len;
  }
  perimeter_ = theta;
  area_ = polygon_area(v);
  if (!(area_ > 0.0)) {
    throw std::invalid_argument("polygon must be counterclockwise");
  }

  corners_.clear();
  for (std::size_t k = 0; k < m; ++k) {
    const Edge& prev = edges_[(k + m - 1) % m];
    const Edge& next = edges_[k];
    const double turn = prev.dir.cross(next.dir);
    if (!(turn > 1e-14)) {
      throw std::invalid_argument("polygon turning is not strictly convex at vertex " +
                                  std::to_string(k));
    }
    const double span = std::atan2(prev.normal.cross(next.normal), prev.normal.dot(next.normal));
    corners_.push_back(Corner{k, next.theta0, next.start,
                              std::atan2(prev.normal.y, prev.normal.x), span});
  }

  // Chebyshev center: the optimum of max r s.t. depth_j(c) >= r has three
  // active edge constraints.
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        const Edge* e[3] = {&edges_[i], &edges_[j], &edges_[k]};
        // n.c + r = n.start
        double A[3][3];
        double rhs[3];
        for (int q = 0; q < 3; ++q) {
          A[q][0] = e[q]->normal.x;
          A[q][1] = e[q]->normal.y;
          A[q][2] = 1.0;
          rhs[q] = e[q]->normal.dot(e[q]->start);
        }
        auto det3 = [](double M[3][3]) {
          return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                 M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                 M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
        };
        const double det = det3(A);
        if (std::abs(det) < 1e-14) continue;
        double sol[3];
        for (int col = 0; col < 3; ++col) {
          double B[3][3];
          for (int q = 0; q < 3; ++q)
            for (int c = 0; c < 3; ++c) B[q][c] = (c == col) ? rhs[q] : A[q][c];
          sol[col] = det3(B) / det;
        }
        const Point2 center{sol[0], sol[1]};
        const double r = sol[2];
        if (r <= best) continue;
        bool feasible = true;
        for (std::size_t q = 0; q < m && feasible; ++q) {
          feasible = edge_depth(q, center) >= r - 1e-12;
        }
        if (feasible) best = r;
      }
    }
  }
  inradius_ = best;
}

std::pair<Point2, Point2> ConvexBody::bounding_box() const {
  if (is_disc()) {
    const auto& d = as_disc();
    return {{d.center.x - d.radius, d.center.y - d.radius},
            {d.center.x + d.radius, d.center.y + d.radius}};
  }
  Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 hi = lo * -1.0;
  for (const auto& v : as_polygon().vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  return {lo, hi};
}

double ConvexBody::wrap(double theta) const {
  double t = std::fmod(theta, perimeter_);
  if (t < 0.0) t += perimeter_;
  if (t >= perimeter_) t = 0.0;
  return t;
}

std::size_t ConvexBody::edge_index(double theta) const {
  const double t = wrap(theta);
  auto it = std::upper_bound(edges_.begin(), edges_.end(), t,
                             [](double value, const Edge& e) { return value < e.theta0; });
  return static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
}

Point2 ConvexBody::boundary_point(double theta) const {
  if (is_disc()) {
    const auto& d = as_disc();
    const double phi = wrap(theta) / d.radius;
    return {d.center.x + d.radius * std::cos(phi), d.center.y + d.radius * std::sin(phi)};
  }
  const double t = wrap(theta);
  const Edge& e = edges_[edge_index(t)];
  return e.start + e.dir * (t - e.theta0);
}

Vec2 ConvexBody::edge_normal(double theta) const {
  if (is_disc()) {
    const double phi = wrap(theta) / as_disc().radius;
    return {std::cos(phi), std::sin(phi)};
  }
  return edges_[edge_index(theta)].normal;
}

std::optional<std::size_t> ConvexBody::corner_at(double theta, double tol) const {
  if (is_disc()) return std::nullopt;
  const double t = wrap(theta);
  for (const auto& c : corners_) {
    const double gap = std::abs(t - c.theta);
    if (std::min(gap, perimeter_ - gap) <= tol) return c.index;
  }
  return std::nullopt;
}

std::vector<double> ConvexBody::breakpoints() const {
  std::vector<double> out;
  for (const auto& c : corners_) out.push_back(c.theta);
  return out;
}

double ConvexBody::edge_depth(std::size_t i, const Point2& z) const {
  const Edge& e = edges_[i];
  return e.normal.dot(e.start - z);
}

bool ConvexBody::contains(const Point2& z) const {
  if (is_disc()) {
    const auto& d = as_disc();
    return distance(z, d.center) <= d.radius;
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edge_depth(i, z) < 0.0) return false;
  }
  return true;
}

double ConvexBody::boundary_distance(const Point2& z) const {
  if (is_disc()) {
    const auto& d = as_disc();
    return std::abs(distance(z, d.center) - d.radius);
  }
  return std::abs(project_any(z).signed_distance);
}

SignedProjection ConvexBody::project_any(const Point2& z) const {
  if (is_disc()) {
    const auto& d = as_disc();
    const Vec2 off = z - d.center;
    const double r = off.norm();
    Vec2 u = r > 0.0 ? off * (1.0 / r) : Vec2{1.0, 0.0};
    double phi = std::atan2(u.y, u.x);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    SignedProjection out;
    out.foot.theta = wrap(phi * d.radius);
    out.foot.position = d.center + u * d.radius;
    out.signed_distance = r - d.radius;
    out.normal = u;
    return out;
  }

  auto make_foot = [&](std::size_t i, double t) {
    const Edge& e = edges_[i];
    BoundaryPoint foot;
    foot.position = e.start + e.dir * t;
    foot.theta = (t >= e.length) ? wrap(e.theta0 + e.length) : e.theta0 + t;
    return foot;
  };

  if (contains(z)) {
    std::size_t best = 0;
    double best_depth = edge_depth(0, z);
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      const double h = edge_depth(i, z);
      if (h < best_depth) {
        best_depth = h;
        best = i;
      }
    }
    const Edge& e = edges_[best];
    const double t = clamp01((z - e.start).dot(e.dir), e.length);
    SignedProjection out;
    out.foot = make_foot(best, t);
    out.signed_distance = -best_depth;
    out.normal = e.normal;
    return out;
  }

  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    const double t = clamp01((z - e.start).dot(e.dir), e.length);
    const double dist = distance(z, e.start + e.dir * t);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
      best_t = t;
    }
  }
  SignedProjection out;
  out.foot = make_foot(best, best_t);
  out.signed_distance = best_dist;
  out.normal = best_dist > 0.0 ? (z - out.foot.position) * (1.0 / best_dist) : edges_[best].normal;
  return out;
}

bool ConvexBody::on_skeleton(const Point2& z) const {
  if (is_disc()) {
    const auto& d = as_disc();
    return distance(z, d.center) < kTieDistance * std::max(1.0, d.radius);
  }
  if (!contains(z)) return false;
  double min_depth = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < edges_.size(); ++i) min_depth = std::min(min_depth, edge_depth(i, z));
  std::optional<Point2> first;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const double h = edge_depth(i, z);
    if (h - min_depth > kTieDistance) continue;
    const Point2 foot = z + edges_[i].normal * h;
    if (!first) {
      first = foot;
    } else if (distance(*first, foot) > kDistinctFeet) {
      return true;
    }
  }
  return false;
}

SignedProjection project(const ConvexBody& body, const Point2& z) {
  if (!std::isfinite(z.x) || !std::isfinite(z.y)) {
    throw std::invalid_argument("project: point is not finite");
  }
  if (body.on_skeleton(z)) {
    throw SkeletonPoint("nearest boundary point is not unique");
  }
  return body.project_any(z);
}

double local_reach(const ConvexBody& body, double theta) {
  if (body.is_disc()) return body.as_disc().radius;
  if (body.corner_at(theta)) return 0.0;
  const std::size_t i = body.edge_index(theta);
  const Point2 x = body.boundary_point(theta);
  const Vec2 ni = body.edge_normal(theta);
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < body.edge_count(); ++j) {
    if (j == i) continue;
    const double h = body.edge_depth(j, x);
    const double denom = 1.0 - body.edge_outer_normal(j).dot(ni);
    if (denom <= 1e-15) continue;
    r = std::min(r, std::max(h, 0.0) / denom);
  }
  return r;
}

bool in_neighborhood(const ConvexBody& body, double eps, const Point2& z) {
  if (!(eps > 0.0)) throw std::invalid_argument("in_neighborhood: eps must be positive");
  return body.boundary_distance(z) <= eps;
}

void require_eps(const ConvexBody& body, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(eps < body.inradius())) {
    throw EpsTooLarge("eps=" + std::to_string(eps) + " is not below the inradius " +
                      std::to_string(body.inradius()));
  }
}

CylinderPoint magnify(const ConvexBody& body, double eps, const Point2& z) {
  require_eps(body, eps);
  if (!in_neighborhood(body, eps, z)) {
    throw OutsideNeighborhood("point is farther than eps from the boundary");
  }
  const SignedProjection p = project(body, z);
  return {p.foot.theta, std::clamp(p.signed_distance / eps, -1.0, 1.0)};
}

Point2 unmagnify(const ConvexBody& body, double eps, const CylinderPoint& c) {
  require_eps(body, eps);
  if (!(std::abs(c.s) <= 1.0 + 1e-12)) {
    throw std::invalid_argument("unmagnify: |s| must be at most 1");
  }
  if (c.s > 0.0 && body.corner_at(c.theta)) {
    throw NormalUndefinedAtCorner("outer normal is set-valued at a polygon corner");
  }
  return body.boundary_point(c.theta) + body.edge_normal(c.theta) * (c.s * eps);
}

double polygon_area(std::span<const Point2> v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += v[i].cross(v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

std::vector<Point2> clip_halfplane(std::span<const Point2> poly, const Vec2& n, double offset) {
  std::vector<Point2> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % m];
    const double fa = n.dot(a) - offset;
    const double fb = n.dot(b) - offset;
    if (fa <= 0.0) out.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      const double t = fa / (fa - fb);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

std::vector<Point2> inner_parallel_polygon(const ConvexBody& body, double eps) {
  std::vector<Point2> poly = body.as_polygon().vertices;
  const std::size_t m = body.edge_count();
  for (std::size_t j = 0; j < m && poly.size() >= 3; ++j) {
    const Point2& start = body.as_polygon().vertices[j];
    const Vec2 n = body.edge_outer_normal(j);
    poly = clip_halfplane(poly, n, n.dot(start) - eps);
  }
  if (poly.size() < 3) poly.clear();
  return poly;
}

double neighborhood_area(const ConvexBody& body, double eps) {
  require_eps(body, eps);
  if (body.is_disc()) {
    return 4.0 * std::numbers::pi * body.as_disc().radius * eps;
  }
  const double outer = body.perimeter() * eps + std::numbers::pi * eps * eps;
  const auto inner = inner_parallel_polygon(body, eps);
  const double inner_area = inner.empty() ? 0.0 : polygon_area(inner);
  return outer + body.area() - inner_area;
}

}  // namespace lep
