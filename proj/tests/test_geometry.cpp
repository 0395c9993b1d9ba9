#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lep/errors.hpp"
#include "lep/geometry.hpp"

using namespace lep;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent distance to the boundary of the unit square.
double square_boundary_distance(double x, double y) {
  const bool inside = x >= 0 && x <= 1 && y >= 0 && y <= 1;
  if (inside) return std::min({x, 1 - x, y, 1 - y});
  const double dx = std::max({0.0, -x, x - 1});
  const double dy = std::max({0.0, -y, y - 1});
  return std::hypot(dx, dy);
}

ConvexBody hexagon() {
  std::vector<Point2> v;
  for (int k = 0; k < 6; ++k) {
    const double a = kPi / 3 * k + 0.1;
    v.push_back({0.2 + std::cos(a), -0.1 + 0.8 * std::sin(a)});
  }
  return ConvexBody::polygon(v);
}

}  // namespace

TEST(Geometry, ConstructionInvariants) {
  EXPECT_NEAR(ConvexBody::unit_disc().perimeter(), 2 * kPi, 1e-12);
  EXPECT_NEAR(ConvexBody::unit_square().perimeter(), 4.0, 1e-12);
  EXPECT_NEAR(ConvexBody::unit_square().inradius(), 0.5, 1e-12);
  EXPECT_THROW(ConvexBody::polygon({{0, 0}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(ConvexBody::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(ConvexBody::polygon({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}}),
               std::invalid_argument);
  EXPECT_THROW(ConvexBody::disc({0, 0}, 0.0), std::invalid_argument);
}

TEST(Geometry, BoundaryRoundTrip) {
  for (const ConvexBody& body : {ConvexBody::unit_disc(), ConvexBody::unit_square(), hexagon()}) {
    for (int k = 0; k < 200; ++k) {
      const double theta = body.perimeter() * (k + 0.37) / 200.0;
      const Point2 p = body.boundary_point(theta);
      EXPECT_LT(body.boundary_distance(p), 1e-9);
      const SignedProjection proj = body.project_any(p);
      EXPECT_NEAR(proj.foot.theta, theta, 1e-9);
    }
  }
}

TEST(Geometry, ProjectExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto p = project(disc, {2, 0});
  EXPECT_NEAR(p.foot.theta, 0.0, 1e-12);
  EXPECT_NEAR(p.signed_distance, 1.0, 1e-12);
  EXPECT_NEAR(p.normal.x, 1.0, 1e-12);

  const auto sq = ConvexBody::unit_square();
  const auto q = project(sq, {-0.3, -0.4});
  EXPECT_NEAR(q.foot.position.x, 0.0, 1e-12);
  EXPECT_NEAR(q.foot.position.y, 0.0, 1e-12);
  EXPECT_NEAR(q.signed_distance, 0.5, 1e-12);
  EXPECT_NEAR(q.normal.x, -0.6, 1e-12);
  EXPECT_NEAR(q.normal.y, -0.8, 1e-12);

  EXPECT_THROW(project(disc, {0, 0}), SkeletonPoint);
  EXPECT_THROW(project(sq, {0.3, 0.3}), SkeletonPoint);
  EXPECT_THROW(project(sq, {0.5, 0.5}), SkeletonPoint);
  EXPECT_NO_THROW(project(sq, {0.3, 0.2}));
}

TEST(Geometry, LocalReach) {
  EXPECT_NEAR(local_reach(ConvexBody::unit_disc(), 1.234), 1.0, 1e-12);
  const auto sq = ConvexBody::unit_square();
  EXPECT_NEAR(local_reach(sq, 0.3), 0.3, 1e-12);
  EXPECT_NEAR(local_reach(sq, 0.8), 0.2, 1e-12);
  EXPECT_NEAR(local_reach(sq, 2.5), 0.5, 1e-12);
  EXPECT_NEAR(local_reach(sq, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(local_reach(sq, 0.0), 0.0, 1e-12);
}

TEST(Geometry, Neighborhood) {
  const auto disc = ConvexBody::unit_disc();
  const auto sq = ConvexBody::unit_square();
  EXPECT_TRUE(in_neighborhood(disc, 0.1, {1.05, 0}));
  EXPECT_FALSE(in_neighborhood(disc, 0.1, {0, 0}));
  EXPECT_TRUE(in_neighborhood(sq, 0.1, {-0.05, -0.05}));
}

TEST(Geometry, MagnifyExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto sq = ConvexBody::unit_square();
  auto c = magnify(disc, 0.1, {1.05, 0});
  EXPECT_NEAR(c.theta, 0.0, 1e-12);
  EXPECT_NEAR(c.s, 0.5, 1e-9);
  c = magnify(disc, 0.1, {0, 0.95});
  EXPECT_NEAR(c.theta, kPi / 2, 1e-12);
  EXPECT_NEAR(c.s, -0.5, 1e-9);
  c = magnify(sq, 0.1, {0.5, 1.05});
  EXPECT_NEAR(c.theta, 2.5, 1e-12);
  EXPECT_NEAR(c.s, 0.5, 1e-9);
  EXPECT_THROW(magnify(disc, 0.1, {1.5, 0}), OutsideNeighborhood);
  EXPECT_THROW(magnify(disc, 2.0, {1.5, 0}), EpsTooLarge);
}

TEST(Geometry, UnmagnifyExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto sq = ConvexBody::unit_square();
  Point2 z = unmagnify(disc, 0.1, {0.0, 0.5});
  EXPECT_NEAR(z.x, 1.05, 1e-12);
  EXPECT_NEAR(z.y, 0.0, 1e-12);
  z = unmagnify(disc, 0.1, {kPi, -1.0});
  EXPECT_NEAR(z.x, -0.9, 1e-12);
  EXPECT_NEAR(z.y, 0.0, 1e-12);
  z = unmagnify(sq, 0.1, {0.5, -0.5});
  EXPECT_NEAR(z.x, 0.5, 1e-12);
  EXPECT_NEAR(z.y, 0.05, 1e-12);
  EXPECT_THROW(unmagnify(sq, 0.1, {1.0, 0.5}), NormalUndefinedAtCorner);
  EXPECT_NO_THROW(unmagnify(sq, 0.1, {1.0, -0.5}));
}

TEST(Geometry, NeighborhoodAreaClosedForms) {
  EXPECT_NEAR(neighborhood_area(ConvexBody::unit_disc(), 0.1), 4 * kPi * 0.1, 1e-12);
  EXPECT_NEAR(neighborhood_area(ConvexBody::unit_square(), 0.1), 0.8 + (kPi - 4) * 0.01, 1e-12);
  EXPECT_THROW(neighborhood_area(ConvexBody::unit_square(), 0.5), EpsTooLarge);
  for (const ConvexBody& body : {ConvexBody::unit_disc(), ConvexBody::unit_square(), hexagon()}) {
    const double ratio = neighborhood_area(body, 1e-3) / 1e-3;
    EXPECT_NEAR(ratio, 2 * body.perimeter(), 1e-2);
  }
}

TEST(Geometry, SquareAreaMonteCarlo) {
  // 1e7 uniform points on [-0.25, 1.25]^2, independent distance formula.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-0.25, 1.25);
  const auto sq = ConvexBody::unit_square();
  for (double eps : {0.2, 0.1, 0.05}) {
    const long n = 10'000'000;
    long hits = 0;
    for (long k = 0; k < n; ++k) {
      if (square_boundary_distance(u(rng), u(rng)) <= eps) ++hits;
    }
    const double mc = 2.25 * static_cast<double>(hits) / n;
    EXPECT_NEAR(neighborhood_area(sq, eps) / mc, 1.0, 0.01) << "eps=" << eps;
  }
}

TEST(Geometry, HexagonAreaMonteCarlo) {
  const auto hex = hexagon();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ux(-1.2, 1.6), uy(-1.2, 1.0);
  const double eps = 0.1;
  const long n = 2'000'000;
  long hits = 0;
  for (long k = 0; k < n; ++k) {
    const Point2 z{ux(rng), uy(rng)};
    // Brute force: minimum over many boundary samples plus edge segments.
    double best = 1e9;
    const auto& v = hex.as_polygon().vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point2 a = v[i];
      const Point2 b = v[(i + 1) % v.size()];
      const Point2 ab = b - a;
      const double t = std::clamp((z - a).dot(ab) / ab.dot(ab), 0.0, 1.0);
      best = std::min(best, distance(z, a + t * ab));
    }
    if (best <= eps) ++hits;
  }
  const double mc = 2.8 * 2.2 * static_cast<double>(hits) / n;
  EXPECT_NEAR(neighborhood_area(hex, eps) / mc, 1.0, 0.01);
}

TEST(Geometry, RandomProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.3, 1.3);
  const auto sq = ConvexBody::unit_square();
  const auto disc = ConvexBody::disc({0.5, 0.5}, 0.6);
  const double eps = 0.2;
  for (const ConvexBody* body : {&sq, &disc}) {
    int round_trips = 0;
    while (round_trips < 10000) {
      const Point2 z{u(rng), u(rng)};
      if (!in_neighborhood(*body, eps, z) || body->on_skeleton(z)) continue;
      const CylinderPoint c = magnify(*body, eps, z);
      ASSERT_LE(std::abs(c.s), 1.0 + 1e-12);
      if (body->corner_at(c.theta, 1e-12) && c.s > 0) {
        ++round_trips;
        continue;
      }
      const Point2 back = unmagnify(*body, eps, c);
      ASSERT_NEAR(back.x, z.x, 1e-9);
      ASSERT_NEAR(back.y, z.y, 1e-9);
      ++round_trips;
    }

    std::vector<Point2> bpts;
    std::uniform_real_distribution<double> ut(0.0, body->perimeter());
    for (int k = 0; k < 1000; ++k) bpts.push_back(body->boundary_point(ut(rng)));
    for (int k = 0; k < 10000; ++k) {
      const Point2 z{u(rng), u(rng)};
      const SignedProjection p = body->project_any(z);
      const double d = distance(z, p.foot.position);
      for (const auto& b : bpts) ASSERT_LE(d, distance(z, b) + 1e-12);
      ASSERT_NEAR(std::abs(p.signed_distance), d, 1e-9);
      const Point2 rebuilt = p.foot.position + p.signed_distance * p.normal;
      ASSERT_NEAR(rebuilt.x, z.x, 1e-9);
      ASSERT_NEAR(rebuilt.y, z.y, 1e-9);
      bool inside;
      if (body == &sq) {
        inside = z.x > 0 && z.x < 1 && z.y > 0 && z.y < 1;
        ASSERT_NEAR(d, square_boundary_distance(z.x, z.y), 1e-12);
      } else {
        inside = distance(z, {0.5, 0.5}) < 0.6;
      }
      ASSERT_EQ(p.signed_distance < 0, inside);
      const Point2 w{u(rng), u(rng)};
      ASSERT_LE(std::abs(body->boundary_distance(z) - body->boundary_distance(w)),
                distance(z, w) + 1e-12);
    }
  }
}

TEST(Geometry, InnerParallelPolygon) {
  const auto inner = inner_parallel_polygon(ConvexBody::unit_square(), 0.1);
  EXPECT_NEAR(polygon_area(inner), 0.64, 1e-12);
}
