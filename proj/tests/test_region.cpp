#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lep/errors.hpp"
#include "lep/geometry.hpp"
#include "lep/interval_set.hpp"
#include "lep/region.hpp"

using namespace lep;

constexpr double kPi = std::numbers::pi;

TEST(IntervalSet, MergeAndAlgebra) {
  IntervalSet a;
  a.add(0.0, 0.5);
  a.add(0.4, 0.8);
  a.add(0.9, 1.0);
  ASSERT_EQ(a.pieces().size(), 2u);
  EXPECT_NEAR(a.length(), 0.9, 1e-15);
  const IntervalSet b(0.7, 0.95);
  EXPECT_NEAR((a | b).length(), 1.0, 1e-15);
  EXPECT_NEAR((a & b).length(), 0.15, 1e-15);
  EXPECT_NEAR((a - b).length(), 0.75, 1e-15);
  EXPECT_NEAR((a ^ b).length(), 0.85, 1e-15);
  EXPECT_NEAR(IntervalSet(-1, 1).integrate_linear(0.5), 2.0, 1e-15);
  EXPECT_NEAR(IntervalSet(0, 1).integrate_linear(0.5), 1.25, 1e-15);
  EXPECT_NEAR(IntervalSet(0, 1).first_moment(), 0.5, 1e-15);
  EXPECT_TRUE(a.contains(0.45));
  EXPECT_FALSE(a.contains(0.85));
}

TEST(Region, BandMembership) {
  const auto band = CylinderRegion::band([](double t) { return 0.5 * std::cos(t); }, 2 * kPi);
  EXPECT_TRUE(band.contains(0.0, 0.3));
  EXPECT_FALSE(band.contains(0.0, 0.6));
  EXPECT_FALSE(band.contains(0.0, -0.1));
  EXPECT_TRUE(band.contains(kPi, -0.3));
  EXPECT_FALSE(band.contains(kPi, 0.1));
  EXPECT_NEAR(band.section(0.0).length(), 0.5, 1e-15);
  EXPECT_THROW(CylinderRegion::band([](double) { return 1.5; }, 1.0), std::invalid_argument);
}

TEST(Region, CompositeSections) {
  const auto up = CylinderRegion::upper();
  const auto band = CylinderRegion::band([](double t) { return 0.5 * std::cos(t); }, 2 * kPi);
  EXPECT_NEAR((up ^ band).section(0.0).length(), 0.5, 1e-15);
  EXPECT_NEAR((up | band).section(kPi).length(), 1.5, 1e-15);
  EXPECT_NEAR((up & band).section(kPi).length(), 0.0, 1e-15);
  EXPECT_NEAR((up - band).section(0.0).length(), 0.5, 1e-15);
  EXPECT_EQ((up ^ band).kind(), CylinderRegion::Kind::Composite);
}

TEST(Region, RestrictedSBand) {
  const auto r = CylinderRegion::sband(IntervalSet(0, 1), IntervalSet(0, kPi));
  EXPECT_TRUE(r.contains(1.0, 0.5));
  EXPECT_FALSE(r.contains(4.0, 0.5));
  EXPECT_TRUE(r.section(4.0).empty());
}

TEST(Region, RasterRoundTrip) {
  const auto band = CylinderRegion::band([](double t) { return 0.5 * std::cos(t); }, 2 * kPi);
  const Raster r = Raster::rasterize(band, 1024, 256, 2 * kPi);
  const double area = static_cast<double>(r.count()) * r.cell_theta() * r.cell_s();
  EXPECT_NEAR(area, 2.0, 0.02);
  const auto g = CylinderRegion::grid(r);
  EXPECT_EQ(g.kind(), CylinderRegion::Kind::Grid);
  EXPECT_EQ(g.contains(0.001, 0.3), band.contains(0.001, 0.3));
}

TEST(Region, TauImageOfOuterBandIsUpperCylinder) {
  const auto disc = ConvexBody::unit_disc();
  const double eps = 0.1;
  const auto img = CylinderRegion::tau_image(disc, eps, [&](const Point2& z) {
    return !disc.contains(z) && disc.boundary_distance(z) <= eps;
  });
  for (double t : {0.1, 1.0, 3.0, 5.5}) {
    const IntervalSet sec = img.section(t);
    ASSERT_EQ(sec.pieces().size(), 1u);
    EXPECT_NEAR(sec.pieces()[0].first, 0.0, 1e-9);
    EXPECT_NEAR(sec.pieces()[0].second, 1.0, 1e-9);
  }
  EXPECT_TRUE(img.depends_on_normal());
}

TEST(Region, TauImageOnSquareCorner) {
  const auto sq = ConvexBody::unit_square();
  const double eps = 0.1;
  // Points of the corner sector at (1,0) with polar angle below -pi/4.
  const auto img = CylinderRegion::tau_image(sq, eps, [&](const Point2& z) {
    return z.x > 1 && z.y < 0 && std::atan2(z.y, z.x - 1) < -kPi / 4 &&
           sq.boundary_distance(z) <= eps;
  });
  const auto& c = sq.corners()[1];
  EXPECT_NEAR(c.theta, 1.0, 1e-12);
  EXPECT_NEAR(img.corner_section(c, c.phi_begin + 0.1).length(), 1.0, 1e-9);
  EXPECT_TRUE(img.corner_section(c, c.phi_begin + c.phi_span - 0.1).empty());
}
