#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lep/boundary_measure.hpp"
#include "lep/errors.hpp"

using namespace lep;

namespace {

constexpr double kPi = std::numbers::pi;

CylinderRegion half_cos_band() {
  return CylinderRegion::band([](double t) { return 0.5 * std::cos(t); }, 2 * kPi);
}

// Area of the symmetric difference of two unit discs whose centers are h apart.
double lens_symdiff(double h) {
  const double lens = 2 * std::acos(h / 2) - 0.5 * h * std::sqrt(4 - h * h);
  return 2 * (kPi - lens);
}

}  // namespace

TEST(BoundaryMeasure, MpExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto ones = BoundaryDensity::two_level(1, 1, 2);
  EXPECT_NEAR(mp_measure(CylinderRegion::full(), ones, disc), 4 * kPi, 1e-9);
  EXPECT_NEAR(mp_measure(half_cos_band(), ones, disc), 2.0, 2e-4);
  EXPECT_EQ(mp_measure(CylinderRegion::empty(), ones, disc), 0.0);
}

TEST(BoundaryMeasure, QExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto ones = BoundaryDensity::two_level(1, 1, 2);
  EXPECT_NEAR(q_measure(CylinderRegion::full(), ones, disc), 1.0, 1e-12);
  EXPECT_NEAR(q_measure(CylinderRegion::upper(), ones, disc), 0.5, 1e-12);
  const auto outside_only = BoundaryDensity::two_level(0, 2, 2);
  EXPECT_NEAR(q_measure(CylinderRegion::upper(), outside_only, disc), 1.0, 1e-12);
}

TEST(BoundaryMeasure, NeighborhoodMass) {
  const auto u16 = BoundaryDensity::uniform_box(2);
  EXPECT_NEAR(neighborhood_mass(ConvexBody::unit_disc(), u16, 0.05), kPi * 0.05 / 4, 1e-12);
  EXPECT_NEAR(neighborhood_mass(ConvexBody::unit_square(), u16, 0.1),
              (0.8 + (kPi - 4) * 0.01) / 16, 1e-12);
  EXPECT_THROW(neighborhood_mass(ConvexBody::unit_disc(), u16, 1.5), EpsTooLarge);
  // a / eps -> M_p(Gamma)
  const auto sq = ConvexBody::unit_square();
  const auto two = BoundaryDensity::two_level_normalized(sq, 2.0, 2);
  const double total = mp_total(two, sq);
  EXPECT_NEAR(neighborhood_mass(sq, two, 1e-4) / 1e-4, total, 1e-3 * total);
}

TEST(BoundaryMeasure, QuadratureMatchesClosedForm) {
  // The quadrature path and the closed form agree for both body kinds.
  for (const ConvexBody& body : {ConvexBody::unit_disc(), ConvexBody::unit_square()}) {
    const auto dens = BoundaryDensity::two_level_normalized(body, 3.0, 2);
    for (double eps : {0.2, 0.1, 0.05}) {
      const double q = preimage_probability(CylinderRegion::full(), dens, body, eps);
      EXPECT_NEAR(q, neighborhood_mass(body, dens, eps), 1e-10);
    }
  }
}

TEST(BoundaryMeasure, QnExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto u16 = BoundaryDensity::uniform_box(2);
  EXPECT_NEAR(qn_measure(CylinderRegion::upper(), u16, disc, 0.1), 0.525, 1e-9);
  for (double eps : {0.1, 0.01, 0.001}) {
    EXPECT_NEAR(qn_measure(CylinderRegion::upper(), u16, disc, eps), 0.5 + eps / 4, 1e-9);
    EXPECT_NEAR(qn_measure(CylinderRegion::full(), u16, disc, eps), 1.0, 1e-6);
  }
  const auto sq = ConvexBody::unit_square();
  for (double eps : {0.2, 0.1, 0.05}) {
    EXPECT_NEAR(qn_measure(CylinderRegion::full(), u16, sq, eps), 1.0, 1e-6);
    // Outer part of the square collar: 4 eps + pi eps^2 out of the total area.
    const double outer = 4 * eps + kPi * eps * eps;
    EXPECT_NEAR(qn_measure(CylinderRegion::upper(), u16, sq, eps),
                outer / neighborhood_area(sq, eps), 1e-9);
  }
}

TEST(BoundaryMeasure, Additivity) {
  const auto sq = ConvexBody::unit_square();
  const auto dens = BoundaryDensity::two_level_normalized(sq, 2.0, 2);
  const auto b = CylinderRegion::band([](double t) { return 0.8 * std::sin(1.3 * t); }, 4.0);
  const auto c = CylinderRegion::sband(IntervalSet(-0.4, 0.6), IntervalSet(0.5, 2.5));
  const double whole = qn_measure(b | c, dens, sq, 0.1);
  const double parts = qn_measure(b - c, dens, sq, 0.1) + qn_measure(c, dens, sq, 0.1);
  EXPECT_NEAR(whole, parts, 1e-7);
}

TEST(BoundaryMeasure, TvDisc) {
  const auto disc = ConvexBody::unit_disc();
  const auto u16 = BoundaryDensity::uniform_box(2);
  EXPECT_NEAR(tv_distance(u16, disc, 0.1, 256, 256), 0.025, 1e-9);
  EXPECT_NEAR(tv_distance(u16, disc, 0.01, 256, 256), 0.0025, 1e-9);
  double prev = 1.0;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const double tv = tv_distance(u16, disc, eps, 256, 256);
    EXPECT_NEAR(tv, eps / 4, 2e-3);
    EXPECT_LT(tv, prev);
    prev = tv;
  }
  EXPECT_THROW(tv_distance(u16, disc, 0.1, 32, 256), std::invalid_argument);
}

TEST(BoundaryMeasure, TvSquareShrinksAndStabilizes) {
  const auto sq = ConvexBody::unit_square();
  const auto dens = BoundaryDensity::two_level_normalized(sq, 2.0, 2);
  double prev = 1.0;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const double tv = tv_distance(dens, sq, eps, 512, 512);
    EXPECT_LT(tv, prev);
    prev = tv;
    const double fine = tv_distance(dens, sq, eps, 1024, 1024);
    EXPECT_NEAR(tv, fine, 1e-3);
  }
}

TEST(BoundaryMeasure, CollarDensityIsNormalized) {
  const auto disc = ConvexBody::unit_disc();
  const auto dens = make_collar_density(
      disc, [](double t) { return 0.05 + 0.02 * std::cos(t); },
      [](double t) { return 0.1 + 0.03 * std::sin(2 * t); }, 0.15, 0.2, 2.0);
  EXPECT_NEAR(total_mass(dens, disc), 1.0, 1e-6);
  EXPECT_GT(mp_total(dens, disc), 0.0);
  EXPECT_THROW(neighborhood_mass(disc, dens, 0.3), std::invalid_argument);
  EXPECT_NEAR(total_mass(BoundaryDensity::two_level_normalized(disc, 2.0, 2), disc), 1.0, 1e-12);

  // Monte Carlo ambient integral of the collar density as an independent check.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  double acc = 0;
  const int n = 400000;
  for (int k = 0; k < n; ++k) acc += dens.ambient(disc, {u(rng), u(rng)});
  EXPECT_NEAR(16 * acc / n, 1.0, 0.01);
}

TEST(BoundaryMeasure, ShiftedDiscRatio) {
  const auto disc = ConvexBody::unit_disc();
  const auto u16 = BoundaryDensity::uniform_box(2);
  const auto fam = shifted_disc_family(disc, 0.5);
  const auto rows = measure_derivative_check(fam, half_cos_band(), u16, disc, {0.1, 0.05, 0.01});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.ratio, lens_symdiff(0.5 * r.eps) / 16 / r.eps, 1e-5);
  }
  EXPECT_NEAR(rows.back().mp, 0.125, 1e-5);
  EXPECT_NEAR(rows.back().ratio / rows.back().mp, 1.0, 0.02);

  const auto empty = measure_derivative_check(empty_family(), CylinderRegion::empty(), u16, disc,
                                              {0.1, 0.01});
  EXPECT_EQ(empty.back().ratio, 0.0);
  EXPECT_EQ(empty.back().mp, 0.0);

  const auto full = measure_derivative_check(full_collar_family(disc), CylinderRegion::full(),
                                             u16, disc, {0.1, 0.01, 0.001});
  EXPECT_NEAR(full.back().ratio / full.back().mp, 1.0, 0.02);
}

TEST(BoundaryMeasure, SquareCornerQuadrature) {
  // A tau-image with a wedge in the corner sector, against the exact area.
  const auto sq = ConvexBody::unit_square();
  const auto u16 = BoundaryDensity::uniform_box(2);
  const double eps = 0.1;
  const auto img = CylinderRegion::tau_image(sq, eps, [&](const Point2& z) {
    return z.x > 1 && z.y < 0 && std::atan2(z.y, z.x - 1) < -kPi / 4 &&
           sq.boundary_distance(z) <= eps;
  });
  EXPECT_NEAR(preimage_probability(img, u16, sq, eps), kPi * eps * eps / 8 / 16, 1e-9);
}

TEST(BoundaryMeasure, DerivativeDeficit) {
  const auto disc = ConvexBody::unit_disc();
  const auto fam = shifted_disc_family(disc, 0.5);
  const double d05 = derivative_deficit(fam, half_cos_band(), disc, 0.05);
  EXPECT_LE(d05, 0.05);
  const double d1 = derivative_deficit(fam, half_cos_band(), disc, 0.1);
  const double d0125 = derivative_deficit(fam, half_cos_band(), disc, 0.0125);
  EXPECT_LT(d0125, d05);
  EXPECT_LT(d05, d1);
  EXPECT_EQ(derivative_deficit(empty_family(), CylinderRegion::empty(), disc, 0.05, 512, 512),
            0.0);
  for (double eps : {0.1, 0.05}) {
    const double outer = derivative_deficit(outer_band_family(disc), CylinderRegion::upper(),
                                            disc, eps, 512, 512);
    EXPECT_LE(outer, 1e-9);
  }
}
