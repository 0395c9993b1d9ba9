#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lep/boundary_measure.hpp"
#include "lep/errors.hpp"
#include "lep/set_classes.hpp"

using namespace lep;

namespace {

constexpr double kPi = std::numbers::pi;

CylinderRegion half_cos_band() {
  return CylinderRegion::band([](double t) { return 0.5 * std::cos(t); }, 2 * kPi);
}

IntervalParams random_intervals(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<double, 4> v{u(rng), u(rng), u(rng), u(rng)};
  std::sort(v.begin(), v.end());
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

TEST(SetClasses, IntervalBandsImageIsExact) {
  const auto disc = ConvexBody::unit_disc();
  const IntervalParams p{-0.7, -0.2, 0.1, 0.6};
  for (double eps : {0.1, 0.05, 0.01}) {
    const auto m = FamilyMember::interval_bands(disc, eps, p);
    const auto img = tau_image(m);
    ASSERT_NE(img.sband_intervals(), nullptr);
    EXPECT_EQ(img.sband_intervals()->pieces().size(), 2u);
    // Ambient membership agrees with the cylinder region after magnification.
    const auto generic = CylinderRegion::tau_image(disc, eps, m.membership());
    for (double t : {0.3, 2.0, 4.4}) {
      const IntervalSet a = generic.section(t);
      const IntervalSet b = img.section(t);
      EXPECT_NEAR((a ^ b).length(), 0.0, 1e-9);
    }
  }
  EXPECT_THROW(FamilyMember::interval_bands(disc, 0.1, {0.2, 0.1, 0.3, 0.4}),
               std::invalid_argument);
}

TEST(SetClasses, EmptyImage) {
  const auto disc = ConvexBody::unit_disc();
  const auto m = FamilyMember::interval_bands(disc, 0.1, {0.5, 0.5, 0.5, 0.5});
  EXPECT_NEAR(qn_measure(tau_image(m), BoundaryDensity::uniform_box(2), disc, 0.1), 0.0, 1e-12);
}

TEST(SetClasses, ShiftedDiscImageNearLimitBand) {
  const auto disc = ConvexBody::unit_disc();
  const double eps = 0.01;
  const auto e = ellipse_from_offsets(disc, eps, {0, 0, 0.5, 0, 0});
  const auto m = FamilyMember::ellipse(disc, eps, e);
  const auto img = tau_image(m);
  const Raster a = Raster::rasterize(img, 1024, 512, 2 * kPi);
  const Raster b = Raster::rasterize(half_cos_band(), 1024, 512, 2 * kPi);
  const double deficit = static_cast<double>(a.count_xor(b)) * a.cell_theta() * a.cell_s();
  // Two rows of cells per column is the raster tolerance.
  EXPECT_LE(deficit, 2 * 2 * kPi * a.cell_s());
  // The exact band agrees with the generic tau-image of E xor K.
  const auto generic = CylinderRegion::tau_image(disc, eps, m.membership());
  for (double t : {0.1, 1.7, 3.3, 5.9}) {
    EXPECT_NEAR((generic.section(t) ^ img.section(t)).length(), 0.0, 1e-8);
  }
  const FEParams lim = fe_limit({0, 0, 0.5, 0, 0});
  EXPECT_EQ(lim.a, 0.0);
  EXPECT_EQ(lim.b, 0.0);
  EXPECT_EQ(lim.c, 0.0);
  EXPECT_DOUBLE_EQ(lim.d, 0.5);
  EXPECT_EQ(lim.alpha, 0.0);
}

TEST(SetClasses, FELimitMatchesRadialExpansion) {
  const auto disc = ConvexBody::unit_disc();
  const EllipseOffsets o{0.2, -0.3, 0.1, 0.25, 0.7};
  const FEParams f = fe_limit(o);
  const double eps = 1e-5;
  const auto e = ellipse_from_offsets(disc, eps, o);
  for (double phi : {0.0, 0.9, 2.2, 4.0, 5.5}) {
    const double rho = e.radial({0, 0}, {std::cos(phi), std::sin(phi)});
    EXPECT_NEAR((rho - 1.0) / eps, f(phi), 1e-4);
  }
}

TEST(SetClasses, CollarValidation) {
  const auto disc = ConvexBody::unit_disc();
  EXPECT_THROW(FamilyMember::ellipse(disc, 0.05, ellipse_from_offsets(disc, 0.05, {1.5, 0, 0, 0, 0})),
               NotInCollar);
  const auto sq = ConvexBody::unit_square();
  const double eps = 0.1;
  EXPECT_NO_THROW(FamilyMember::quadrangle(sq, eps, {{{0.05, -0.05}, {1.02, 0.03}, {0.97, 1.05},
                                                      {-0.04, 0.95}}}));
  EXPECT_THROW(FamilyMember::quadrangle(sq, eps, {{{0.2, 0.2}, {1, 0}, {1, 1}, {0, 1}}}),
               NotInCollar);
  EXPECT_THROW(FamilyMember::quadrangle(sq, eps, {{{-0.3, 0}, {1, 0}, {1, 1}, {0, 1}}}),
               NotInCollar);
  // Every sampled member point lies in the collar.
  const auto q = FamilyMember::quadrangle(sq, eps, {{{0.05, -0.05}, {1.02, 0.03}, {0.97, 1.05},
                                                     {-0.04, 0.95}}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 1.3);
  for (int k = 0; k < 20000; ++k) {
    const Point2 z{u(rng), u(rng)};
    if (q.contains(z)) ASSERT_TRUE(in_neighborhood(sq, eps, z));
  }
}

TEST(SetClasses, QuadrangleImageMeasure) {
  // Q_n of the tau-image equals the exact area of Q xor K over a.
  const auto sq = ConvexBody::unit_square();
  const double eps = 0.1;
  const std::array<Point2, 4> v{{{0.05, -0.05}, {1.02, 0.03}, {0.97, 1.05}, {-0.04, 0.95}}};
  const auto q = FamilyMember::quadrangle(sq, eps, v);
  const auto dens = BoundaryDensity::uniform_box(2);
  const double p = preimage_probability(tau_image(q), dens, sq, eps);
  // Area of Q xor K by shoelace: area(Q) + area(K) - 2 area(Q n K).
  std::vector<Point2> inter(v.begin(), v.end());
  inter = clip_halfplane(inter, {0, -1}, 0);
  inter = clip_halfplane(inter, {1, 0}, 1);
  inter = clip_halfplane(inter, {0, 1}, 1);
  inter = clip_halfplane(inter, {-1, 0}, 0);
  const double area_q = polygon_area(std::vector<Point2>(v.begin(), v.end()));
  const double sym = area_q + 1.0 - 2.0 * polygon_area(inter);
  EXPECT_NEAR(p * 16.0, sym, 2e-5);
}

TEST(SetClasses, FBandsValidation) {
  EXPECT_NO_THROW(fq_band({1, -1, 0.5, 2}, {0, 0.5, -0.5, -1}));
  EXPECT_THROW(fq_band({2.5, 0, 0, 0}, {0, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(fq_band({1, 0, 0, 0}, {0.5, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(fe_band({0, 0.8, 0, 0, 0.5}, 1.0), std::invalid_argument);
  auto concave = [](double t) { return 0.5 - (t - 0.5) * (t - 0.5); };
  EXPECT_NO_THROW(fc_band({concave, concave, concave, concave}));
  auto convex = [](double t) { return (t - 0.5) * (t - 0.5); };
  EXPECT_THROW(fc_band({concave, convex, concave, concave}), std::invalid_argument);
}

TEST(SetClasses, DMetricExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto dens = BoundaryDensity::uniform_box(2);
  const auto b = half_cos_band();
  EXPECT_NEAR(d_metric(b, b, dens, disc), 0.0, 1e-12);
  EXPECT_NEAR(d_metric(CylinderRegion::upper(), CylinderRegion::lower(), dens, disc), 1.0, 1e-9);
  const auto half = CylinderRegion::sband(IntervalSet(0, 1), IntervalSet(0, kPi));
  EXPECT_NEAR(d_metric(CylinderRegion::upper(), half, dens, disc), 0.5, 1e-9);
}

TEST(SetClasses, DnMetricExamples) {
  const auto disc = ConvexBody::unit_disc();
  const auto dens = BoundaryDensity::uniform_box(2);
  const double eps = 0.1;
  const auto outer = FamilyMember::interval_bands(disc, eps, {0, 0, 0, 1});
  const auto inner = FamilyMember::interval_bands(disc, eps, {-1, 0, 0, 0});
  EXPECT_NEAR(dn_metric(outer, outer, dens), 0.0, 1e-12);
  EXPECT_NEAR(dn_metric(outer, inner, dens), 1.0, 1e-9);
  EXPECT_NEAR(dn_metric(CylinderRegion::empty(), CylinderRegion::full(), dens, disc, eps), 1.0,
              1e-9);
}

TEST(SetClasses, PseudometricAxioms) {
  const auto disc = ConvexBody::unit_disc();
  const auto dens = BoundaryDensity::two_level_normalized(disc, 2.0, 2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CylinderRegion> r;
    for (int k = 0; k < 3; ++k) {
      const FEParams p{0.3 * (u(rng) + 0.4), u(rng), u(rng), u(rng), u(rng)};
      r.push_back(fe_band(p, 1.0));
    }
    const double d01 = d_metric(r[0], r[1], dens, disc);
    const double d12 = d_metric(r[1], r[2], dens, disc);
    const double d02 = d_metric(r[0], r[2], dens, disc);
    EXPECT_NEAR(d01, d_metric(r[1], r[0], dens, disc), 1e-12);
    EXPECT_LE(d02, d01 + d12 + 1e-9);
    const double e01 = dn_metric(r[0], r[1], dens, disc, 0.05);
    const double e12 = dn_metric(r[1], r[2], dens, disc, 0.05);
    const double e02 = dn_metric(r[0], r[2], dens, disc, 0.05);
    EXPECT_LE(e02, e01 + e12 + 1e-9);
    EXPECT_GE(e01, 0.0);
    // The profile fast path agrees with quadrature.
    const auto m = d_matrix({r[0]}, {r[1]}, dens, disc);
    EXPECT_NEAR(m[0][0], d01, 1e-4);
  }
}

TEST(SetClasses, HausdorffGamma) {
  const auto disc = ConvexBody::unit_disc();
  const auto dens = BoundaryDensity::uniform_box(2);
  std::vector<CylinderRegion> g{half_cos_band(), CylinderRegion::upper()};
  EXPECT_NEAR(hausdorff_gamma(g, g, dens, disc), 0.0, 1e-12);
  const auto b1 = half_cos_band();
  const auto b2 = CylinderRegion::band([](double t) { return 0.3 * std::sin(t); }, 2 * kPi);
  EXPECT_NEAR(hausdorff_gamma({b1}, {b2}, dens, disc), d_metric(b1, b2, dens, disc), 1e-4);

  // Interval shells: tau-images against their own limits, 100 members.
  std::mt19937_64 rng(1);
  std::vector<CylinderRegion> bn;
  std::vector<CylinderRegion> b;
  for (int k = 0; k < 100; ++k) {
    const IntervalParams p = random_intervals(rng);
    bn.push_back(tau_image(FamilyMember::interval_bands(disc, 0.05, p)));
    IntervalSet s;
    s.add(p.a, p.b);
    s.add(p.c, p.d);
    b.push_back(CylinderRegion::sband(s));
  }
  EXPECT_NEAR(hausdorff_gamma(bn, b, dens, disc), 0.0, 1e-9);
}

TEST(SetClasses, EllipseGridConvergence) {
  // sup over the ellipse grid of the distance to the nearest F_E band shrinks with eps.
  const auto disc = ConvexBody::unit_disc();
  const auto dens = BoundaryDensity::uniform_box(2);
  std::vector<CylinderRegion> limit;
  std::vector<EllipseOffsets> offs;
  for (double u1 : {-0.3, 0.0, 0.3}) {
    for (double u2 : {-0.3, 0.0, 0.3}) {
      for (double x0 : {-0.3, 0.0, 0.3}) {
        offs.push_back({u1, u2, x0, 0.0, 0.0});
        limit.push_back(fe_band(fe_limit(offs.back()), 1.0));
      }
    }
  }
  double prev = 1.0;
  for (double eps : {0.1, 0.05, 0.025}) {
    std::vector<CylinderRegion> bn;
    for (const auto& o : offs) {
      bn.push_back(tau_image(FamilyMember::ellipse(disc, eps, ellipse_from_offsets(disc, eps, o))));
    }
    const auto d = d_matrix(bn, limit, dens, disc);
    double sup = 0.0;
    for (const auto& row : d) sup = std::max(sup, *std::min_element(row.begin(), row.end()));
    EXPECT_LT(sup, prev);
    prev = sup;
  }
}

TEST(SetClasses, IntervalBrackets) {
  const auto disc = ConvexBody::unit_disc();
  const auto dens = BoundaryDensity::uniform_box(2);
  const double eps = 0.05;
  const auto one = bracket_cover(FamilyKind::IntervalBands, 1.5, dens, disc, eps);
  EXPECT_EQ(one.count(), 1u);
  EXPECT_NEAR(one.brackets[0].size, 1.0, 1e-9);

  const auto set = bracket_cover(FamilyKind::IntervalBands, 0.5, dens, disc, eps);
  EXPECT_LE(set.count(), 6561u);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(0, 2 * kPi), us(-1, 1);
  for (const auto& b : set.brackets) {
    ASSERT_LE(b.size, 0.5);
  }
  for (int k = 0; k < 1000; ++k) {
    const IntervalParams p = random_intervals(rng);
    const auto idx = find_bracket(set, p);
    ASSERT_TRUE(idx.has_value());
    const auto& br = set.brackets[*idx];
    const auto member = tau_image(FamilyMember::interval_bands(disc, eps, p));
    for (int j = 0; j < 10; ++j) {
      const double t = ut(rng);
      const double s = us(rng);
      if (br.lower.contains(t, s)) ASSERT_TRUE(member.contains(t, s));
      if (member.contains(t, s)) ASSERT_TRUE(br.upper.contains(t, s));
    }
  }
  EXPECT_THROW(bracket_cover(FamilyKind::ConvexSymmDiff, 0.5, dens, ConvexBody::unit_square(), eps),
               UnsupportedFamily);
  const auto j = set.to_json();
  EXPECT_EQ(j["count"].get<std::size_t>(), set.count());
}

TEST(SetClasses, FEBrackets) {
  const auto disc = ConvexBody::unit_disc();
  const auto dens = BoundaryDensity::uniform_box(2);
  const double eps = 0.05;
  FEBox box;
  box.alpha = {0.0, 0.4};
  box.a = {-0.3, 0.3};
  box.b = {-0.3, 0.3};
  box.c = {-0.3, 0.3};
  box.d = {-0.3, 0.3};
  const auto set = bracket_cover(FamilyKind::EllipseSymmDiff, 0.5, dens, disc, eps, box);
  ASSERT_GT(set.count(), 0u);
  for (const auto& b : set.brackets) ASSERT_LE(b.size, 0.5);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(0.0, 0.4), up(-0.3, 0.3), ut(0, 2 * kPi), us(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const FEParams p{ua(rng), up(rng), up(rng), up(rng), up(rng)};
    const auto idx = find_bracket(set, p);
    ASSERT_TRUE(idx.has_value());
    const auto& br = set.brackets[*idx];
    const auto band = fe_band(p, 1.0);
    for (int j = 0; j < 50; ++j) {
      const double t = ut(rng);
      const double s = us(rng);
      if (br.lower.contains(t, s)) ASSERT_TRUE(band.contains(t, s));
      if (band.contains(t, s)) ASSERT_TRUE(br.upper.contains(t, s));
    }
  }
}

TEST(SetClasses, ShatterSBand) {
  EXPECT_TRUE(shatter_check(ShatterClass::SBand, {{0.0, 0.3}}).shattered);
  const std::vector<CylinderPoint> four{{0.1, -0.8}, {1.0, -0.2}, {2.0, 0.3}, {3.0, 0.9}};
  EXPECT_TRUE(shatter_check(ShatterClass::SBand, four).shattered);
  const std::vector<CylinderPoint> five{{0.1, -0.8}, {1.0, -0.4}, {2.0, 0.0}, {3.0, 0.4},
                                        {4.0, 0.8}};
  const auto rep = shatter_check(ShatterClass::SBand, five);
  EXPECT_FALSE(rep.shattered);
  ASSERT_TRUE(rep.missing.has_value());
  // Points are ordered by s, so the missing labeling picks three separated runs.
  EXPECT_EQ(*rep.missing, 0b10101u);
  std::vector<CylinderPoint> many(13, {0.0, 0.0});
  EXPECT_THROW(shatter_check(ShatterClass::SBand, many), TooManyPoints);
}

TEST(SetClasses, ShatterFEBand) {
  EXPECT_TRUE(shatter_check(ShatterClass::FEBand, {{0.5, 0.2}}).shattered);
  // Two points on one normal line: the band is an interval from 0, so the
  // far point cannot be taken without the near one.
  const auto rep = shatter_check(ShatterClass::FEBand, {{1.0, 0.2}, {1.0, 0.6}});
  EXPECT_FALSE(rep.shattered);
}
