#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <numbers>

#include "lep/boundary_measure.hpp"
#include "lep/config.hpp"
#include "lep/errors.hpp"

using namespace lep;
using json = nlohmann::json;

TEST(Config, Bodies) {
  EXPECT_TRUE(parse_body(json()).is_disc());
  EXPECT_NEAR(parse_body("unit_square").area(), 1.0, 1e-15);
  const auto d = parse_body(json{{"type", "disc"}, {"center", {1, 2}}, {"radius", 0.5}});
  EXPECT_EQ(d.as_disc().center, (Point2{1, 2}));
  EXPECT_EQ(d.as_disc().radius, 0.5);
  const auto tri = parse_body(json{{"type", "polygon"}, {"vertices", {{0, 0}, {2, 0}, {0, 2}}}});
  EXPECT_NEAR(tri.area(), 2.0, 1e-15);
  EXPECT_THROW(parse_body("torus"), ConfigError);
  EXPECT_THROW(parse_body(json{{"type", "disc"}}), ConfigError);
  EXPECT_THROW(parse_body(json{{"type", "disc"}, {"radius", -1}}), ConfigError);
}

TEST(Config, Densities) {
  const auto disc = ConvexBody::unit_disc();
  EXPECT_NEAR(parse_density(json(), disc).ambient(disc, {0, 0}), 1.0 / 16, 1e-15);
  const auto two = parse_density(json{{"type", "two_level"}, {"c_in", 0.1}, {"c_out", 0.05}}, disc);
  EXPECT_EQ(two.as_two_level().c_in, 0.1);
  const auto norm = parse_density(json{{"type", "two_level_normalized"}, {"ratio", 2.0}}, disc);
  EXPECT_NEAR(total_mass(norm, disc), 1.0, 1e-12);
  EXPECT_THROW(parse_density(json{{"type", "two_level"}, {"c_in", 0.1}}, disc), ConfigError);
  EXPECT_THROW(parse_density(json{{"type", "lumpy"}}, disc), ConfigError);
}

TEST(Config, Regions) {
  const auto disc = ConvexBody::unit_disc();
  const auto regions = parse_regions(
      json::parse(R"([
        "upper",
        {"name": "half", "type": "sband", "s": [[-1, 1]], "theta": [[0, 3.141592653589793]]},
        {"type": "sband", "s": [[-1, -0.5], [0.5, 1]]},
        {"type": "fe", "d": 0.5}
      ])"),
      disc);
  ASSERT_EQ(regions.size(), 4u);
  EXPECT_EQ(regions[0].name, "upper");
  EXPECT_EQ(regions[1].name, "half");
  EXPECT_EQ(regions[2].name, "region_2");
  const auto dens = BoundaryDensity::uniform_box(2);
  EXPECT_NEAR(q_measure(regions[1].region, dens, disc), 0.5, 1e-12);
  EXPECT_NEAR(q_measure(regions[2].region, dens, disc), 0.5, 1e-12);
  EXPECT_NEAR(mp_measure(regions[3].region, dens, disc), 0.125, 1e-4);
  EXPECT_THROW(parse_regions(json::array(), disc), ConfigError);
  const auto lattice = parse_regions(json{{"lattice", {{"s_cells", 2}, {"theta_cells", 2}}}}, disc);
  ASSERT_EQ(lattice.size(), 9u);
  EXPECT_EQ(lattice[8].name, "lattice_8");
  EXPECT_THROW(parse_regions(json{{"lattice", {{"s_cells", 0}}}}, disc), ConfigError);
  EXPECT_THROW(parse_region(json{{"type", "sband"}, {"s", {{0.5, 0.1}}}}, disc, 0), ConfigError);
  EXPECT_THROW(parse_region(json{{"type", "fe"}, {"d", 2.0}}, disc, 0), ConfigError);
  EXPECT_THROW(parse_region(json{{"type", "fe"}}, ConvexBody::unit_square(), 0), ConfigError);
}

TEST(Config, ScheduleAndBox) {
  const auto s = parse_schedule(json{{"n", {1000, 10000}}, {"eps0", 0.4}});
  EXPECT_EQ(s.n.size(), 2u);
  EXPECT_NEAR(s.eps_at(0), 0.04, 1e-12);
  const auto b = parse_search_box(json{{"step", 0.5}, {"stages", 2}});
  EXPECT_EQ(b.step, 0.5);
  EXPECT_EQ(b.stages, 2);
  EXPECT_EQ(b.refine, 4);
  EXPECT_THROW(parse_search_box(json{{"step", "wide"}}), ConfigError);
}

TEST(Config, Files) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
  const std::string path = ::testing::TempDir() + "lep_config_test.json";
  {
    std::ofstream f(path);
    f << "{\"n\": 5";
  }
  EXPECT_THROW(load_config(path), ConfigError);
  {
    std::ofstream f(path);
    f << "{\"n\": 5}";
  }
  EXPECT_EQ(load_config(path)["n"].get<int>(), 5);
  std::remove(path.c_str());
}
