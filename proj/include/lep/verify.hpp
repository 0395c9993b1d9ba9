#pragma once

/**
 * @file verify.hpp
 * @brief Monte Carlo checks of the limit theorem and the statistical
 * applications: change-set likelihoods, excess-mass and minimum-volume
 * disc estimators.
 *
 * Suprema over classes are maxima over finite region grids.
 */

#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <utility>
#include <vector>

#include "lep/density.hpp"
#include "lep/empirical.hpp"
#include "lep/geometry.hpp"
#include "lep/region.hpp"
#include "lep/set_classes.hpp"

namespace lep {

// -------------------------------------------------------------- statement (a)

/// B_n-grid at a given eps (tau-images of a grid of sets of the eps-collar).
using MovingGrid = std::function<std::vector<CylinderRegion>(double eps)>;

struct StatementAConfig {
  ConvexBody body;
  BoundaryDensity dens;
  Schedule schedule;
  MovingGrid moving_grid;
  std::vector<CylinderRegion> limit_grid;
  std::optional<double> gamma;  ///< pairing tolerance; hausdorff_gamma when unset
  std::size_t reps{200};
  std::uint64_t master_seed{0};
  std::size_t jobs{1};
};

struct StatementALevel {
  std::uint64_t n{0};
  double eps{0.0};
  double gamma{0.0};
  std::size_t pairs{0};
  std::vector<double> sups;  ///< one sup |v_n(B_n) - v_n(B)| per replication
  double median{0.0};
};

struct StatementAReport {
  std::vector<StatementALevel> levels;
  bool non_increasing{false};
  /// last median / first median
  double ratio{0.0};
  nlohmann::json to_json() const;
};

/// For every level of the schedule: pairs (i, j) with d(B_n,i, B_j) <= gamma_n
/// and, per replication, the largest |v_n(B_n,i) - v_n(B_j)| over the pairs.
/// Throws EmptyPairing if a level has no pair.
StatementAReport statement_a_statistic(const StatementAConfig& cfg);

/// Offsets grid u1 x u2 x x0 with y0 = alpha = 0.
std::vector<EllipseOffsets> ellipse_offset_grid(const std::vector<double>& values);
/// tau-images of E xor K for the offsets at each eps (K a disc).
MovingGrid ellipse_moving_grid(const ConvexBody& disc, std::vector<EllipseOffsets> offsets);
/// The F_E limit bands of the offsets.
std::vector<CylinderRegion> ellipse_limit_grid(const ConvexBody& disc,
                                               const std::vector<EllipseOffsets>& offsets);

// -------------------------------------------------------------- statement (b)

struct StatementBTolerances {
  double ks{0.06};
  double mean{0.05};
  double variance_rel{0.05};
  double covariance{0.02};
  double max_fail_fraction{0.10};
};

struct RegionCheck {
  std::string name;
  double q{0.0};
  double mean{0.0};
  double variance{0.0};
  double ks{0.0};
  bool ks_pass{false};
  bool mean_pass{false};
  bool variance_pass{false};
};

struct CovarianceCheck {
  std::size_t i{0};
  std::size_t j{0};
  double empirical{0.0};
  double target{0.0};
  bool pass{false};
};

struct StatementBReport {
  std::vector<RegionCheck> regions;
  std::vector<CovarianceCheck> covariances;
  double ks_fail_fraction{0.0};
  bool pass{false};
  ReplicationReport replications;
  nlohmann::json to_json() const;
};

/// v_n over at most 64 regions, reps >= 500. A region passes KS if the
/// distance to Normal(0, Q(B)) is at most tol.ks; the report passes when the
/// KS failure fraction is at most tol.max_fail_fraction and every pairwise
/// covariance is within tol.covariance of Q(B n B').
StatementBReport statement_b_test(const ReplicationConfig& cfg,
                                  const StatementBTolerances& tol = {});

// ------------------------------------------------------------ sup functional

struct SupFunctionalConfig {
  ConvexBody body;
  BoundaryDensity dens;
  std::uint64_t n{0};
  double eps{0.0};
  std::vector<CylinderRegion> regions;
  std::size_t reps{1000};   ///< v_n replications
  std::size_t draws{1000};  ///< W draws
  std::uint64_t master_seed{0};
  std::size_t jobs{1};
  double tolerance{0.08};
  /// Optional finer grid, evaluated on the same samples as `regions`.
  std::vector<CylinderRegion> fine_regions;
};

struct SupFunctionalReport {
  std::vector<double> sup_vn;
  std::vector<double> sup_w;
  double ks{0.0};
  double p_value{0.0};
  bool pass{false};
  // Filled only when fine_regions is set.
  std::vector<double> sup_vn_fine;
  double drift{0.0};     ///< median fine sup minus median coarse sup
  double drift_ks{0.0};  ///< KS distance between the two sup samples
  nlohmann::json to_json() const;
};

/// SBand rectangles [s_i, s_j] x [theta_k, theta_l] over uniform partitions of
/// [-1, 1] and [0, 2 pi). Doubling both cell counts yields a superset.
std::vector<CylinderRegion> sband_lattice(std::size_t s_cells, std::size_t theta_cells);

/// Two-sample KS distance between max_k |v_n(B_k)| and max_k |W(B_k)|.
SupFunctionalReport sup_functional_test(const SupFunctionalConfig& cfg);

// ----------------------------------------------------------------- change set

/// (#points in K(eps) \ K, #points in K \ K(eps)).
std::pair<std::size_t, std::size_t> changeset_counts(const std::vector<Point2>& points,
                                                     const AmbientSet& k,
                                                     const AmbientSet& k_eps);

/// Marks follow P2 on the changed set and P1 elsewhere; xi = log dP2/dP1.
struct ChangeSetModel {
  AmbientSet k;
  std::function<AmbientSet(double eps)> deviation;  ///< K(eps)
  std::function<double(double)> xi;
  std::function<double(CounterRng&)> draw_p1;
  std::function<double(CounterRng&)> draw_p2;

  /// P1 = Normal(mu1, sigma), P2 = Normal(mu2, sigma).
  static ChangeSetModel normal_shift(AmbientSet k, std::function<AmbientSet(double)> deviation,
                                     double mu1, double mu2, double sigma);
};

struct MarkedSample {
  std::vector<Point2> points;
  std::vector<double> marks;
};

/// Ambient points from dens; marks from P2 inside `p2_region`, P1 outside.
MarkedSample sample_marked(const ChangeSetModel& model, const ConvexBody& body,
                           const BoundaryDensity& dens, const AmbientSet& p2_region,
                           std::size_t n, std::uint64_t seed);

/// sum over points of [1_{K(eps) \ K} - 1_{K \ K(eps)}] xi(Y).
double changeset_loglik(const MarkedSample& sample, const ChangeSetModel& model, double eps);

// ------------------------------------------------------------ disc estimators

struct DiscParams {
  double cx{0.0};
  double cy{0.0};
  double r{0.0};
  auto operator<=>(const DiscParams&) const = default;
};

/// Mass of the closed disc of radius r around a fixed center.
using MassProfile = std::function<double(double r)>;
/// Mass profile of each center.
using DiscMassModel = std::function<MassProfile(const Point2& center)>;

/// P(D) for a two-level density around a disc body. Requires every
/// candidate disc to stay inside the support box.
DiscMassModel population_mass_model(const ConvexBody& body, const BoundaryDensity& dens);
/// Psi_n(D) / n for a sample.
DiscMassModel sample_mass_model(std::vector<Point2> points);

/// Coarse-to-fine search box for disc parameters. Stage 0 is the grid
/// c_lo, c_lo + step, ..., c_hi (both coordinates) and r_lo, ..., r_hi; each
/// later stage divides the step by `refine` and scans +-1 old step around the
/// incumbent.
struct DiscSearchBox {
  double c_lo{-1.0};
  double c_hi{1.0};
  double r_lo{0.25};
  double r_hi{1.5};
  double step{0.25};
  int stages{3};
  int refine{4};
  double support_half_width{2.0};  ///< discs must fit in [-h, h]^2
};

struct DiscFit {
  DiscParams params;
  double objective{0.0};
  double mass{0.0};
  std::size_t ties{1};
  bool at_box_boundary{false};
  nlohmann::json to_json() const;
};

/// argmax of mass(D) - lambda pi r^2; lexicographically smallest (cx, cy, r)
/// among exact ties. Throws DegenerateSolution when the best value is not
/// positive.
DiscFit excess_mass(const DiscMassModel& model, double lambda, const DiscSearchBox& box = {});

/// Smallest disc of mass >= alpha: the least feasible radius per grid
/// center, found by bisection, then the center with the smallest radius
/// (lexicographic among radii equal to 1e-12). Throws Infeasible if no
/// center reaches alpha inside the box.
DiscFit min_volume_set(const DiscMassModel& model, double alpha, const DiscSearchBox& box = {});

/// Area of the intersection of two discs.
double disc_intersection_area(const Point2& c1, double r1, const Point2& c2, double r2);

}  // namespace lep
