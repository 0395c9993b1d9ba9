#pragma once

/**
 * @file empirical.hpp
 * @brief Samplers, local empirical processes, the limiting Gaussian field,
 * and the replication harness.
 *
 * z_n(A) = (Psi_n(A) - n P(A)) / sqrt(n a) with a = P(V_eps), and
 * v_n(C) = z_n(tau_eps^{-1} C) for cylinder regions C. Only points in the
 * collar matter, so the default sampler draws N ~ Binomial(n, a) and then N
 * points from P conditioned on V_eps.
 */

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "lep/density.hpp"
#include "lep/geometry.hpp"
#include "lep/region.hpp"
#include "lep/rng.hpp"

namespace lep {

/// Points of the collar. Every point keeps its ambient position next to its
/// cylinder coordinates (see LocalPoint).
struct LocalSample {
  double eps{0.0};
  std::uint64_t n_nominal{0};
  std::size_t total_count{0};
  std::vector<LocalPoint> points;
  std::uint64_t seed{0};
};

/// Rejection sampler for P conditioned on V_eps: uniform proposals on the
/// collar (annulus for a disc; edge strips and corner sectors for a polygon),
/// accepted with probability p(z) / sup p.
class CollarSampler {
 public:
  CollarSampler(ConvexBody body, BoundaryDensity dens, double eps);

  LocalPoint draw(CounterRng& rng) const;
  double eps() const { return eps_; }
  /// a = P(V_eps).
  double mass() const { return mass_; }

 private:
  LocalPoint propose(CounterRng& rng) const;

  ConvexBody body_;
  BoundaryDensity dens_;
  double eps_;
  double mass_;
  double p_sup_;
  std::vector<double> cumulative_;  // polygon proposal components
};

LocalSample sample_conditional(const ConvexBody& body, const BoundaryDensity& dens, double eps,
                               std::size_t count, std::uint64_t seed);
/// N ~ Binomial(n, a), then N conditional draws.
LocalSample sample_two_stage(const ConvexBody& body, const BoundaryDensity& dens, double eps,
                             std::uint64_t n, std::uint64_t seed);
LocalSample sample_two_stage(const CollarSampler& sampler, std::uint64_t n, std::uint64_t seed);
/// n i.i.d. draws from the ambient density on its support box.
std::vector<Point2> sample_ambient(const ConvexBody& body, const BoundaryDensity& dens,
                                   std::size_t n, std::uint64_t seed);
/// The collar points of an ambient sample.
LocalSample localize(const ConvexBody& body, double eps, const std::vector<Point2>& points,
                     std::uint64_t seed);

std::size_t psi_count(const LocalSample& sample, const CylinderRegion& region);
/// (count - n P) / sqrt(n a).
double z_stat(double count, double n, double p, double a);
double z_stat(const LocalSample& sample, const CylinderRegion& region, double p, double a);

/// Centered Gaussian vector indexed by regions with covariance Q(B_i n B_j).
struct GaussianDraw {
  std::vector<CylinderRegion> regions;
  std::vector<double> values;
  Eigen::MatrixXd covariance;
};

class BrownianField {
 public:
  /// Factorizes Q(B_i n B_j) + jitter I, raising the jitter by 10x up to
  /// three times. Throws CovarianceNotPSD after that.
  BrownianField(std::vector<CylinderRegion> regions, const BoundaryDensity& dens,
                const ConvexBody& body, double jitter = 1e-10);
  BrownianField(std::vector<CylinderRegion> regions, Eigen::MatrixXd covariance,
                double jitter = 1e-10);

  const Eigen::MatrixXd& covariance() const { return cov_; }
  double jitter_used() const { return jitter_; }
  std::size_t size() const { return regions_.size(); }
  Eigen::VectorXd sample(CounterRng& rng) const;
  GaussianDraw draw(std::uint64_t seed) const;

 private:
  void factor(double jitter);

  std::vector<CylinderRegion> regions_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  double jitter_{0.0};
};

GaussianDraw brownian_field(const std::vector<CylinderRegion>& regions,
                            const BoundaryDensity& dens, const ConvexBody& body,
                            std::uint64_t seed, double jitter = 1e-10);

/// Covariance matrix Q(B_i n B_j).
Eigen::MatrixXd q_covariance(const std::vector<CylinderRegion>& regions,
                             const BoundaryDensity& dens, const ConvexBody& body);

// ----------------------------------------------------------- replication

/// eps_n = eps0 * n^(-beta), unless explicit eps values are given.
struct Schedule {
  std::vector<std::uint64_t> n;
  double eps0{0.5};
  double beta{1.0 / 3.0};
  std::vector<double> eps;  ///< explicit eps_n, same length as n when set

  double eps_at(std::size_t i) const;
  /// Throws InvalidSchedule unless every eps_n lies in (0, inradius) and
  /// n eps_n strictly increases.
  void validate(const ConvexBody& body) const;
};

/// Runs fn(i, derive_seed(master, i)) for i < reps on `jobs` threads and
/// returns the rows in index order. Rows do not depend on `jobs`.
std::vector<std::vector<double>> run_replications(
    std::size_t reps, std::uint64_t master_seed, std::size_t jobs,
    const std::function<std::vector<double>(std::size_t, std::uint64_t)>& fn);

struct ReplicationReport {
  nlohmann::json config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed{0};
  nlohmann::json summary;

  nlohmann::json to_json() const;
  /// Header row, then one replication per line with its seed first.
  std::string to_csv() const;
};

struct ReplicationConfig {
  ConvexBody body;
  BoundaryDensity dens;
  std::uint64_t n{0};
  double eps{0.0};
  std::vector<CylinderRegion> regions;
  std::vector<std::string> region_names;
  std::size_t reps{1};
  std::uint64_t master_seed{0};
  std::size_t jobs{1};
  nlohmann::json echo;  ///< copied into the report
};

/// Two-stage replications of v_n over the regions. Summary: per-region
/// mean, variance, target Q(B), KS against Normal(0, Q(B)); covariance
/// matrix against Q(B n B').
ReplicationReport replicate(const ReplicationConfig& cfg);

}  // namespace lep
