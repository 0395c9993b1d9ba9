#include "lep/empirical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "lep/boundary_measure.hpp"
#include "lep/errors.hpp"
#include "lep/stats.hpp"

namespace lep {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(CounterRng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace

// ----------------------------------------------------------- CollarSampler

CollarSampler::CollarSampler(ConvexBody body, BoundaryDensity dens, double eps)
    : body_(std::move(body)), dens_(std::move(dens)), eps_(eps) {
  mass_ = neighborhood_mass(body_, dens_, eps_);
  p_sup_ = dens_.boundary_sup();
  if (!(mass_ > 0.0) || !(p_sup_ > 0.0)) {
    throw std::invalid_argument("the collar has zero probability");
  }
  if (!body_.is_disc()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < body_.edge_count(); ++i) {
      acc += body_.edge_length(i) * eps_;  // outer strip
      cumulative_.push_back(acc);
      acc += body_.edge_length(i) * eps_;  // inner strip
      cumulative_.push_back(acc);
    }
    for (const Corner& c : body_.corners()) {
      acc += 0.5 * c.phi_span * eps_ * eps_;
      cumulative_.push_back(acc);
    }
  }
}

LocalPoint CollarSampler::propose(CounterRng& rng) const {
  if (body_.is_disc()) {
    const auto& d = body_.as_disc();
    const double r0 = d.radius - eps_;
    const double r1 = d.radius + eps_;
    const double r = std::sqrt(r0 * r0 + uniform01(rng) * (r1 * r1 - r0 * r0));
    const double phi = 2.0 * kPi * uniform01(rng);
    const Point2 z = d.center + r * Point2{std::cos(phi), std::sin(phi)};
    return {{body_.wrap(d.radius * phi), std::clamp((r - d.radius) / eps_, -1.0, 1.0)}, z};
  }
  const std::size_t m = body_.edge_count();
  for (;;) {
    const double u = uniform01(rng) * cumulative_.back();
    const auto k = static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    const std::size_t comp = std::min(k, cumulative_.size() - 1);
    if (comp < 2 * m) {
      const std::size_t i = comp / 2;
      const bool outer = comp % 2 == 0;
      const double t = uniform01(rng) * body_.edge_length(i);
      const double h = uniform01(rng) * eps_;
      const Point2 foot = body_.boundary_point(body_.edge_theta0(i) + t);
      const Vec2 n = body_.edge_outer_normal(i);
      if (outer) {
        return {{body_.wrap(body_.edge_theta0(i) + t), h / eps_}, foot + h * n};
      }
      const Point2 z = foot - h * n;
      bool nearest = true;
      for (std::size_t j = 0; j < m && nearest; ++j) {
        if (j != i) nearest = body_.edge_depth(j, z) > h;
      }
      if (!nearest) continue;
      return {{body_.wrap(body_.edge_theta0(i) + t), -h / eps_}, z};
    }
    const Corner& c = body_.corners()[comp - 2 * m];
    const double phi = c.phi_begin + uniform01(rng) * c.phi_span;
    const double r = eps_ * std::sqrt(uniform01(rng));
    return {{c.theta, r / eps_}, c.vertex + r * Point2{std::cos(phi), std::sin(phi)}};
  }
}

LocalPoint CollarSampler::draw(CounterRng& rng) const {
  for (;;) {
    const LocalPoint p = propose(rng);
    const double dens = p.cyl.s > 0.0 ? dens_.p_plus(p.cyl.theta) : dens_.p_minus(p.cyl.theta);
    if (uniform01(rng) * p_sup_ < dens) return p;
  }
}

LocalSample sample_conditional(const ConvexBody& body, const BoundaryDensity& dens, double eps,
                               std::size_t count, std::uint64_t seed) {
  LocalSample out{eps, count, 0, {}, seed};
  if (count == 0) return out;
  const CollarSampler sampler(body, dens, eps);
  CounterRng rng(seed);
  out.points.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.points.push_back(sampler.draw(rng));
  out.total_count = out.points.size();
  return out;
}

LocalSample sample_two_stage(const CollarSampler& sampler, std::uint64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_two_stage needs n >= 1");
  CounterRng rng(seed);
  const std::uint64_t count =
      std::binomial_distribution<std::uint64_t>(n, std::min(1.0, sampler.mass()))(rng);
  LocalSample out{sampler.eps(), n, 0, {}, seed};
  out.points.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) out.points.push_back(sampler.draw(rng));
  out.total_count = out.points.size();
  return out;
}

LocalSample sample_two_stage(const ConvexBody& body, const BoundaryDensity& dens, double eps,
                             std::uint64_t n, std::uint64_t seed) {
  require_eps(body, eps);
  dens.check_collar(body, eps);
  if (neighborhood_mass(body, dens, eps) == 0.0) {
    if (n < 1) throw std::invalid_argument("sample_two_stage needs n >= 1");
    return LocalSample{eps, n, 0, {}, seed};
  }
  return sample_two_stage(CollarSampler(body, dens, eps), n, seed);
}

std::vector<Point2> sample_ambient(const ConvexBody& body, const BoundaryDensity& dens,
                                   std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  const double r = dens.half_width();
  const double sup = dens.ambient_sup();
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<Point2> out;
  out.reserve(n);
  while (out.size() < n) {
    const Point2 z{u(rng), u(rng)};
    if (uniform01(rng) * sup < dens.ambient(body, z)) out.push_back(z);
  }
  return out;
}

LocalSample localize(const ConvexBody& body, double eps, const std::vector<Point2>& points,
                     std::uint64_t seed) {
  require_eps(body, eps);
  LocalSample out{eps, points.size(), 0, {}, seed};
  for (const Point2& z : points) {
    const SignedProjection p = body.project_any(z);
    if (std::abs(p.signed_distance) <= eps) {
      out.points.push_back({{p.foot.theta, p.signed_distance / eps}, z});
    }
  }
  out.total_count = out.points.size();
  return out;
}

std::size_t psi_count(const LocalSample& sample, const CylinderRegion& region) {
  std::size_t count = 0;
  for (const auto& p : sample.points) count += region.contains(p) ? 1 : 0;
  return count;
}

double z_stat(double count, double n, double p, double a) {
  if (!(a > 0.0) || !(n >= 1.0)) throw std::invalid_argument("z_stat needs a > 0 and n >= 1");
  return (count - n * p) / std::sqrt(n * a);
}

double z_stat(const LocalSample& sample, const CylinderRegion& region, double p, double a) {
  return z_stat(static_cast<double>(psi_count(sample, region)),
                static_cast<double>(sample.n_nominal), p, a);
}

// ------------------------------------------------------------ Gaussian field

Eigen::MatrixXd q_covariance(const std::vector<CylinderRegion>& regions,
                             const BoundaryDensity& dens, const ConvexBody& body) {
  const auto m = static_cast<Eigen::Index>(regions.size());
  Eigen::MatrixXd c(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double q = i == j ? q_measure(regions[i], dens, body)
                              : q_measure(regions[i] & regions[j], dens, body);
      c(i, j) = q;
      c(j, i) = q;
    }
  }
  return c;
}

BrownianField::BrownianField(std::vector<CylinderRegion> regions, const BoundaryDensity& dens,
                             const ConvexBody& body, double jitter)
    : BrownianField(regions, q_covariance(regions, dens, body), jitter) {}

BrownianField::BrownianField(std::vector<CylinderRegion> regions, Eigen::MatrixXd covariance,
                             double jitter)
    : regions_(std::move(regions)), cov_(std::move(covariance)) {
  if (regions_.empty() || regions_.size() > 256) {
    throw std::invalid_argument("brownian field needs between 1 and 256 regions");
  }
  if (cov_.rows() != static_cast<Eigen::Index>(regions_.size()) || cov_.cols() != cov_.rows()) {
    throw std::invalid_argument("covariance size does not match the regions");
  }
  factor(jitter);
}

void BrownianField::factor(double jitter) {
  const auto m = cov_.rows();
  double j = jitter;
  for (int attempt = 0; attempt <= 3; ++attempt, j *= 10.0) {
    Eigen::MatrixXd shifted = cov_;
    shifted.diagonal().array() += j;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = j;
      return;
    }
  }
  throw CovarianceNotPSD("factorization failed with jitter up to " + std::to_string(j / 10.0) +
                         " on a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
}

Eigen::VectorXd BrownianField::sample(CounterRng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(cov_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  return chol_ * z;
}

GaussianDraw BrownianField::draw(std::uint64_t seed) const {
  CounterRng rng(seed);
  const Eigen::VectorXd v = sample(rng);
  return GaussianDraw{regions_, std::vector<double>(v.data(), v.data() + v.size()), cov_};
}

GaussianDraw brownian_field(const std::vector<CylinderRegion>& regions,
                            const BoundaryDensity& dens, const ConvexBody& body,
                            std::uint64_t seed, double jitter) {
  return BrownianField(regions, dens, body, jitter).draw(seed);
}

// ---------------------------------------------------------------- schedule

double Schedule::eps_at(std::size_t i) const {
  if (!eps.empty()) return eps.at(i);
  return eps0 * std::pow(static_cast<double>(n.at(i)), -beta);
}

void Schedule::validate(const ConvexBody& body) const {
  if (n.empty()) throw InvalidSchedule("empty schedule");
  if (!eps.empty() && eps.size() != n.size()) {
    throw InvalidSchedule("explicit eps list does not match the n list");
  }
  double prev = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double e = eps_at(i);
    if (!(e > 0.0) || !(e < body.inradius())) {
      throw InvalidSchedule("eps_n = " + std::to_string(e) + " is not in (0, inradius)");
    }
    const double ne = static_cast<double>(n[i]) * e;
    if (!(ne > prev)) throw InvalidSchedule("n eps_n must increase along the schedule");
    prev = ne;
  }
}

// -------------------------------------------------------------- replication

std::vector<std::vector<double>> run_replications(
    std::size_t reps, std::uint64_t master_seed, std::size_t jobs,
    const std::function<std::vector<double>(std::size_t, std::uint64_t)>& fn) {
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  std::vector<std::vector<double>> rows(reps);
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, reps));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= reps) return;
      try {
        rows[i] = fn(i, derive_seed(master_seed, i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = reps;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

nlohmann::json ReplicationReport::to_json() const {
  nlohmann::json j;
  j["config"] = config;
  j["master_seed"] = master_seed;
  j["columns"] = columns;
  nlohmann::json reps = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    reps.push_back({{"rep", i}, {"seed", seeds[i]}, {"values", rows[i]}});
  }
  j["replications"] = reps;
  j["summary"] = summary;
  return j;
}

std::string ReplicationReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "rep,seed";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << seeds[i];
    for (double v : rows[i]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

ReplicationReport replicate(const ReplicationConfig& cfg) {
  require_eps(cfg.body, cfg.eps);
  if (cfg.regions.empty()) throw std::invalid_argument("replicate needs at least one region");
  if (cfg.n < 1) throw std::invalid_argument("replicate needs n >= 1");
  const CollarSampler sampler(cfg.body, cfg.dens, cfg.eps);
  const double a = sampler.mass();
  const double n = static_cast<double>(cfg.n);
  std::vector<double> prob;
  for (const auto& r : cfg.regions) prob.push_back(preimage_probability(r, cfg.dens, cfg.body, cfg.eps));

  ReplicationReport rep;
  rep.config = cfg.echo;
  rep.master_seed = cfg.master_seed;
  rep.columns.push_back("N");
  for (std::size_t k = 0; k < cfg.regions.size(); ++k) {
    rep.columns.push_back(k < cfg.region_names.size() ? cfg.region_names[k]
                                                      : "region_" + std::to_string(k));
  }
  rep.rows = run_replications(cfg.reps, cfg.master_seed, cfg.jobs,
                              [&](std::size_t, std::uint64_t seed) {
                                const LocalSample s = sample_two_stage(sampler, cfg.n, seed);
                                std::vector<double> row{static_cast<double>(s.total_count)};
                                for (std::size_t k = 0; k < cfg.regions.size(); ++k) {
                                  row.push_back(z_stat(static_cast<double>(psi_count(s, cfg.regions[k])),
                                                       n, prob[k], a));
                                }
                                return row;
                              });
  for (std::size_t i = 0; i < cfg.reps; ++i) rep.seeds.push_back(derive_seed(cfg.master_seed, i));

  const Eigen::MatrixXd target = q_covariance(cfg.regions, cfg.dens, cfg.body);
  std::vector<std::vector<double>> cols(cfg.regions.size());
  for (const auto& row : rep.rows) {
    for (std::size_t k = 0; k < cfg.regions.size(); ++k) cols[k].push_back(row[k + 1]);
  }
  nlohmann::json regions = nlohmann::json::array();
  for (std::size_t k = 0; k < cfg.regions.size(); ++k) {
    nlohmann::json r;
    r["name"] = rep.columns[k + 1];
    r["q"] = target(k, k);
    r["qn"] = prob[k] / a;
    r["mean"] = stats::mean(cols[k]);
    if (cfg.reps >= 2) {
      r["variance"] = stats::variance(cols[k]);
      r["ks"] = target(k, k) > 0.0 ? stats::ks_normal(cols[k], 0.0, std::sqrt(target(k, k)))
                                   : 1.0;
    }
    regions.push_back(r);
  }
  rep.summary["a"] = a;
  rep.summary["n"] = cfg.n;
  rep.summary["eps"] = cfg.eps;
  rep.summary["reps"] = cfg.reps;
  rep.summary["regions"] = regions;
  if (cfg.reps >= 2) {
    nlohmann::json cov = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.regions.size(); ++i) {
      for (std::size_t j = i + 1; j < cfg.regions.size(); ++j) {
        cov.push_back({{"i", i},
                       {"j", j},
                       {"empirical", stats::covariance(cols[i], cols[j])},
                       {"target", target(i, j)}});
      }
    }
    rep.summary["covariances"] = cov;
  }
  std::vector<double> counts;
  for (const auto& row : rep.rows) counts.push_back(row[0]);
  rep.summary["mean_N"] = stats::mean(counts);
  return rep;
}

}  // namespace lep
