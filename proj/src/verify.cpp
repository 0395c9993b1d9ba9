#include "lep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "lep/boundary_measure.hpp"
#include "lep/errors.hpp"
#include "lep/stats.hpp"

namespace lep {

namespace {

constexpr double kPi = std::numbers::pi;

// Seeds of the Gaussian draws in sup_functional_test, kept apart from the
// sample seeds of the same master.
constexpr std::uint64_t kFieldStream = 0x5DEECE66DULL;

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t k) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(k));
  return out;
}

}  // namespace

// -------------------------------------------------------------- statement (a)

std::vector<EllipseOffsets> ellipse_offset_grid(const std::vector<double>& values) {
  std::vector<EllipseOffsets> out;
  for (double u1 : values) {
    for (double u2 : values) {
      for (double x0 : values) out.push_back({u1, u2, x0, 0.0, 0.0});
    }
  }
  return out;
}

MovingGrid ellipse_moving_grid(const ConvexBody& disc, std::vector<EllipseOffsets> offsets) {
  if (!disc.is_disc()) throw std::invalid_argument("ellipse grids need a disc body");
  return [disc, offsets = std::move(offsets)](double eps) {
    std::vector<CylinderRegion> out;
    out.reserve(offsets.size());
    for (const auto& o : offsets) {
      out.push_back(tau_image(FamilyMember::ellipse(disc, eps, ellipse_from_offsets(disc, eps, o))));
    }
    return out;
  };
}

std::vector<CylinderRegion> ellipse_limit_grid(const ConvexBody& disc,
                                               const std::vector<EllipseOffsets>& offsets) {
  if (!disc.is_disc()) throw std::invalid_argument("ellipse grids need a disc body");
  std::vector<CylinderRegion> out;
  out.reserve(offsets.size());
  for (const auto& o : offsets) out.push_back(fe_band(fe_limit(o), disc.as_disc().radius));
  return out;
}

StatementAReport statement_a_statistic(const StatementAConfig& cfg) {
  cfg.schedule.validate(cfg.body);
  if (cfg.limit_grid.empty()) throw std::invalid_argument("empty limit grid");
  if (cfg.gamma && !(*cfg.gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  StatementAReport report;
  for (std::size_t level = 0; level < cfg.schedule.n.size(); ++level) {
    StatementALevel out;
    out.n = cfg.schedule.n[level];
    out.eps = cfg.schedule.eps_at(level);
    const auto moving = cfg.moving_grid(out.eps);
    if (moving.empty()) throw std::invalid_argument("empty moving grid");
    const auto d = d_matrix(moving, cfg.limit_grid, cfg.dens, cfg.body);
    out.gamma = cfg.gamma ? *cfg.gamma : hausdorff_gamma(d);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < moving.size(); ++i) {
      for (std::size_t j = 0; j < cfg.limit_grid.size(); ++j) {
        if (d[i][j] <= out.gamma * (1.0 + 1e-12) + 1e-15) pairs.emplace_back(i, j);
      }
    }
    if (pairs.empty()) {
      throw EmptyPairing("no pair within gamma = " + std::to_string(out.gamma) +
                         " at n = " + std::to_string(out.n));
    }
    out.pairs = pairs.size();

    // Regions that occur in a pair: moving ones first, then limit ones.
    std::vector<int> slot_moving(moving.size(), -1);
    std::vector<int> slot_limit(cfg.limit_grid.size(), -1);
    std::vector<const CylinderRegion*> used;
    for (const auto& [i, j] : pairs) {
      if (slot_moving[i] < 0) {
        slot_moving[i] = static_cast<int>(used.size());
        used.push_back(&moving[i]);
      }
    }
    for (const auto& [i, j] : pairs) {
      if (slot_limit[j] < 0) {
        slot_limit[j] = static_cast<int>(used.size());
        used.push_back(&cfg.limit_grid[j]);
      }
    }
    std::vector<double> prob;
    prob.reserve(used.size());
    for (const auto* r : used) prob.push_back(preimage_probability(*r, cfg.dens, cfg.body, out.eps));

    const CollarSampler sampler(cfg.body, cfg.dens, out.eps);
    const double a = sampler.mass();
    const double n = static_cast<double>(out.n);
    const auto rows = run_replications(
        cfg.reps, derive_seed(cfg.master_seed, level), cfg.jobs,
        [&](std::size_t, std::uint64_t seed) {
          const LocalSample s = sample_two_stage(sampler, out.n, seed);
          std::vector<double> z(used.size());
          for (std::size_t k = 0; k < used.size(); ++k) {
            z[k] = z_stat(static_cast<double>(psi_count(s, *used[k])), n, prob[k], a);
          }
          double sup = 0.0;
          for (const auto& [i, j] : pairs) {
            sup = std::max(sup, std::abs(z[slot_moving[i]] - z[slot_limit[j]]));
          }
          return std::vector<double>{sup};
        });
    out.sups = column(rows, 0);
    out.median = stats::median(out.sups);
    report.levels.push_back(std::move(out));
  }
  report.non_increasing = true;
  for (std::size_t k = 1; k < report.levels.size(); ++k) {
    report.non_increasing =
        report.non_increasing && report.levels[k].median <= report.levels[k - 1].median;
  }
  const double first = report.levels.front().median;
  report.ratio = first > 0.0 ? report.levels.back().median / first : 0.0;
  return report;
}

nlohmann::json StatementAReport::to_json() const {
  nlohmann::json j;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : levels) {
    arr.push_back({{"n", l.n},
                   {"eps", l.eps},
                   {"gamma", l.gamma},
                   {"pairs", l.pairs},
                   {"median", l.median},
                   {"sups", l.sups}});
  }
  j["levels"] = arr;
  j["non_increasing"] = non_increasing;
  j["ratio_last_first"] = ratio;
  return j;
}

// -------------------------------------------------------------- statement (b)

StatementBReport statement_b_test(const ReplicationConfig& cfg, const StatementBTolerances& tol) {
  if (cfg.regions.empty() || cfg.regions.size() > 64) {
    throw std::invalid_argument("statement (b) needs between 1 and 64 regions");
  }
  if (cfg.reps < 500) throw std::invalid_argument("statement (b) needs at least 500 replications");
  StatementBReport out;
  out.replications = replicate(cfg);
  const Eigen::MatrixXd target = q_covariance(cfg.regions, cfg.dens, cfg.body);
  const std::size_t m = cfg.regions.size();
  std::vector<std::vector<double>> cols;
  for (std::size_t k = 0; k < m; ++k) cols.push_back(column(out.replications.rows, k + 1));

  std::size_t ks_fail = 0;
  for (std::size_t k = 0; k < m; ++k) {
    RegionCheck r;
    r.name = out.replications.columns[k + 1];
    r.q = target(k, k);
    r.mean = stats::mean(cols[k]);
    r.variance = stats::variance(cols[k]);
    if (r.q > 0.0) {
      r.ks = stats::ks_normal(cols[k], 0.0, std::sqrt(r.q));
    } else {
      // W(B) = 0 almost surely; v_n(B) should be degenerate too.
      r.ks = r.variance == 0.0 ? 0.0 : 1.0;
    }
    r.ks_pass = r.ks <= tol.ks;
    r.mean_pass = std::abs(r.mean) <= tol.mean;
    r.variance_pass = std::abs(r.variance - r.q) <= tol.variance_rel * r.q;
    ks_fail += r.ks_pass ? 0 : 1;
    out.regions.push_back(r);
  }
  out.ks_fail_fraction = static_cast<double>(ks_fail) / static_cast<double>(m);
  bool cov_ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      CovarianceCheck c{i, j, stats::covariance(cols[i], cols[j]), target(i, j), false};
      c.pass = std::abs(c.empirical - c.target) <= tol.covariance;
      cov_ok = cov_ok && c.pass;
      out.covariances.push_back(c);
    }
  }
  out.pass = out.ks_fail_fraction <= tol.max_fail_fraction && cov_ok;
  return out;
}

nlohmann::json StatementBReport::to_json() const {
  nlohmann::json j;
  nlohmann::json regs = nlohmann::json::array();
  for (const auto& r : regions) {
    regs.push_back({{"name", r.name},
                    {"q", r.q},
                    {"mean", r.mean},
                    {"variance", r.variance},
                    {"ks", r.ks},
                    {"ks_pass", r.ks_pass},
                    {"mean_pass", r.mean_pass},
                    {"variance_pass", r.variance_pass}});
  }
  nlohmann::json covs = nlohmann::json::array();
  for (const auto& c : covariances) {
    covs.push_back({{"i", c.i},
                    {"j", c.j},
                    {"empirical", c.empirical},
                    {"target", c.target},
                    {"pass", c.pass}});
  }
  j["regions"] = regs;
  j["covariances"] = covs;
  j["ks_fail_fraction"] = ks_fail_fraction;
  j["pass"] = pass;
  j["replications"] = replications.to_json();
  return j;
}

// ------------------------------------------------------------ sup functional

SupFunctionalReport sup_functional_test(const SupFunctionalConfig& cfg) {
  if (cfg.regions.empty()) throw std::invalid_argument("sup functional needs regions");
  if (cfg.reps < 1 || cfg.draws < 1) throw std::invalid_argument("reps and draws must be >= 1");
  const CollarSampler sampler(cfg.body, cfg.dens, cfg.eps);
  const double a = sampler.mass();
  const double n = static_cast<double>(cfg.n);
  std::vector<double> prob;
  for (const auto& r : cfg.regions) {
    prob.push_back(preimage_probability(r, cfg.dens, cfg.body, cfg.eps));
  }
  std::vector<double> prob_fine;
  for (const auto& r : cfg.fine_regions) {
    prob_fine.push_back(preimage_probability(r, cfg.dens, cfg.body, cfg.eps));
  }
  auto sup_over = [&](const LocalSample& s, const std::vector<CylinderRegion>& regions,
                      const std::vector<double>& p) {
    double sup = 0.0;
    for (std::size_t k = 0; k < regions.size(); ++k) {
      const double z = z_stat(static_cast<double>(psi_count(s, regions[k])), n, p[k], a);
      sup = std::max(sup, std::abs(z));
    }
    return sup;
  };
  SupFunctionalReport out;
  const auto rows = run_replications(cfg.reps, cfg.master_seed, cfg.jobs,
                                     [&](std::size_t, std::uint64_t seed) {
                                       const auto s = sample_two_stage(sampler, cfg.n, seed);
                                       std::vector<double> row{sup_over(s, cfg.regions, prob)};
                                       if (!cfg.fine_regions.empty()) {
                                         row.push_back(sup_over(s, cfg.fine_regions, prob_fine));
                                       }
                                       return row;
                                     });
  out.sup_vn = column(rows, 0);
  if (!cfg.fine_regions.empty()) {
    out.sup_vn_fine = column(rows, 1);
    out.drift = stats::median(out.sup_vn_fine) - stats::median(out.sup_vn);
    out.drift_ks = stats::ks_two_sample(out.sup_vn, out.sup_vn_fine);
  }
  const BrownianField field(cfg.regions, cfg.dens, cfg.body);
  out.sup_w = column(run_replications(cfg.draws, mix64(cfg.master_seed ^ kFieldStream), cfg.jobs,
                                      [&](std::size_t, std::uint64_t seed) {
                                        CounterRng rng(seed);
                                        return std::vector<double>{
                                            field.sample(rng).cwiseAbs().maxCoeff()};
                                      }),
                     0);
  out.ks = stats::ks_two_sample(out.sup_vn, out.sup_w);
  const double nn = static_cast<double>(cfg.reps);
  const double mm = static_cast<double>(cfg.draws);
  out.p_value = stats::kolmogorov_pvalue(out.ks, nn * mm / (nn + mm));
  out.pass = out.ks <= cfg.tolerance;
  return out;
}

nlohmann::json SupFunctionalReport::to_json() const {
  nlohmann::json j{{"ks", ks},
          {"p_value", p_value},
          {"pass", pass},
          {"median_sup_vn", stats::median(sup_vn)},
          {"median_sup_w", stats::median(sup_w)},
          {"sup_vn", sup_vn},
          {"sup_w", sup_w}};
  if (!sup_vn_fine.empty()) {
    j["refinement"] = {{"median_sup_vn_fine", stats::median(sup_vn_fine)},
                       {"drift", drift},
                       {"drift_ks", drift_ks},
                       {"sup_vn_fine", sup_vn_fine}};
  }
  return j;
}

std::vector<CylinderRegion> sband_lattice(std::size_t s_cells, std::size_t theta_cells) {
  if (s_cells < 1 || theta_cells < 1) throw std::invalid_argument("lattice needs >= 1 cell");
  std::vector<CylinderRegion> out;
  const double ds = 2.0 / static_cast<double>(s_cells);
  const double dt = 2.0 * std::numbers::pi / static_cast<double>(theta_cells);
  for (std::size_t i = 0; i < s_cells; ++i) {
    for (std::size_t j = i + 1; j <= s_cells; ++j) {
      const IntervalSet s(-1.0 + ds * static_cast<double>(i), -1.0 + ds * static_cast<double>(j));
      for (std::size_t k = 0; k < theta_cells; ++k) {
        for (std::size_t l = k + 1; l <= theta_cells; ++l) {
          out.push_back(CylinderRegion::sband(
              s, IntervalSet(dt * static_cast<double>(k), dt * static_cast<double>(l))));
        }
      }
    }
  }
  return out;
}

// ----------------------------------------------------------------- change set

std::pair<std::size_t, std::size_t> changeset_counts(const std::vector<Point2>& points,
                                                     const AmbientSet& k,
                                                     const AmbientSet& k_eps) {
  std::size_t added = 0;
  std::size_t removed = 0;
  for (const auto& z : points) {
    const bool in_k = k(z);
    const bool in_eps = k_eps(z);
    added += (in_eps && !in_k) ? 1 : 0;
    removed += (in_k && !in_eps) ? 1 : 0;
  }
  return {added, removed};
}

ChangeSetModel ChangeSetModel::normal_shift(AmbientSet k,
                                            std::function<AmbientSet(double)> deviation,
                                            double mu1, double mu2, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  ChangeSetModel m;
  m.k = std::move(k);
  m.deviation = std::move(deviation);
  m.xi = [=](double y) {
    return ((y - mu1) * (y - mu1) - (y - mu2) * (y - mu2)) / (2.0 * sigma * sigma);
  };
  m.draw_p1 = [=](CounterRng& rng) { return std::normal_distribution<double>(mu1, sigma)(rng); };
  m.draw_p2 = [=](CounterRng& rng) { return std::normal_distribution<double>(mu2, sigma)(rng); };
  return m;
}

MarkedSample sample_marked(const ChangeSetModel& model, const ConvexBody& body,
                           const BoundaryDensity& dens, const AmbientSet& p2_region,
                           std::size_t n, std::uint64_t seed) {
  MarkedSample out;
  out.points = sample_ambient(body, dens, n, seed);
  CounterRng rng = CounterRng(seed).split(1);
  out.marks.reserve(n);
  for (const auto& z : out.points) {
    out.marks.push_back(p2_region(z) ? model.draw_p2(rng) : model.draw_p1(rng));
  }
  return out;
}

double changeset_loglik(const MarkedSample& sample, const ChangeSetModel& model, double eps) {
  if (sample.marks.size() != sample.points.size()) {
    throw std::invalid_argument("every point needs a mark");
  }
  const AmbientSet k_eps = model.deviation(eps);
  double sum = 0.0;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const bool in_k = model.k(sample.points[i]);
    const bool in_eps = k_eps(sample.points[i]);
    if (in_eps && !in_k) sum += model.xi(sample.marks[i]);
    if (in_k && !in_eps) sum -= model.xi(sample.marks[i]);
  }
  return sum;
}

// ------------------------------------------------------------ disc estimators

double disc_intersection_area(const Point2& c1, double r1, const Point2& c2, double r2) {
  const double d = distance(c1, c2);
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return kPi * r * r;
  }
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2 * d * r2), -1.0, 1.0));
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
}

DiscMassModel population_mass_model(const ConvexBody& body, const BoundaryDensity& dens) {
  if (!body.is_disc() || !dens.is_two_level()) {
    throw std::invalid_argument("population mode needs a disc body and a two-level density");
  }
  const auto k = body.as_disc();
  const auto t = dens.as_two_level();
  return [k, t](const Point2& c) -> MassProfile {
    return [k, t, c](double r) {
      return t.c_out * kPi * r * r +
             (t.c_in - t.c_out) * disc_intersection_area(c, r, k.center, k.radius);
    };
  };
}

DiscMassModel sample_mass_model(std::vector<Point2> points) {
  auto pts = std::make_shared<const std::vector<Point2>>(std::move(points));
  if (pts->empty()) throw std::invalid_argument("empty sample");
  return [pts](const Point2& c) -> MassProfile {
    auto d2 = std::make_shared<std::vector<double>>();
    d2->reserve(pts->size());
    for (const auto& z : *pts) {
      const Point2 v = z - c;
      d2->push_back(v.dot(v));
    }
    std::sort(d2->begin(), d2->end());
    return [d2](double r) {
      const auto k = std::upper_bound(d2->begin(), d2->end(), r * r) - d2->begin();
      return static_cast<double>(k) / static_cast<double>(d2->size());
    };
  };
}

namespace {

struct Axis {
  double lo;
  double step;
  int count;
  double at(int k) const { return lo + k * step; }
};

Axis full_axis(double lo, double hi, double step) {
  return {lo, step, static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1};
}

// +-refine new steps around x, clipped to [lo, hi].
Axis window(double x, double step, int refine, double lo, double hi) {
  const double s = step / refine;
  int k0 = -refine;
  int k1 = refine;
  while (x + k0 * s < lo - 1e-12) ++k0;
  while (x + k1 * s > hi + 1e-12) --k1;
  return {x + k0 * s, s, k1 - k0 + 1};
}

bool fits(const DiscSearchBox& box, double cx, double cy, double r) {
  const double h = box.support_half_width;
  return std::abs(cx) + r <= h + 1e-12 && std::abs(cy) + r <= h + 1e-12;
}

void check_box(const DiscSearchBox& box) {
  if (!(box.step > 0.0) || !(box.c_hi >= box.c_lo) || !(box.r_hi >= box.r_lo) ||
      !(box.r_lo > 0.0) || box.stages < 1 || box.refine < 2) {
    throw std::invalid_argument("invalid disc search box");
  }
}

bool on_boundary(const DiscSearchBox& box, const DiscParams& p, bool check_r_lo) {
  const double tol = 1e-9;
  return std::abs(p.cx - box.c_lo) < tol || std::abs(p.cx - box.c_hi) < tol ||
         std::abs(p.cy - box.c_lo) < tol || std::abs(p.cy - box.c_hi) < tol ||
         std::abs(p.r - box.r_hi) < tol || (check_r_lo && std::abs(p.r - box.r_lo) < tol);
}

}  // namespace

nlohmann::json DiscFit::to_json() const {
  return {{"center", {params.cx, params.cy}},
          {"radius", params.r},
          {"objective", objective},
          {"mass", mass},
          {"ties", ties},
          {"at_box_boundary", at_box_boundary}};
}

DiscFit excess_mass(const DiscMassModel& model, double lambda, const DiscSearchBox& box) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  check_box(box);
  Axis ax = full_axis(box.c_lo, box.c_hi, box.step);
  Axis ay = ax;
  Axis ar = full_axis(box.r_lo, box.r_hi, box.step);
  DiscFit best;
  bool found = false;
  double step = box.step;
  for (int stage = 0; stage < box.stages; ++stage) {
    if (stage > 0) {
      ax = window(best.params.cx, step, box.refine, box.c_lo, box.c_hi);
      ay = window(best.params.cy, step, box.refine, box.c_lo, box.c_hi);
      ar = window(best.params.r, step, box.refine, box.r_lo, box.r_hi);
      step /= box.refine;
    }
    found = false;
    for (int i = 0; i < ax.count; ++i) {
      for (int j = 0; j < ay.count; ++j) {
        const Point2 c{ax.at(i), ay.at(j)};
        MassProfile profile;
        for (int k = 0; k < ar.count; ++k) {
          const double r = ar.at(k);
          if (!fits(box, c.x, c.y, r)) continue;
          if (!profile) profile = model(c);
          const double mass = profile(r);
          const double value = mass - lambda * kPi * r * r;
          if (!found || value > best.objective) {
            best = DiscFit{{c.x, c.y, r}, value, mass, 1, false};
            found = true;
          } else if (value == best.objective) {
            ++best.ties;
          }
        }
      }
    }
    if (!found) throw std::invalid_argument("no disc of the search box fits the support");
  }
  // Round-off leaves exact zeros (lambda = c_in) slightly positive.
  if (!(best.objective > 1e-12 * lambda * kPi * best.params.r * best.params.r)) {
    throw DegenerateSolution("the best disc has objective " + std::to_string(best.objective) +
                             "; the maximizer is the empty set");
  }
  best.at_box_boundary = on_boundary(box, best.params, true);
  return best;
}

DiscFit min_volume_set(const DiscMassModel& model, double alpha, const DiscSearchBox& box) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  check_box(box);
  Axis ax = full_axis(box.c_lo, box.c_hi, box.step);
  Axis ay = ax;
  DiscFit best;
  bool found = false;
  double step = box.step;
  for (int stage = 0; stage < box.stages; ++stage) {
    if (stage > 0) {
      ax = window(best.params.cx, step, box.refine, box.c_lo, box.c_hi);
      ay = window(best.params.cy, step, box.refine, box.c_lo, box.c_hi);
      step /= box.refine;
    }
    found = false;
    for (int i = 0; i < ax.count; ++i) {
      for (int j = 0; j < ay.count; ++j) {
        const Point2 c{ax.at(i), ay.at(j)};
        const double h = box.support_half_width;
        const double r_max = std::min({box.r_hi, h - std::abs(c.x), h - std::abs(c.y)});
        if (!(r_max > 0.0)) continue;
        const MassProfile profile = model(c);
        if (profile(r_max) < alpha) continue;
        double lo = 0.0;
        double hi = r_max;
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
          const double mid = 0.5 * (lo + hi);
          (profile(mid) >= alpha ? hi : lo) = mid;
        }
        if (!found || hi < best.params.r - 1e-12) {
          best = DiscFit{{c.x, c.y, hi}, -kPi * hi * hi, profile(hi), 1, false};
          found = true;
        } else if (hi <= best.params.r + 1e-12) {
          ++best.ties;
        }
      }
    }
    if (!found) {
      throw Infeasible("no disc of the search box reaches mass " + std::to_string(alpha));
    }
  }
  best.at_box_boundary = on_boundary(box, best.params, false);
  return best;
}

}  // namespace lep
