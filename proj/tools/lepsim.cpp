// lepsim: command-line front end for the local empirical process experiments.
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on a
// usage or configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lep/boundary_measure.hpp"
#include "lep/config.hpp"
#include "lep/empirical.hpp"
#include "lep/errors.hpp"
#include "lep/set_classes.hpp"
#include "lep/stats.hpp"
#include "lep/verify.hpp"

using namespace lep;
using json = nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> n;
  std::optional<double> eps;
  std::optional<std::size_t> grid;
  std::size_t jobs{1};
  std::string out;
  std::string quantity;  // measure
  std::string task;      // classes
  std::string statement{"b"};
};

/// Resolved inputs: file values, then flags on top.
struct Context {
  json cfg = json::object();
  ConvexBody body = ConvexBody::unit_disc();
  BoundaryDensity dens = BoundaryDensity::uniform_box(2.0);
  std::uint64_t seed{0};
  std::size_t jobs{1};
  const Options* opt{nullptr};

  std::uint64_t n(std::uint64_t fallback) const {
    return opt->n ? *opt->n : value_or(cfg, "n", fallback);
  }
  double eps(double fallback) const { return opt->eps ? *opt->eps : value_or(cfg, "eps", fallback); }
  std::size_t reps(std::size_t fallback) const {
    return opt->reps ? *opt->reps : value_or(cfg, "reps", fallback);
  }
  std::size_t grid(std::size_t fallback) const {
    return opt->grid ? *opt->grid : value_or(cfg, "grid", fallback);
  }
  std::vector<NamedRegion> regions() const {
    if (!cfg.contains("regions")) throw ConfigError("the config needs 'regions'");
    return parse_regions(cfg["regions"], body);
  }
};

struct Report {
  json data = json::object();
  json summary = json::object();
  std::vector<std::pair<std::string, bool>> checks;
  std::string csv;
};

std::string join_csv(const std::vector<std::vector<double>>& rows,
                     const std::vector<std::string>& header) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
    out << '\n';
  }
  return out.str();
}

std::vector<CylinderRegion> regions_of(const std::vector<NamedRegion>& named) {
  std::vector<CylinderRegion> out;
  for (const auto& r : named) out.push_back(r.region);
  return out;
}

// ---------------------------------------------------------------- commands

Report cmd_geometry(const Context& c) {
  Report r;
  const double eps = c.eps(0.1);
  r.summary["perimeter"] = c.body.perimeter();
  r.summary["area"] = c.body.area();
  r.summary["inradius"] = c.body.inradius();
  r.summary["eps"] = eps;
  r.summary["neighborhood_area"] = neighborhood_area(c.body, eps);
  r.summary["neighborhood_mass"] = neighborhood_mass(c.body, c.dens, eps);
  if (c.cfg.contains("points")) {
    std::vector<std::vector<double>> rows;
    json pts = json::array();
    for (const auto& p : c.cfg["points"]) {
      const Point2 z{p.at(0).get<double>(), p.at(1).get<double>()};
      const auto pr = c.body.project_any(z);
      const bool skeleton = c.body.on_skeleton(z);
      rows.push_back({z.x, z.y, pr.foot.theta, pr.signed_distance, skeleton ? 1.0 : 0.0});
      pts.push_back({{"point", {z.x, z.y}},
                     {"theta", pr.foot.theta},
                     {"signed_distance", pr.signed_distance},
                     {"skeleton", skeleton}});
    }
    r.data["projections"] = pts;
    r.csv = join_csv(rows, {"x", "y", "theta", "signed_distance", "skeleton"});
  }
  return r;
}

Report cmd_measure(const Context& c) {
  Report r;
  const std::string& what = c.opt->quantity;
  const double eps = c.eps(0.1);
  r.summary["eps"] = eps;
  if (what == "tv") {
    const std::size_t g = c.grid(256);
    r.summary["grid"] = g;
    r.summary["tv"] = tv_distance(c.dens, c.body, eps, g, g);
  } else if (what == "area") {
    r.summary["neighborhood_area"] = neighborhood_area(c.body, eps);
  } else if (what == "mass") {
    r.summary["neighborhood_mass"] = neighborhood_mass(c.body, c.dens, eps);
    r.summary["mp_total"] = mp_total(c.dens, c.body);
  } else if (what == "q") {
    const auto regions = c.regions();
    json arr = json::array();
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < regions.size(); ++k) {
      const double q = q_measure(regions[k].region, c.dens, c.body);
      const double qn = qn_measure(regions[k].region, c.dens, c.body, eps);
      const double mp = mp_measure(regions[k].region, c.dens, c.body);
      arr.push_back({{"name", regions[k].name}, {"q", q}, {"qn", qn}, {"mp", mp}});
      r.summary["q_" + regions[k].name] = q;
      r.summary["qn_" + regions[k].name] = qn;
      rows.push_back({static_cast<double>(k), q, qn, mp});
    }
    r.data["regions"] = arr;
    r.csv = join_csv(rows, {"region", "q", "qn", "mp"});
  } else {
    throw ConfigError("measure expects tv, area, mass or q");
  }
  return r;
}

Report cmd_derivative(const Context& c) {
  Report r;
  const json fam = value_or(c.cfg, "family", json::object());
  const auto type = value_or<std::string>(fam, "type", "shifted_disc");
  SetValuedFamily family;
  CylinderRegion derivative = CylinderRegion::upper();
  if (type == "shifted_disc") {
    if (!c.body.is_disc()) throw ConfigError("shifted_disc needs a disc body");
    const double delta = value_or(fam, "delta", 0.5);
    family = shifted_disc_family(c.body, delta);
    derivative = fe_band(FEParams{0, 0, 0, 0, delta}, c.body.as_disc().radius);
  } else if (type == "outer_band") {
    family = outer_band_family(c.body);
  } else {
    throw ConfigError("unknown family type '" + type + "'");
  }
  if (c.cfg.contains("derivative")) derivative = parse_region(c.cfg["derivative"], c.body, 0).region;
  const auto eps_grid =
      value_or<std::vector<double>>(c.cfg, "eps_grid", {0.1, 0.05, 0.025, 0.0125});
  const std::size_t g = c.grid(1024);
  const auto table = measure_derivative_check(family, derivative, c.dens, c.body, eps_grid);
  std::vector<std::vector<double>> rows;
  json arr = json::array();
  bool decreasing = true;
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    const double def = derivative_deficit(family, derivative, c.body, eps_grid[k], g, 2 * g);
    if (k > 0) decreasing = decreasing && def < rows.back()[1];
    rows.push_back({eps_grid[k], def, table[k].ratio, table[k].mp});
    arr.push_back({{"eps", eps_grid[k]}, {"deficit", def}, {"ratio", table[k].ratio}});
  }
  r.data["rows"] = arr;
  r.summary["mp"] = table.front().mp;
  r.summary["deficit_last"] = rows.back()[1];
  r.summary["ratio_last"] = rows.back()[2];
  r.checks.emplace_back("deficit strictly decreasing", decreasing);
  r.csv = join_csv(rows, {"eps", "deficit", "ratio", "mp"});
  return r;
}

Report cmd_classes(const Context& c) {
  Report r;
  if (c.opt->task == "brackets") {
    const auto kind = family_kind_from_string(value_or<std::string>(c.cfg, "family", "interval_bands"));
    const double delta = value_or(c.cfg, "delta", 0.5);
    const double eps = c.eps(0.05);
    const auto set = bracket_cover(kind, delta, c.dens, c.body, eps);
    double max_size = 0.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < set.count(); ++k) {
      max_size = std::max(max_size, set.brackets[k].size);
      rows.push_back({static_cast<double>(k), set.brackets[k].size});
    }
    r.data["brackets"] = set.to_json();
    r.summary["count"] = set.count();
    r.summary["max_size"] = max_size;
    r.summary["delta"] = delta;
    r.checks.emplace_back("bracket sizes <= delta", max_size <= delta);
    r.csv = join_csv(rows, {"bracket", "size"});
  } else if (c.opt->task == "shatter") {
    const auto cls_name = value_or<std::string>(c.cfg, "class", "sband");
    const ShatterClass cls = cls_name == "sband"    ? ShatterClass::SBand
                             : cls_name == "feband" ? ShatterClass::FEBand
                                                    : throw ConfigError("class must be sband or feband");
    std::vector<CylinderPoint> pts{{0.1, -0.8}, {1.0, -0.2}, {2.0, 0.3}, {3.0, 0.9}};
    if (c.cfg.contains("points")) {
      pts.clear();
      for (const auto& p : c.cfg["points"]) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    const auto rep = shatter_check(cls, pts);
    r.data["shatter"] = rep.to_json();
    r.summary["shattered"] = rep.shattered;
    r.summary["realized"] = rep.realized;
    r.summary["labelings"] = rep.labelings;
  } else {
    throw ConfigError("classes expects brackets or shatter");
  }
  return r;
}

Report cmd_clt_b(const Context& c) {
  Report r;
  const auto named = c.regions();
  ReplicationConfig cfg{c.body, c.dens, c.n(100000), c.eps(0.05), regions_of(named), {},
                        c.reps(1000), c.seed, c.jobs, c.cfg};
  for (const auto& nr : named) cfg.region_names.push_back(nr.name);
  StatementBTolerances tol;
  const json t = value_or(c.cfg, "tolerances", json::object());
  tol.ks = value_or(t, "ks", tol.ks);
  tol.mean = value_or(t, "mean", tol.mean);
  tol.variance_rel = value_or(t, "variance_rel", tol.variance_rel);
  tol.covariance = value_or(t, "covariance", tol.covariance);
  tol.max_fail_fraction = value_or(t, "max_fail_fraction", tol.max_fail_fraction);
  const auto rep = statement_b_test(cfg, tol);
  r.data = rep.to_json();
  r.summary["ks_fail_fraction"] = rep.ks_fail_fraction;
  double worst_cov = 0.0;
  double worst_ks = 0.0;
  for (const auto& reg : rep.regions) worst_ks = std::max(worst_ks, reg.ks);
  for (const auto& cv : rep.covariances) worst_cov = std::max(worst_cov, std::abs(cv.empirical - cv.target));
  r.summary["max_ks"] = worst_ks;
  r.summary["max_covariance_error"] = worst_cov;
  r.checks.emplace_back("statement (b)", rep.pass);
  r.csv = rep.replications.to_csv();
  return r;
}

Report cmd_clt_a(const Context& c) {
  Report r;
  if (!c.body.is_disc()) throw ConfigError("statement (a) runs on ellipse classes of a disc");
  Schedule schedule{{1000, 10000, 100000}};
  if (c.cfg.contains("schedule")) schedule = parse_schedule(c.cfg["schedule"]);
  const std::size_t per_axis = c.grid(7);
  const double span = value_or(c.cfg, "offset_span", 0.3);
  std::vector<double> values;
  for (std::size_t k = 0; k < per_axis; ++k) {
    values.push_back(per_axis == 1 ? 0.0 : -span + 2 * span * k / (per_axis - 1));
  }
  const auto offsets = ellipse_offset_grid(values);
  StatementAConfig cfg{c.body, c.dens, schedule, ellipse_moving_grid(c.body, offsets),
                       ellipse_limit_grid(c.body, offsets)};
  if (c.cfg.contains("gamma")) cfg.gamma = c.cfg["gamma"].get<double>();
  cfg.reps = c.reps(200);
  cfg.master_seed = c.seed;
  cfg.jobs = c.jobs;
  const auto rep = statement_a_statistic(cfg);
  r.data = rep.to_json();
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 0; l < rep.levels.size(); ++l) {
    const auto& lv = rep.levels[l];
    r.summary["median_n" + std::to_string(lv.n)] = lv.median;
    for (std::size_t k = 0; k < lv.sups.size(); ++k) {
      rows.push_back({static_cast<double>(lv.n), static_cast<double>(k), lv.sups[k]});
    }
  }
  r.summary["ratio_last_first"] = rep.ratio;
  r.checks.emplace_back("medians non-increasing", rep.non_increasing);
  r.checks.emplace_back("last median at most half the first", rep.ratio <= 0.5);
  r.csv = join_csv(rows, {"n", "rep", "sup"});
  return r;
}

Report cmd_supfun(const Context& c) {
  Report r;
  SupFunctionalConfig cfg{c.body, c.dens, c.n(100000), c.eps(0.05), regions_of(c.regions())};
  cfg.reps = c.reps(1000);
  cfg.draws = value_or(c.cfg, "draws", cfg.reps);
  cfg.master_seed = c.seed;
  cfg.jobs = c.jobs;
  cfg.tolerance = value_or(c.cfg, "tolerance", cfg.tolerance);
  if (c.cfg.contains("fine_regions")) {
    cfg.fine_regions = regions_of(parse_regions(c.cfg["fine_regions"], c.body));
  }
  const auto rep = sup_functional_test(cfg);
  r.data = rep.to_json();
  r.summary["ks"] = rep.ks;
  r.summary["p_value"] = rep.p_value;
  if (!cfg.fine_regions.empty()) {
    r.summary["drift"] = rep.drift;
    r.summary["drift_ks"] = rep.drift_ks;
  }
  r.checks.emplace_back("two-sample KS within tolerance", rep.pass);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < std::max(rep.sup_vn.size(), rep.sup_w.size()); ++k) {
    rows.push_back({static_cast<double>(k), k < rep.sup_vn.size() ? rep.sup_vn[k] : NAN,
                    k < rep.sup_w.size() ? rep.sup_w[k] : NAN});
    if (!rep.sup_vn_fine.empty()) {
      rows.back().push_back(k < rep.sup_vn_fine.size() ? rep.sup_vn_fine[k] : NAN);
    }
  }
  r.csv = rep.sup_vn_fine.empty() ? join_csv(rows, {"rep", "sup_vn", "sup_w"})
                                  : join_csv(rows, {"rep", "sup_vn", "sup_w", "sup_vn_fine"});
  return r;
}

Report cmd_changeset(const Context& c) {
  Report r;
  if (!c.body.is_disc()) throw ConfigError("changeset uses shifted discs");
  const auto disc = c.body.as_disc();
  const double delta = value_or(c.cfg, "delta", 1.0);
  const AmbientSet k = [disc](const Point2& z) { return distance(z, disc.center) <= disc.radius; };
  auto deviation = [disc, delta](double eps) -> AmbientSet {
    const Point2 moved = disc.center + Point2{delta * eps, 0.0};
    return [disc, moved](const Point2& z) { return distance(z, moved) <= disc.radius; };
  };
  const auto model = ChangeSetModel::normal_shift(k, deviation, value_or(c.cfg, "mu1", 0.0),
                                                  value_or(c.cfg, "mu2", 1.0),
                                                  value_or(c.cfg, "sigma", 1.0));
  const double eps = c.eps(0.05);
  const std::uint64_t n = c.n(10000);
  const bool alternative = value_or<std::string>(c.cfg, "truth", "null") == "alternative";
  const AmbientSet p2_region = alternative ? deviation(eps) : k;
  const auto rows = run_replications(c.reps(100), c.seed, c.jobs, [&](std::size_t, std::uint64_t seed) {
    const auto s = sample_marked(model, c.body, c.dens, p2_region, n, seed);
    const auto [added, removed] = changeset_counts(s.points, k, deviation(eps));
    return std::vector<double>{static_cast<double>(added), static_cast<double>(removed),
                               changeset_loglik(s, model, eps)};
  });
  std::vector<double> ll;
  for (const auto& row : rows) ll.push_back(row[2]);
  r.summary["mean_loglik"] = stats::mean(ll);
  if (ll.size() > 1) r.summary["sd_loglik"] = std::sqrt(stats::variance(ll));
  r.data["truth"] = alternative ? "alternative" : "null";
  r.csv = join_csv(rows, {"added", "removed", "loglik"});
  return r;
}

DiscMassModel mass_model(const Context& c, std::uint64_t seed) {
  const auto mode = value_or<std::string>(c.cfg, "mode", "population");
  if (mode == "population") return population_mass_model(c.body, c.dens);
  if (mode == "sample") return sample_mass_model(sample_ambient(c.body, c.dens, c.n(100000), seed));
  throw ConfigError("mode must be population or sample");
}

Report disc_fits(const Context& c, const std::function<DiscFit(const DiscMassModel&)>& fit) {
  Report r;
  const bool sample = value_or<std::string>(c.cfg, "mode", "population") == "sample";
  const std::size_t reps = sample ? c.reps(1) : 1;
  std::vector<std::vector<double>> rows;
  json fits = json::array();
  for (std::size_t k = 0; k < reps; ++k) {
    const auto f = fit(mass_model(c, derive_seed(c.seed, k)));
    rows.push_back({static_cast<double>(k), f.params.cx, f.params.cy, f.params.r, f.objective, f.mass});
    fits.push_back(f.to_json());
  }
  r.data["fits"] = fits;
  std::vector<double> cx, cy, rr;
  for (const auto& row : rows) {
    cx.push_back(row[1]);
    cy.push_back(row[2]);
    rr.push_back(row[3]);
  }
  r.summary["median_cx"] = stats::median(cx);
  r.summary["median_cy"] = stats::median(cy);
  r.summary["median_r"] = stats::median(rr);
  r.csv = join_csv(rows, {"rep", "cx", "cy", "r", "objective", "mass"});
  return r;
}

Report cmd_excess_mass(const Context& c) {
  double lambda = 0.0;
  if (c.cfg.contains("lambda")) {
    lambda = c.cfg["lambda"].get<double>();
  } else if (c.dens.is_two_level()) {
    lambda = 0.5 * (c.dens.as_two_level().c_in + c.dens.as_two_level().c_out);
  } else {
    throw ConfigError("excess-mass needs 'lambda'");
  }
  const auto box = parse_search_box(value_or(c.cfg, "search", json::object()));
  Report r = disc_fits(c, [&](const DiscMassModel& m) { return excess_mass(m, lambda, box); });
  r.summary["lambda"] = lambda;
  return r;
}

Report cmd_min_volume(const Context& c) {
  if (!c.cfg.contains("alpha")) throw ConfigError("min-volume needs 'alpha'");
  const double alpha = c.cfg["alpha"].get<double>();
  const auto box = parse_search_box(value_or(c.cfg, "search", json::object()));
  Report r = disc_fits(c, [&](const DiscMassModel& m) { return min_volume_set(m, alpha, box); });
  r.summary["alpha"] = alpha;
  return r;
}

// ------------------------------------------------------------------ output

int emit(const std::string& command, const Context& c, Report r) {
  json out;
  out["command"] = command;
  out["config"] = c.cfg;
  out["seed"] = c.seed;
  json overrides = json::object();
  if (c.opt->reps) overrides["reps"] = *c.opt->reps;
  if (c.opt->n) overrides["n"] = *c.opt->n;
  if (c.opt->eps) overrides["eps"] = *c.opt->eps;
  if (c.opt->grid) overrides["grid"] = *c.opt->grid;
  out["overrides"] = overrides;
  out["summary"] = r.summary;
  json checks = json::object();
  for (const auto& [name, ok] : r.checks) checks[name] = ok;
  out["checks"] = checks;
  out["report"] = r.data;

  const std::string prefix = c.opt->out.empty() ? command : c.opt->out;
  {
    std::ofstream f(prefix + ".json");
    if (!f) throw ConfigError("cannot write " + prefix + ".json");
    f << out.dump(2) << '\n';
  }
  if (!r.csv.empty()) {
    std::ofstream f(prefix + ".csv");
    if (!f) throw ConfigError("cannot write " + prefix + ".csv");
    f << r.csv;
  }
  for (const auto& [key, value] : r.summary.items()) std::cout << key << " = " << value.dump() << '\n';
  bool all = true;
  for (const auto& [name, ok] : r.checks) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
    all = all && ok;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local empirical processes near the boundary of a convex body"};
  app.require_subcommand(1);
  Options opt;
  auto common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "master seed (default 0)");
    sub->add_option("--reps", opt.reps, "replications");
    sub->add_option("--n", opt.n, "sample size");
    sub->add_option("--eps", opt.eps, "collar width");
    sub->add_option("--grid", opt.grid, "grid resolution");
    sub->add_option("--jobs", opt.jobs, "worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "output prefix for .json and .csv (default: command name)");
    return sub;
  };
  common(app.add_subcommand("geometry", "body summary and projections"));
  common(app.add_subcommand("measure", "tv | area | mass | q"))
      ->add_option("quantity", opt.quantity)
      ->required()
      ->check(CLI::IsMember({"tv", "area", "mass", "q"}));
  common(app.add_subcommand("derivative", "differentiation of sets in measure"));
  common(app.add_subcommand("classes", "brackets | shatter"))
      ->add_option("task", opt.task)
      ->required()
      ->check(CLI::IsMember({"brackets", "shatter"}));
  common(app.add_subcommand("clt", "statement (a) or (b) of the limit theorem"))
      ->add_option("--statement", opt.statement, "a or b")
      ->check(CLI::IsMember({"a", "b"}));
  common(app.add_subcommand("supfun", "sup functional against the Gaussian limit"));
  common(app.add_subcommand("changeset", "change-set counts and likelihood"));
  common(app.add_subcommand("excess-mass", "excess-mass disc estimator"));
  common(app.add_subcommand("min-volume", "minimum-volume disc estimator"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Context c;
    c.opt = &opt;
    if (!opt.config.empty()) c.cfg = load_config(opt.config);
    if (!c.cfg.is_object()) throw ConfigError("the config must be a JSON object");
    c.body = parse_body(value_or(c.cfg, "body", json()));
    c.dens = parse_density(value_or(c.cfg, "density", json()), c.body);
    c.seed = opt.seed ? *opt.seed : value_or<std::uint64_t>(c.cfg, "seed", 0);
    c.jobs = opt.jobs;

    Report r;
    if (command == "geometry") r = cmd_geometry(c);
    else if (command == "measure") r = cmd_measure(c);
    else if (command == "derivative") r = cmd_derivative(c);
    else if (command == "classes") r = cmd_classes(c);
    else if (command == "clt") r = opt.statement == "a" ? cmd_clt_a(c) : cmd_clt_b(c);
    else if (command == "supfun") r = cmd_supfun(c);
    else if (command == "changeset") r = cmd_changeset(c);
    else if (command == "excess-mass") r = cmd_excess_mass(c);
    else r = cmd_min_volume(c);
    return emit(command, c, std::move(r));
  } catch (const ConfigError& e) {
    std::cerr << "lepsim: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lepsim: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "lepsim: config: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "lepsim: " << e.what() << '\n';
    return 2;
  }
}
