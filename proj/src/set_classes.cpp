#include "lep/set_classes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <stdexcept>

#include "lep/boundary_measure.hpp"
#include "lep/errors.hpp"

namespace lep {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCollarProbe = 4096;
constexpr int kProfileSamples = 4096;

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Checks C xor K inside the eps-collar for convex polygons C, K:
/// C inside K + eps and K - eps inside C.
void check_polygon_in_collar(const ConvexBody& body, double eps, const ConvexBody& c) {
  for (const Point2& v : c.as_polygon().vertices) {
    if (body.project_any(v).signed_distance > eps * (1.0 + 1e-12)) {
      throw NotInCollar("vertex leaves the outer eps-parallel body");
    }
  }
  for (const Point2& v : inner_parallel_polygon(body, eps)) {
    if (!c.contains(v) && c.boundary_distance(v) > 1e-12) {
      throw NotInCollar("inner eps-parallel body is not contained");
    }
  }
}

IntervalSet interval_pair(const IntervalParams& p) {
  IntervalSet s;
  s.add(p.a, p.b);
  s.add(p.c, p.d);
  return s;
}

bool band_contains(double f, double s) { return (s > 0.0 && s <= f) || (s > f && s <= 0.0); }

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::EllipseSymmDiff:
      return "ellipse";
    case FamilyKind::IntervalBands:
      return "interval_bands";
    case FamilyKind::QuadrangleSymmDiff:
      return "quadrangle";
    case FamilyKind::ConvexSymmDiff:
      return "convex";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "ellipse") return FamilyKind::EllipseSymmDiff;
  if (name == "interval_bands") return FamilyKind::IntervalBands;
  if (name == "quadrangle") return FamilyKind::QuadrangleSymmDiff;
  if (name == "convex") return FamilyKind::ConvexSymmDiff;
  throw std::invalid_argument("unknown family kind '" + name + "'");
}

// ------------------------------------------------------------------ Ellipse

bool Ellipse::contains(const Point2& z) const {
  const Vec2 q = rotate(z - center, -alpha);
  return (q.x * q.x) / (semi_a * semi_a) + (q.y * q.y) / (semi_b * semi_b) <= 1.0;
}

double Ellipse::radial(const Point2& from, const Vec2& dir) const {
  const Vec2 q = rotate(from - center, -alpha);
  const Vec2 v = rotate(dir, -alpha);
  const double ia = 1.0 / (semi_a * semi_a);
  const double ib = 1.0 / (semi_b * semi_b);
  const double qa = v.x * v.x * ia + v.y * v.y * ib;
  const double qb = 2.0 * (q.x * v.x * ia + q.y * v.y * ib);
  const double qc = q.x * q.x * ia + q.y * q.y * ib - 1.0;
  const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
  // Stable root of the positive branch.
  if (qb >= 0.0) return (-2.0 * qc) / (qb + std::sqrt(disc));
  return (-qb + std::sqrt(disc)) / (2.0 * qa);
}

Ellipse ellipse_from_offsets(const ConvexBody& disc, double eps, const EllipseOffsets& o) {
  const auto& d = disc.as_disc();
  return Ellipse{d.center + eps * Point2{o.x0, o.y0}, d.radius + eps * o.u1,
                 d.radius + eps * o.u2, o.alpha};
}

// ------------------------------------------------------------ FamilyMember

FamilyMember FamilyMember::ellipse(const ConvexBody& body, double eps, const Ellipse& e) {
  if (!body.is_disc()) throw std::invalid_argument("ellipse family needs a disc body");
  require_eps(body, eps);
  if (!(e.semi_a > 0.0) || !(e.semi_b > 0.0)) {
    throw std::invalid_argument("ellipse semi-axes must be positive");
  }
  const auto& d = body.as_disc();
  if (!e.contains(d.center)) throw NotInCollar("ellipse does not contain the disc center");
  for (int k = 0; k < kCollarProbe; ++k) {
    const double phi = 2.0 * kPi * k / kCollarProbe;
    const double rho = e.radial(d.center, {std::cos(phi), std::sin(phi)});
    if (std::abs(rho - d.radius) > eps * (1.0 + 1e-12)) {
      throw NotInCollar("ellipse boundary leaves the eps-collar");
    }
  }
  return FamilyMember(FamilyKind::EllipseSymmDiff, body, eps, e);
}

FamilyMember FamilyMember::interval_bands(const ConvexBody& body, double eps, IntervalParams p) {
  require_eps(body, eps);
  if (!(-1.0 <= p.a && p.a <= p.b && p.b <= p.c && p.c <= p.d && p.d <= 1.0)) {
    throw std::invalid_argument("interval bands need -1 <= a <= b <= c <= d <= 1");
  }
  return FamilyMember(FamilyKind::IntervalBands, body, eps, p);
}

FamilyMember FamilyMember::quadrangle(const ConvexBody& body, double eps,
                                      const std::array<Point2, 4>& q) {
  if (body.is_disc()) throw std::invalid_argument("quadrangle family needs a polygon body");
  require_eps(body, eps);
  ConvexBody c = ConvexBody::polygon({q.begin(), q.end()});
  check_polygon_in_collar(body, eps, c);
  return FamilyMember(FamilyKind::QuadrangleSymmDiff, body, eps, std::move(c));
}

FamilyMember FamilyMember::convex(const ConvexBody& body, double eps, const ConvexBody& c) {
  if (body.is_disc() || c.is_disc()) {
    throw std::invalid_argument("convex family needs a polygon body and a polygon member");
  }
  require_eps(body, eps);
  check_polygon_in_collar(body, eps, c);
  return FamilyMember(FamilyKind::ConvexSymmDiff, body, eps, c);
}

bool FamilyMember::contains(const Point2& z) const {
  if (const auto* e = std::get_if<Ellipse>(&shape_)) {
    return e->contains(z) != body_.contains(z);
  }
  if (const auto* p = std::get_if<IntervalParams>(&shape_)) {
    const double s = body_.project_any(z).signed_distance / eps_;
    return (s >= p->a && s <= p->b) || (s >= p->c && s <= p->d);
  }
  return std::get<ConvexBody>(shape_).contains(z) != body_.contains(z);
}

AmbientSet FamilyMember::membership() const {
  return [m = *this](const Point2& z) { return m.contains(z); };
}

nlohmann::json FamilyMember::params_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind_);
  j["eps"] = eps_;
  if (const auto* e = std::get_if<Ellipse>(&shape_)) {
    j["center"] = {e->center.x, e->center.y};
    j["semi_axes"] = {e->semi_a, e->semi_b};
    j["alpha"] = e->alpha;
  } else if (const auto* p = std::get_if<IntervalParams>(&shape_)) {
    j["intervals"] = {{p->a, p->b}, {p->c, p->d}};
  } else {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& q : std::get<ConvexBody>(shape_).as_polygon().vertices) v.push_back({q.x, q.y});
    j["vertices"] = v;
  }
  return j;
}

CylinderRegion tau_image(const FamilyMember& member) {
  const ConvexBody& body = member.body();
  const double eps = member.eps();
  if (const auto* p = member.interval_params()) return CylinderRegion::sband(interval_pair(*p));
  if (const auto* e = member.ellipse_params()) {
    const auto d = body.as_disc();
    const Ellipse ell = *e;
    return CylinderRegion::band_clamped([d, ell, eps](double theta) {
      const double phi = theta / d.radius;
      return (ell.radial(d.center, {std::cos(phi), std::sin(phi)}) - d.radius) / eps;
    });
  }
  return CylinderRegion::tau_image(body, eps, member.membership());
}

// ---------------------------------------------------------- limit classes

double FEParams::operator()(double phi) const {
  const double t = phi - alpha;
  const double s = std::sin(t);
  return a + b * s * s + c * s + d * std::cos(t);
}

CylinderRegion fe_band(const FEParams& p, double radius) {
  return CylinderRegion::band([p, radius](double theta) { return p(theta / radius); },
                              2.0 * kPi * radius);
}

FEParams fe_limit(const EllipseOffsets& o) {
  const double ca = std::cos(o.alpha);
  const double sa = std::sin(o.alpha);
  return FEParams{o.alpha, o.u1, o.u2 - o.u1, -o.x0 * sa + o.y0 * ca, o.x0 * ca + o.y0 * sa};
}

CylinderRegion fq_band(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  for (int m = 0; m < 4; ++m) {
    if (std::abs(a[m]) > 2.0) throw std::invalid_argument("F_Q slopes must lie in [-2, 2]");
    if (std::abs(b[m]) > 1.0 || std::abs(a[m] + b[m]) > 1.0) {
      throw std::invalid_argument("F_Q function leaves [-1, 1]");
    }
  }
  return CylinderRegion::band(
      [a, b](double theta) {
        const int m = std::clamp(static_cast<int>(std::floor(theta)), 0, 3);
        return a[m] * (theta - m) + b[m];
      },
      4.0);
}

CylinderRegion fc_band(const std::array<BoundaryFunction, 4>& sides) {
  constexpr int kProbe = 256;
  for (const auto& f : sides) {
    if (!f) throw std::invalid_argument("F_C needs four side functions");
    std::vector<double> v(kProbe);
    for (int k = 0; k < kProbe; ++k) v[k] = f((k + 0.5) / kProbe);
    for (int k = 1; k + 1 < kProbe; ++k) {
      if (v[k - 1] - 2.0 * v[k] + v[k + 1] > 1e-12) {
        throw std::invalid_argument("F_C side function is not concave");
      }
    }
  }
  return CylinderRegion::band(
      [sides](double theta) {
        const int m = std::clamp(static_cast<int>(std::floor(theta)), 0, 3);
        return sides[m](theta - m);
      },
      4.0);
}

// ---------------------------------------------------------------- metrics

double d_metric(const CylinderRegion& b1, const CylinderRegion& b2, const BoundaryDensity& dens,
                const ConvexBody& body) {
  return std::sqrt(q_measure(b1 ^ b2, dens, body));
}

double dn_metric(const CylinderRegion& tau1, const CylinderRegion& tau2,
                 const BoundaryDensity& dens, const ConvexBody& body, double eps) {
  return std::sqrt(qn_measure(tau1 ^ tau2, dens, body, eps));
}

double dn_metric(const FamilyMember& a1, const FamilyMember& a2, const BoundaryDensity& dens) {
  if (std::abs(a1.eps() - a2.eps()) > 1e-15) {
    throw std::invalid_argument("dn_metric needs members at the same eps");
  }
  return dn_metric(tau_image(a1), tau_image(a2), dens, a1.body(), a1.eps());
}

std::vector<std::vector<double>> d_matrix(const std::vector<CylinderRegion>& rows,
                                          const std::vector<CylinderRegion>& cols,
                                          const BoundaryDensity& dens, const ConvexBody& body) {
  std::vector<std::vector<double>> out(rows.size(), std::vector<double>(cols.size(), 0.0));
  auto all_of_kind = [](const std::vector<CylinderRegion>& v, auto pred) {
    return std::all_of(v.begin(), v.end(), pred);
  };
  const bool bands = all_of_kind(rows, [](const auto& r) { return r.band_function(); }) &&
                     all_of_kind(cols, [](const auto& r) { return r.band_function(); });
  const bool sbands = all_of_kind(rows, [](const auto& r) { return r.sband_intervals(); }) &&
                      all_of_kind(cols, [](const auto& r) { return r.sband_intervals(); });
  const double total = mp_total(dens, body);

  if (bands) {
    // Q(B xor B') = integral of p_+ |f_+ - g_+| + p_- |f_- - g_-| over M_p(Gamma).
    const double h = body.perimeter() / kProfileSamples;
    std::vector<double> wp(kProfileSamples);
    std::vector<double> wm(kProfileSamples);
    for (int k = 0; k < kProfileSamples; ++k) {
      const double theta = (k + 0.5) * h;
      wp[k] = dens.p_plus(theta) * h / total;
      wm[k] = dens.p_minus(theta) * h / total;
    }
    auto profile = [&](const CylinderRegion& r) {
      const auto& f = *r.band_function();
      std::vector<double> v(kProfileSamples);
      for (int k = 0; k < kProfileSamples; ++k) v[k] = std::clamp(f((k + 0.5) * h), -1.0, 1.0);
      return v;
    };
    std::vector<std::vector<double>> pc;
    pc.reserve(cols.size());
    for (const auto& c : cols) pc.push_back(profile(c));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto pr = profile(rows[i]);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto& pj = pc[j];
        double acc = 0.0;
        for (int k = 0; k < kProfileSamples; ++k) {
          const double f = pr[k];
          const double g = pj[k];
          acc += wp[k] * std::abs(std::max(f, 0.0) - std::max(g, 0.0)) +
                 wm[k] * std::abs(std::min(f, 0.0) - std::min(g, 0.0));
        }
        out[i][j] = std::sqrt(std::max(acc, 0.0));
      }
    }
    return out;
  }

  if (sbands) {
    const double up = mp_measure(CylinderRegion::upper(), dens, body) / total;
    const double lo = mp_measure(CylinderRegion::lower(), dens, body) / total;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const IntervalSet x = *rows[i].sband_intervals() ^ *cols[j].sband_intervals();
        out[i][j] = std::sqrt(up * x.clipped(0.0, 1.0).length() + lo * x.clipped(-1.0, 0.0).length());
      }
    }
    return out;
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out[i][j] = d_metric(rows[i], cols[j], dens, body);
  }
  return out;
}

double hausdorff_gamma(const std::vector<std::vector<double>>& d) {
  if (d.empty() || d.front().empty()) throw std::invalid_argument("hausdorff_gamma: empty grid");
  double row_sup = 0.0;
  std::vector<double> col_inf(d.front().size(), std::numeric_limits<double>::infinity());
  for (const auto& row : d) {
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < row.size(); ++j) {
      inf = std::min(inf, row[j]);
      col_inf[j] = std::min(col_inf[j], row[j]);
    }
    row_sup = std::max(row_sup, inf);
  }
  return std::max(row_sup, *std::max_element(col_inf.begin(), col_inf.end()));
}

double hausdorff_gamma(const std::vector<CylinderRegion>& bn_grid,
                       const std::vector<CylinderRegion>& b_grid, const BoundaryDensity& dens,
                       const ConvexBody& body) {
  if (bn_grid.empty() || b_grid.empty()) throw std::invalid_argument("hausdorff_gamma: empty grid");
  return hausdorff_gamma(d_matrix(bn_grid, b_grid, dens, body));
}

// ------------------------------------------------------------- brackets

nlohmann::json BracketSet::to_json() const {
  nlohmann::json j;
  j["delta"] = delta;
  j["count"] = count();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : brackets) arr.push_back({{"params", b.params}, {"size", b.size}});
  j["brackets"] = arr;
  return j;
}

namespace {

BracketSet interval_brackets(double delta, const BoundaryDensity& dens, const ConvexBody& body,
                             double eps) {
  BracketSet out;
  out.delta = delta;
  if (delta >= 1.0) {
    const auto lower = CylinderRegion::empty();
    const auto upper = CylinderRegion::full();
    const double size = std::sqrt(qn_measure(upper, dens, body, eps));
    out.brackets.push_back({lower, upper, size, {{"grid", {-1.0, 1.0}}, {"cells", {0, 0, 0, 0}}}});
    return out;
  }
  // K cells of equal Q_n-mass in s; a bracket differs from its members on
  // at most four cells, so 4/K < delta^2 suffices.
  const int K = static_cast<int>(std::floor(4.0 / (delta * delta))) + 1;
  std::vector<double> grid(K + 1);
  grid[0] = -1.0;
  grid[K] = 1.0;
  for (int k = 1; k < K; ++k) {
    const double target = static_cast<double>(k) / K;
    double lo = grid[k - 1];
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (qn_measure(CylinderRegion::sband(IntervalSet(-1.0, mid)), dens, body, eps) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    grid[k] = 0.5 * (lo + hi);
  }

  std::map<std::pair<std::vector<IntervalSet::Interval>, std::vector<IntervalSet::Interval>>, bool> seen;
  for (int ia = 0; ia < K; ++ia) {
    for (int ib = ia; ib < K; ++ib) {
      for (int ic = ib; ic < K; ++ic) {
        for (int id = ic; id < K; ++id) {
          IntervalSet lower;
          lower.add(grid[ia + 1], grid[ib]);
          lower.add(grid[ic + 1], grid[id]);
          IntervalSet upper;
          upper.add(grid[ia], grid[ib + 1]);
          upper.add(grid[ic], grid[id + 1]);
          if (!seen.emplace(std::make_pair(lower.pieces(), upper.pieces()), true).second) continue;
          const double size =
              std::sqrt(qn_measure(CylinderRegion::sband(upper - lower), dens, body, eps));
          nlohmann::json params;
          params["cells"] = {ia, ib, ic, id};
          params["lower"] = lower.pieces();
          params["upper"] = upper.pieces();
          out.brackets.push_back(
              {CylinderRegion::sband(lower), CylinderRegion::sband(upper), size, params});
        }
      }
    }
  }
  return out;
}

struct FECell {
  std::array<std::array<double, 2>, 5> r;  // alpha, a, b, c, d

  double width(int k) const { return r[k][1] - r[k][0]; }
  double mid(int k) const { return 0.5 * (r[k][0] + r[k][1]); }
  double absmax(int k) const { return std::max(std::abs(r[k][0]), std::abs(r[k][1])); }
  /// Lipschitz constant of f in alpha over the cell.
  double alpha_lipschitz() const { return absmax(2) + absmax(3) + absmax(4); }

  /// Pointwise lower and upper bounds of f over the cell at phi.
  std::pair<double, double> bounds(double phi) const {
    const double t = phi - mid(0);
    const double s = std::sin(t);
    const double basis[4] = {1.0, s * s, s, std::cos(t)};
    double lo = 0.0;
    double hi = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double u = r[k + 1][0] * basis[k];
      const double v = r[k + 1][1] * basis[k];
      lo += std::min(u, v);
      hi += std::max(u, v);
    }
    const double pad = alpha_lipschitz() * 0.5 * width(0);
    return {lo - pad, hi + pad};
  }

  nlohmann::json to_json() const {
    return {{"alpha", r[0]}, {"a", r[1]}, {"b", r[2]}, {"c", r[3]}, {"d", r[4]}};
  }
};

BracketSet fe_brackets(double delta, const BoundaryDensity& dens, const ConvexBody& body,
                       double eps, const FEBox& box) {
  if (!body.is_disc()) throw UnsupportedFamily("F_E brackets need a disc body");
  const double radius = body.as_disc().radius;
  constexpr std::size_t kMaxCells = 200000;
  constexpr int kProbe = 256;

  BracketSet out;
  out.delta = delta;
  std::deque<FECell> queue{FECell{{box.alpha, box.a, box.b, box.c, box.d}}};
  std::size_t visited = 0;
  while (!queue.empty()) {
    if (++visited > kMaxCells) throw std::runtime_error("F_E bracketing exceeded the cell budget");
    const FECell cell = queue.front();
    queue.pop_front();

    bool infeasible = false;
    for (int k = 0; k < kProbe && !infeasible; ++k) {
      const auto [lo, hi] = cell.bounds(2.0 * kPi * (k + 0.5) / kProbe);
      infeasible = lo > 1.0 || hi < -1.0;
    }
    if (infeasible) continue;

    auto lo_f = [cell, radius](double theta) { return cell.bounds(theta / radius).first; };
    auto hi_f = [cell, radius](double theta) { return cell.bounds(theta / radius).second; };
    const auto pos = [](auto g) { return [g](double t) { return std::max(g(t), 0.0); }; };
    const auto neg = [](auto g) { return [g](double t) { return std::min(g(t), 0.0); }; };
    const auto lower = CylinderRegion::band_clamped(pos(lo_f)) | CylinderRegion::band_clamped(neg(hi_f));
    const auto upper = CylinderRegion::band_clamped(pos(hi_f)) | CylinderRegion::band_clamped(neg(lo_f));
    const double size = std::sqrt(qn_measure(upper - lower, dens, body, eps));
    if (size <= delta) {
      out.brackets.push_back({lower, upper, size, cell.to_json()});
      continue;
    }
    const double contrib[5] = {cell.alpha_lipschitz() * cell.width(0), cell.width(1),
                               0.5 * cell.width(2), cell.width(3), cell.width(4)};
    const int k = static_cast<int>(std::max_element(contrib, contrib + 5) - contrib);
    FECell left = cell;
    FECell right = cell;
    left.r[k][1] = cell.mid(k);
    right.r[k][0] = cell.mid(k);
    queue.push_back(left);
    queue.push_back(right);
  }
  return out;
}

}  // namespace

BracketSet bracket_cover(FamilyKind kind, double delta, const BoundaryDensity& dens,
                         const ConvexBody& body, double eps, const FEBox& box) {
  if (!(delta > 0.0)) throw std::invalid_argument("bracket_cover needs delta > 0");
  require_eps(body, eps);
  switch (kind) {
    case FamilyKind::IntervalBands:
      return interval_brackets(delta, dens, body, eps);
    case FamilyKind::EllipseSymmDiff:
      return fe_brackets(delta, dens, body, eps, box);
    case FamilyKind::QuadrangleSymmDiff:
      throw UnsupportedFamily("no bracket construction for quadrangle families");
    case FamilyKind::ConvexSymmDiff:
      throw UnsupportedFamily("convex-body families are not VC; no bracket construction");
  }
  throw UnsupportedFamily("unknown family");
}

std::optional<std::size_t> find_bracket(const BracketSet& set, const IntervalParams& p) {
  const IntervalSet m = interval_pair(p);
  for (std::size_t i = 0; i < set.brackets.size(); ++i) {
    const auto* lo = set.brackets[i].lower.sband_intervals();
    const auto* hi = set.brackets[i].upper.sband_intervals();
    if (!lo || !hi) return std::nullopt;
    if ((*lo - m).length() == 0.0 && (m - *hi).length() == 0.0) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> find_bracket(const BracketSet& set, const FEParams& p) {
  const double v[5] = {p.alpha, p.a, p.b, p.c, p.d};
  const char* names[5] = {"alpha", "a", "b", "c", "d"};
  for (std::size_t i = 0; i < set.brackets.size(); ++i) {
    const auto& j = set.brackets[i].params;
    if (!j.contains("alpha")) return std::nullopt;
    bool inside = true;
    for (int k = 0; k < 5 && inside; ++k) {
      inside = v[k] >= j[names[k]][0].get<double>() && v[k] <= j[names[k]][1].get<double>();
    }
    if (inside) return i;
  }
  return std::nullopt;
}

// ------------------------------------------------------------ shattering

nlohmann::json ShatterReport::to_json() const {
  nlohmann::json j{{"shattered", shattered},
                   {"labelings", labelings},
                   {"realized", realized},
                   {"resolution", resolution}};
  j["missing"] = missing ? nlohmann::json(*missing) : nlohmann::json(nullptr);
  return j;
}

ShatterReport shatter_check(ShatterClass cls, const std::vector<CylinderPoint>& points,
                            double radius) {
  const std::size_t n = points.size();
  if (n > 12) throw TooManyPoints(std::to_string(n) + " points, at most 12 are enumerated");
  for (const auto& p : points) {
    if (std::abs(p.s) > 1.0) throw std::invalid_argument("shatter_check: |s| must be at most 1");
  }
  const std::uint32_t total = 1u << n;
  std::vector<char> hit(total, 0);
  ShatterReport rep;
  rep.labelings = total;

  if (cls == ShatterClass::SBand) {
    // A labeling is realized by [a,b] u [c,d] iff points with equal s agree
    // and the included points form at most two runs in s order.
    rep.resolution = "exact";
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return points[i].s < points[j].s; });
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      bool ok = true;
      int runs = 0;
      bool prev_in = false;
      for (std::size_t k = 0; k < n && ok; ++k) {
        const std::size_t i = order[k];
        const bool in = (mask >> i) & 1u;
        if (k > 0 && points[i].s == points[order[k - 1]].s && in != prev_in) ok = false;
        if (in && !prev_in) ++runs;
        prev_in = in;
      }
      hit[mask] = ok && runs <= 2;
    }
  } else {
    rep.resolution = "alpha: 8 values in [0, pi/2); a, c, d: 9 values in [-1, 1]; b: 9 values in [-2, 2]";
    constexpr int kProbe = 256;
    for (int ia = 0; ia < 8; ++ia) {
      const double alpha = 0.5 * kPi * ia / 8.0;
      for (int i1 = 0; i1 < 9; ++i1) {
        for (int i2 = 0; i2 < 9; ++i2) {
          for (int i3 = 0; i3 < 9; ++i3) {
            for (int i4 = 0; i4 < 9; ++i4) {
              const FEParams f{alpha, -1.0 + 0.25 * i1, -2.0 + 0.5 * i2, -1.0 + 0.25 * i3,
                               -1.0 + 0.25 * i4};
              bool bounded = true;
              for (int k = 0; k < kProbe && bounded; ++k) {
                bounded = std::abs(f(2.0 * kPi * (k + 0.5) / kProbe)) <= 1.0;
              }
              if (!bounded) continue;
              std::uint32_t mask = 0;
              for (std::size_t i = 0; i < n; ++i) {
                if (band_contains(f(points[i].theta / radius), points[i].s)) mask |= 1u << i;
              }
              hit[mask] = 1;
            }
          }
        }
      }
    }
  }
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (hit[mask]) {
      ++rep.realized;
    } else if (!rep.missing) {
      rep.missing = mask;
    }
  }
  rep.shattered = rep.realized == total;
  return rep;
}

}  // namespace lep
