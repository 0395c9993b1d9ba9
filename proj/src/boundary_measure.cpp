#include "lep/boundary_measure.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lep/errors.hpp"

namespace lep {

namespace {

constexpr unsigned kMaxDepth = 10;
constexpr double kTolerance = 1e-10;

double gk(const std::function<double(double)>& g, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, a, b, kMaxDepth,
                                                                       kTolerance);
}

/// Jacobian slope: eps (1 + kappa s) with kappa = eps / R on a disc.
double jacobian_slope(const ConvexBody& body, double eps) {
  return body.is_disc() ? eps / body.as_disc().radius : 0.0;
}

/// Depth, in units of eps, down to which the inner normal segment at theta
/// still projects back onto theta.
double inner_extent(const ConvexBody& body, double eps, double theta) {
  if (body.is_disc()) return 1.0;
  return std::min(1.0, local_reach(body, theta) / eps);
}

/// Arclength positions where the local reach crosses eps, i.e. where the
/// inner strip clipping starts or stops.
std::vector<double> clip_breakpoints(const ConvexBody& body, double eps) {
  std::vector<double> out;
  if (body.is_disc()) return out;
  constexpr int kProbe = 64;
  for (std::size_t i = 0; i < body.edge_count(); ++i) {
    const double t0 = body.edge_theta0(i);
    const double len = body.edge_length(i);
    auto excess = [&](double t) { return local_reach(body, t0 + t) - eps; };
    double prev_t = 1e-12 * len;
    double prev = excess(prev_t);
    for (int k = 1; k <= kProbe; ++k) {
      const double t = len * (k == kProbe ? 1.0 - 1e-12 : static_cast<double>(k) / kProbe);
      const double cur = excess(t);
      if ((prev < 0.0) != (cur < 0.0)) {
        double a = prev_t;
        double b = t;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (a + b);
          if ((excess(m) < 0.0) == (prev < 0.0)) {
            a = m;
          } else {
            b = m;
          }
        }
        out.push_back(t0 + 0.5 * (a + b));
      }
      prev = cur;
      prev_t = t;
    }
  }
  return out;
}

}  // namespace

double integrate_theta(const std::function<double(double)>& g, std::vector<double> breakpoints,
                       double perimeter) {
  for (auto& b : breakpoints) {
    b = std::fmod(b, perimeter);
    if (b < 0.0) b += perimeter;
  }
  breakpoints.push_back(0.0);
  breakpoints.push_back(perimeter);
  std::sort(breakpoints.begin(), breakpoints.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k];
    const double b = breakpoints[k + 1];
    if (b - a > 1e-14 * perimeter) total += gk(g, a, b);
  }
  return total;
}

double mp_measure(const CylinderRegion& region, const BoundaryDensity& dens,
                  const ConvexBody& body) {
  std::vector<double> breaks = body.breakpoints();
  region.collect_breakpoints(breaks);
  auto g = [&](double theta) {
    const IntervalSet sec = region.section(theta);
    return dens.p_plus(theta) * sec.clipped(0.0, 1.0).length() +
           dens.p_minus(theta) * sec.clipped(-1.0, 0.0).length();
  };
  return integrate_theta(g, std::move(breaks), body.perimeter());
}

double mp_total(const BoundaryDensity& dens, const ConvexBody& body) {
  if (dens.is_two_level()) {
    const auto& t = dens.as_two_level();
    return (t.c_in + t.c_out) * body.perimeter();
  }
  auto g = [&](double theta) { return dens.p_plus(theta) + dens.p_minus(theta); };
  return integrate_theta(g, body.breakpoints(), body.perimeter());
}

double q_measure(const CylinderRegion& region, const BoundaryDensity& dens,
                 const ConvexBody& body) {
  const double total = mp_total(dens, body);
  if (!(total > 0.0)) throw std::invalid_argument("q_measure: M_p(Gamma) must be positive");
  return std::clamp(mp_measure(region, dens, body) / total, 0.0, 1.0);
}

double preimage_probability(const CylinderRegion& region, const BoundaryDensity& dens,
                            const ConvexBody& body, double eps) {
  require_eps(body, eps);
  dens.check_collar(body, eps);
  const double kappa = jacobian_slope(body, eps);

  std::vector<double> breaks = body.breakpoints();
  region.collect_breakpoints(breaks);
  const auto clips = clip_breakpoints(body, eps);
  breaks.insert(breaks.end(), clips.begin(), clips.end());

  auto g = [&](double theta) {
    const IntervalSet sec = region.section(theta);
    const double m = inner_extent(body, eps, theta);
    return eps * (dens.p_plus(theta) * sec.clipped(0.0, 1.0).integrate_linear(kappa) +
                  dens.p_minus(theta) * sec.clipped(-m, 0.0).integrate_linear(kappa));
  };
  double total = integrate_theta(g, std::move(breaks), body.perimeter());

  for (const Corner& c : body.corners()) {
    const double weight = eps * eps * dens.p_plus(c.theta);
    if (weight == 0.0) continue;
    if (region.depends_on_normal()) {
      auto h = [&](double phi) { return region.corner_section(c, phi).first_moment(); };
      total += weight * gk(h, c.phi_begin, c.phi_begin + c.phi_span);
    } else {
      total += weight * c.phi_span * region.section(c.theta).clipped(0.0, 1.0).first_moment();
    }
  }
  return total;
}

double neighborhood_mass(const ConvexBody& body, const BoundaryDensity& dens, double eps) {
  require_eps(body, eps);
  dens.check_collar(body, eps);
  if (dens.is_two_level()) {
    const auto& t = dens.as_two_level();
    double outer = 0.0;
    if (body.is_disc()) {
      const double r = body.as_disc().radius;
      outer = std::numbers::pi * ((r + eps) * (r + eps) - r * r);
    } else {
      outer = body.perimeter() * eps + std::numbers::pi * eps * eps;
    }
    const double inner = neighborhood_area(body, eps) - outer;
    return t.c_out * outer + t.c_in * inner;
  }
  return preimage_probability(CylinderRegion::full(), dens, body, eps);
}

double qn_measure(const CylinderRegion& region, const BoundaryDensity& dens,
                  const ConvexBody& body, double eps) {
  const double a = neighborhood_mass(body, dens, eps);
  if (!(a > 0.0)) throw std::invalid_argument("qn_measure: the collar has zero probability");
  return std::clamp(preimage_probability(region, dens, body, eps) / a, 0.0, 1.0);
}

BoundaryDensity make_collar_density(const ConvexBody& body, BoundaryDensity::Profile p_plus,
                                    BoundaryDensity::Profile p_minus, double bound, double width,
                                    double half_width) {
  BoundaryDensity::Collar model{p_plus, p_minus, bound, width, 0.0, half_width};
  const BoundaryDensity bare = BoundaryDensity::collar(model);
  const double collar_mass = preimage_probability(CylinderRegion::full(), bare, body, width);
  const double rest = 4.0 * half_width * half_width - neighborhood_area(body, width);
  const double background = (1.0 - collar_mass) / rest;
  if (background < 0.0) {
    throw std::invalid_argument("collar profiles carry more than unit mass");
  }
  model.background = background;
  return BoundaryDensity::collar(std::move(model));
}

double total_mass(const BoundaryDensity& dens, const ConvexBody& body) {
  const double box = 4.0 * dens.half_width() * dens.half_width();
  if (dens.is_two_level()) {
    const auto& t = dens.as_two_level();
    dens.check_collar(body, 0.0);
    return t.c_in * body.area() + t.c_out * (box - body.area());
  }
  const auto& c = dens.as_collar();
  const double collar_mass = preimage_probability(CylinderRegion::full(), dens, body, c.width);
  return collar_mass + c.background * (box - neighborhood_area(body, c.width));
}

double tv_distance(const BoundaryDensity& dens, const ConvexBody& body, double eps,
                   std::size_t n_theta, std::size_t n_s) {
  if (n_theta < 64 || n_s < 64) {
    throw std::invalid_argument("tv_distance: grid must be at least 64 x 64");
  }
  const double a = neighborhood_mass(body, dens, eps);
  const double total = mp_total(dens, body);
  const double kappa = jacobian_slope(body, eps);
  const double dtheta = body.perimeter() / static_cast<double>(n_theta);
  const double ds = 2.0 / static_cast<double>(n_s);

  double acc = 0.0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) * dtheta;
    const double pp = dens.p_plus(theta);
    const double pm = dens.p_minus(theta);
    const double m = inner_extent(body, eps, theta);
    double column = 0.0;
    for (std::size_t j = 0; j < n_s; ++j) {
      const double s = -1.0 + (static_cast<double>(j) + 0.5) * ds;
      const double p = s > 0.0 ? pp : pm;
      const double qn = (s >= -m) ? p * eps * (1.0 + kappa * s) / a : 0.0;
      column += std::abs(qn - p / total);
    }
    acc += column;
  }
  double corner_mass = 0.0;
  for (const Corner& c : body.corners()) {
    corner_mass += eps * eps * dens.p_plus(c.theta) * c.phi_span * 0.5;
  }
  return 0.5 * (acc * dtheta * ds + corner_mass / a);
}

SetValuedFamily shifted_disc_family(const ConvexBody& body, double delta) {
  if (!body.is_disc()) throw std::invalid_argument("shifted_disc_family needs a disc body");
  const auto disc = body.as_disc();
  return [disc, delta](double eps) -> AmbientSet {
    const Point2 moved = disc.center + Point2{delta * eps, 0.0};
    return [disc, moved](const Point2& z) {
      return (distance(z, moved) <= disc.radius) != (distance(z, disc.center) <= disc.radius);
    };
  };
}

SetValuedFamily outer_band_family(const ConvexBody& body) {
  return [body](double eps) -> AmbientSet {
    return [body, eps](const Point2& z) {
      return !body.contains(z) && body.boundary_distance(z) <= eps;
    };
  };
}

SetValuedFamily full_collar_family(const ConvexBody& body) {
  return [body](double eps) -> AmbientSet {
    return [body, eps](const Point2& z) { return body.boundary_distance(z) <= eps; };
  };
}

SetValuedFamily empty_family() {
  return [](double) -> AmbientSet { return [](const Point2&) { return false; }; };
}

double derivative_deficit(const SetValuedFamily& family, const CylinderRegion& derivative,
                          const ConvexBody& body, double eps, std::size_t n_theta,
                          std::size_t n_s) {
  if (n_theta < 512 || n_s < 512) {
    throw std::invalid_argument("derivative_deficit: raster must be at least 512 x 512");
  }
  const auto image = CylinderRegion::tau_image(body, eps, family(eps));
  const Raster a = Raster::rasterize(image, n_theta, n_s, body.perimeter());
  const Raster b = Raster::rasterize(derivative, n_theta, n_s, body.perimeter());
  return static_cast<double>(a.count_xor(b)) * a.cell_theta() * a.cell_s();
}

std::vector<DerivativeRow> measure_derivative_check(const SetValuedFamily& family,
                                                    const CylinderRegion& derivative,
                                                    const BoundaryDensity& dens,
                                                    const ConvexBody& body,
                                                    const std::vector<double>& eps_grid) {
  const double mp = mp_measure(derivative, dens, body);
  std::vector<DerivativeRow> rows;
  for (double eps : eps_grid) {
    const auto image = CylinderRegion::tau_image(body, eps, family(eps));
    rows.push_back({eps, preimage_probability(image, dens, body, eps) / eps, mp});
  }
  return rows;
}

}  // namespace lep
