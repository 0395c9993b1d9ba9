#include "lep/density.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lep {

BoundaryDensity BoundaryDensity::two_level(double c_in, double c_out, double half_width) {
  if (!(c_in >= 0.0) || !(c_out >= 0.0) || !(half_width > 0.0)) {
    throw std::invalid_argument("two_level density needs c_in, c_out >= 0 and R > 0");
  }
  return BoundaryDensity(TwoLevel{c_in, c_out, half_width});
}

BoundaryDensity BoundaryDensity::uniform_box(double half_width) {
  const double c = 1.0 / (4.0 * half_width * half_width);
  return two_level(c, c, half_width);
}

BoundaryDensity BoundaryDensity::two_level_normalized(const ConvexBody& body, double ratio,
                                                      double half_width) {
  const double box = 4.0 * half_width * half_width;
  const double c_out = 1.0 / (ratio * body.area() + (box - body.area()));
  return two_level(ratio * c_out, c_out, half_width);
}

BoundaryDensity BoundaryDensity::collar(Collar model) {
  if (!model.p_plus || !model.p_minus) {
    throw std::invalid_argument("collar density needs both boundary profiles");
  }
  if (!(model.width > 0.0) || !(model.bound >= 0.0) || !(model.background >= 0.0) ||
      !(model.half_width > 0.0)) {
    throw std::invalid_argument("collar density parameters out of range");
  }
  return BoundaryDensity(std::move(model));
}

double BoundaryDensity::p_plus(double theta) const {
  if (is_two_level()) return as_two_level().c_out;
  return as_collar().p_plus(theta);
}

double BoundaryDensity::p_minus(double theta) const {
  if (is_two_level()) return as_two_level().c_in;
  return as_collar().p_minus(theta);
}

double BoundaryDensity::boundary_sup() const {
  if (is_two_level()) return std::max(as_two_level().c_in, as_two_level().c_out);
  return as_collar().bound;
}

double BoundaryDensity::ambient_sup() const {
  if (is_two_level()) return boundary_sup();
  return std::max(as_collar().bound, as_collar().background);
}

double BoundaryDensity::half_width() const {
  return is_two_level() ? as_two_level().half_width : as_collar().half_width;
}

double BoundaryDensity::max_eps() const {
  return is_two_level() ? std::numeric_limits<double>::infinity() : as_collar().width;
}

double BoundaryDensity::ambient(const ConvexBody& body, const Point2& z) const {
  const double r = half_width();
  if (std::abs(z.x) > r || std::abs(z.y) > r) return 0.0;
  if (is_two_level()) {
    return body.contains(z) ? as_two_level().c_in : as_two_level().c_out;
  }
  const auto& c = as_collar();
  const SignedProjection p = body.project_any(z);
  if (std::abs(p.signed_distance) > c.width) return c.background;
  return p.signed_distance > 0.0 ? c.p_plus(p.foot.theta) : c.p_minus(p.foot.theta);
}

void BoundaryDensity::check_collar(const ConvexBody& body, double eps) const {
  if (eps > max_eps()) {
    throw std::invalid_argument("eps=" + std::to_string(eps) +
                                " exceeds the collar width of the density model");
  }
  const auto [lo, hi] = body.bounding_box();
  const double r = half_width();
  if (lo.x - eps < -r || lo.y - eps < -r || hi.x + eps > r || hi.y + eps > r) {
    throw std::invalid_argument("support box does not contain the eps-collar of the body");
  }
}

}  // namespace lep
