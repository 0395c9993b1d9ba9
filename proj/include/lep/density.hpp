#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>

#include "lep/geometry.hpp"

namespace lep {

/// Ambient density p together with its one-sided boundary limits p_+
/// (outside) and p_- (inside), as functions of boundary arclength.
///
/// Both models make p depend only on the foot and the side of the boundary
/// near the boundary, so p agrees exactly with p_+(theta) / p_-(theta) on
/// every collar of width up to `max_eps()`.
class BoundaryDensity {
 public:
  using Profile = std::function<double(double)>;

  /// c_in on the body, c_out on the rest of the box [-R, R]^2, zero outside.
  struct TwoLevel {
    double c_in{0.0};
    double c_out{0.0};
    double half_width{1.0};
  };
  /// p_+ / p_- extended constantly along normals over a collar of the given
  /// width, `background` elsewhere in the box [-R, R]^2, zero outside.
  struct Collar {
    Profile p_plus;
    Profile p_minus;
    double bound{0.0};  ///< upper bound for p_+ and p_-
    double width{0.0};
    double background{0.0};
    double half_width{1.0};
  };

  static BoundaryDensity two_level(double c_in, double c_out, double half_width);
  /// Uniform density on [-R, R]^2.
  static BoundaryDensity uniform_box(double half_width);
  /// Two-level density with c_in = ratio * c_out, scaled to total mass one.
  static BoundaryDensity two_level_normalized(const ConvexBody& body, double ratio,
                                              double half_width);
  /// Caller is responsible for the total mass; see make_collar_density().
  static BoundaryDensity collar(Collar model);

  bool is_two_level() const { return std::holds_alternative<TwoLevel>(model_); }
  const TwoLevel& as_two_level() const { return std::get<TwoLevel>(model_); }
  const Collar& as_collar() const { return std::get<Collar>(model_); }
  std::string model_name() const { return is_two_level() ? "two_level" : "collar"; }

  double p_plus(double theta) const;
  double p_minus(double theta) const;
  /// Upper bound of p_+ and p_- over the boundary.
  double boundary_sup() const;
  /// p(z) on the whole plane.
  double ambient(const ConvexBody& body, const Point2& z) const;
  /// Upper bound of p over the plane.
  double ambient_sup() const;
  double half_width() const;
  /// Largest collar width over which p equals p_+/p_- exactly.
  double max_eps() const;

  /// Throws std::invalid_argument when the box does not contain the
  /// eps-collar of the body or eps exceeds max_eps().
  void check_collar(const ConvexBody& body, double eps) const;

 private:
  using Model = std::variant<TwoLevel, Collar>;
  explicit BoundaryDensity(Model model) : model_(std::move(model)) {}
  Model model_;
};

}  // namespace lep
