#pragma once

/**
 * @file boundary_measure.hpp
 * @brief Measures on the cylinder and in the collar.
 *
 *  - M_p: dM_p = p_+(theta) dtheta ds on s > 0 and p_-(theta) dtheta ds on s <= 0;
 *  - Q = M_p / M_p(Gamma);
 *  - Q_n(C) = P(tau_eps^{-1} C) / a with a = P(V_eps).
 *
 * P(tau_eps^{-1} C) is integrated in cylinder coordinates with the local
 * Steiner Jacobian: eps (1 + eps s / R) on a disc of radius R, eps on the
 * edge strips of a polygon (inner strips clipped at the local reach), and
 * eps^2 s ds dphi on the outer corner sectors.
 */

#include <cstddef>
#include <functional>
#include <vector>

#include "lep/density.hpp"
#include "lep/geometry.hpp"
#include "lep/region.hpp"

namespace lep {

/// Adaptive Gauss-Kronrod over [0, perimeter) split at the given points.
double integrate_theta(const std::function<double(double)>& g, std::vector<double> breakpoints,
                       double perimeter);

double mp_measure(const CylinderRegion& region, const BoundaryDensity& dens,
                  const ConvexBody& body);
/// M_p(Gamma) = integral of (p_+ + p_-) over the boundary.
double mp_total(const BoundaryDensity& dens, const ConvexBody& body);
double q_measure(const CylinderRegion& region, const BoundaryDensity& dens,
                 const ConvexBody& body);

/// a = P(V_eps). Closed form for the two-level model, quadrature otherwise.
double neighborhood_mass(const ConvexBody& body, const BoundaryDensity& dens, double eps);
/// P(tau_eps^{-1} C) by Steiner-Jacobian quadrature.
double preimage_probability(const CylinderRegion& region, const BoundaryDensity& dens,
                            const ConvexBody& body, double eps);
double qn_measure(const CylinderRegion& region, const BoundaryDensity& dens,
                  const ConvexBody& body, double eps);

/// Collar density model scaled so the ambient mass is one: the background
/// level is chosen to absorb what the collar leaves. Throws
/// std::invalid_argument if the collar alone carries more than unit mass.
BoundaryDensity make_collar_density(const ConvexBody& body, BoundaryDensity::Profile p_plus,
                                    BoundaryDensity::Profile p_minus, double bound, double width,
                                    double half_width);
/// Total ambient mass of the density (quadrature for the collar model).
double total_mass(const BoundaryDensity& dens, const ConvexBody& body);

/// Total variation between Q_n and Q, from cell-midpoint densities on an
/// (n_theta, n_s) grid. The mass Q_n puts on the corner lines of a polygon
/// is singular with respect to dtheta ds and is added in full.
double tv_distance(const BoundaryDensity& dens, const ConvexBody& body, double eps,
                   std::size_t n_theta, std::size_t n_s);

/// eps -> A(eps), a subset of the eps-collar.
using SetValuedFamily = std::function<AmbientSet(double)>;

/// K(eps) = body shifted by (delta eps, 0); A(eps) = K(eps) symmetric-difference K.
SetValuedFamily shifted_disc_family(const ConvexBody& body, double delta);
/// A(eps) = {0 < d_s <= eps}.
SetValuedFamily outer_band_family(const ConvexBody& body);
/// A(eps) = V_eps.
SetValuedFamily full_collar_family(const ConvexBody& body);
SetValuedFamily empty_family();

/// M(tau_eps A(eps) symmetric-difference B) with p_+ = p_- = 1, from
/// cell-midpoint rasters of both sets.
double derivative_deficit(const SetValuedFamily& family, const CylinderRegion& derivative,
                          const ConvexBody& body, double eps, std::size_t n_theta = 1024,
                          std::size_t n_s = 2048);

struct DerivativeRow {
  double eps{0.0};
  double ratio{0.0};  ///< P(A(eps)) / eps
  double mp{0.0};     ///< M_p(B)
};

/// Table of P(A(eps))/eps against M_p(B) along eps_grid.
std::vector<DerivativeRow> measure_derivative_check(const SetValuedFamily& family,
                                                    const CylinderRegion& derivative,
                                                    const BoundaryDensity& dens,
                                                    const ConvexBody& body,
                                                    const std::vector<double>& eps_grid);

}  // namespace lep
