#pragma once

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

#include "afmass/metric.hpp"
#include "afmass/types.hpp"

namespace afmass {

struct MassEstimate;

/// Warp f(r, theta) of a surface metric dr^2 + f^2 dtheta^2 in geodesic polar
/// coordinates, with the derivatives the curvature formulas need.
struct WarpJet {
  double f = 0.0;
  double fr = 0.0;
  double frr = 0.0;
  double ft = 0.0;   // d/dtheta
};

class Warp {
 public:
  virtual ~Warp() = default;
  virtual WarpJet at(double r, double theta) const = 0;
  virtual nlohmann::json to_json() const = 0;
  /// Cone parameter alpha of the model end dr^2 + alpha^2 r^2 dtheta^2.
  virtual double alpha() const = 0;
  /// False when f(0) = 0, f_r(0) = 1 fails (a bare cone tip).
  virtual bool has_cap() const = 0;
  /// Radii where f_rr is discontinuous.
  virtual std::vector<double> breakpoints() const { return {}; }
  /// Exponent tau of the O(r^{-tau}) approach to the model cone, 0 if exact beyond a radius.
  virtual double decay_order() const { return 0.0; }
};

/// f = alpha r. A bare cone unless alpha = 1.
std::shared_ptr<const Warp> flat_warp(double alpha);
/// Spherical (alpha < 1) or hyperbolic (alpha > 1) cap of curvature +-1 glued C^1
/// to the cone where f_r reaches alpha.
std::shared_ptr<const Warp> round_cap_warp(double alpha);
/// f = alpha r + (1 - alpha) w (sqrt(pi)/2) erf(r / w); K >= 0 for alpha <= 1.
std::shared_ptr<const Warp> smooth_cap_warp(double alpha, double width = 1.0);
/// base * (1 + eps s(r) (1 + beta cos(k theta))), s = r^2 / (1 + r^2)^{1 + tau/2}.
std::shared_ptr<const Warp> perturbed_warp(std::shared_ptr<const Warp> base, double eps,
                                           double tau, double beta = 0.0, int k = 2);
/// Rescaled surface (i^2 g): f_i(r) = i f(r / i).
std::shared_ptr<const Warp> scaled_warp(std::shared_ptr<const Warp> base, double factor);

std::shared_ptr<const Warp> warp_from_json(double alpha, const nlohmann::json& profile);

/// Asymptotically conical surface with a declared Euler characteristic.
struct ConicalSurface {
  std::shared_ptr<const Warp> warp;
  double chi = 1.0;

  double alpha() const { return warp->alpha(); }
  static ConicalSurface from_json(const nlohmann::json& params);
  nlohmann::json to_json() const;
};

/// Chart metric of the surface in Cartesian coordinates x = r (cos theta, sin theta).
/// Derivatives are finite differences; the origin is excluded.
MetricSpec cone_metric(const ConicalSurface& surface);

double gauss_curvature_at(const ConicalSurface& surface, double r, double theta);
/// Integral of the geodesic curvature of the coordinate circle of radius r.
double geodesic_curvature_integral(const ConicalSurface& surface, double r, int q);
/// Integral of K over the coordinate disc of radius r.
double total_gauss_curvature(const ConicalSurface& surface, double r, int q);

/// Mass estimate from the geodesic-curvature route, with the Gauss-Bonnet route
/// recorded alongside.
struct ConeMass {
  double geodesic_estimate = 0.0;
  double gauss_bonnet_estimate = 0.0;
  double discrepancy = 0.0;
};

MassEstimate cone_mass(const ConicalSurface& surface, const std::vector<double>& radii, int q,
                       ConeMass* detail = nullptr);

}  // namespace afmass
