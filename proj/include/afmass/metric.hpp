#pragma once

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "afmass/fields.hpp"
#include "afmass/types.hpp"

namespace afmass {

/// Region removed from the chart: {|x - center| <= radius}. A radius of zero
/// removes a single point.
struct ExcludedBall {
  Vec center;
  double radius = 0.0;
};

/// One family of Riemannian metrics written in a single chart.
///
/// Implementations are immutable; every member is const and thread-safe.
class MetricFamily {
 public:
  virtual ~MetricFamily() = default;

  virtual int dimension() const = 0;
  virtual std::string name() const = 0;
  virtual nlohmann::json params_json() const = 0;

  /// Metric components g_ij(x). Callers have already checked chart membership.
  virtual Mat metric(const Vec& x) const = 0;

  virtual bool has_analytic_derivatives() const { return false; }
  /// Fills jet.g, jet.first (order >= 1) and jet.second (order 2).
  virtual void analytic_jet(const Vec& x, int order, MetricJet& jet) const;

  virtual std::optional<ExcludedBall> excluded() const { return std::nullopt; }

  /// Exponent p for the flux remainder model c0 + c1 r^{-p}.
  virtual double flux_decay_order() const { return dimension() - 2.0; }
  /// Constant c with g -> c * delta at infinity.
  virtual double asymptotic_scale() const { return 1.0; }
  /// Radii where derivatives are only finitely smooth.
  virtual std::vector<double> radial_breakpoints() const { return {}; }
  /// Outer radius of supp R(g) when known to be compact, negative otherwise.
  virtual double scalar_curvature_support_radius() const { return -1.0; }
};

enum class DerivativeMode { analytic, finite_difference };

/// Declarative, immutable description of a charted metric.
class MetricSpec {
 public:
  explicit MetricSpec(std::shared_ptr<const MetricFamily> family,
                      DerivativeMode mode = DerivativeMode::analytic,
                      std::optional<double> fd_step = std::nullopt);

  int dimension() const { return family_->dimension(); }
  const MetricFamily& family() const { return *family_; }
  const std::shared_ptr<const MetricFamily>& family_ptr() const { return family_; }
  DerivativeMode derivative_mode() const { return mode_; }
  std::optional<double> fd_step() const { return fd_step_; }

  MetricSpec with_derivatives(DerivativeMode mode,
                              std::optional<double> fd_step = std::nullopt) const {
    return MetricSpec(family_, mode, fd_step);
  }

  /// True when x lies in the chart's valid region.
  bool contains(const Vec& x) const;
  /// Distance from x to the excluded region (infinity when nothing is excluded).
  double distance_to_boundary(const Vec& x) const;

  static MetricSpec euclidean(int n);
  static MetricSpec schwarzschild(int n, double m,
                                  std::optional<double> inner_radius = std::nullopt);
  static MetricSpec conformally_flat(int n, std::shared_ptr<const ScalarField> u);
  /// Harmonically flat: U = 1 + a|x|^{2-n} + b.x|x|^{-n}.
  static MetricSpec harmonically_flat(int n, double a, Vec dipole = {});
  static MetricSpec asymptotically_schwarzschild(
      int n, double m, std::shared_ptr<const TensorPerturbation> h,
      std::optional<double> inner_radius = std::nullopt);
  static MetricSpec scaled(const MetricSpec& base, double lambda);
  static MetricSpec translated(const MetricSpec& base, const Vec& offset);

 private:
  std::shared_ptr<const MetricFamily> family_;
  DerivativeMode mode_;
  std::optional<double> fd_step_;
};

/// Conformally flat family U^{4/(n-2)} delta published under its own name and
/// parameter record (used by families built on top of a solved conformal factor).
std::shared_ptr<const MetricFamily> make_conformal_family(
    int n, std::shared_ptr<const ScalarField> u, std::string name, nlohmann::json params,
    std::optional<ExcludedBall> excluded = std::nullopt);

/// Christoffel symbols, Ricci tensor and scalar curvature at a point.
struct PointwiseCurvature {
  int n = 0;
  std::vector<double> christoffel;  // [k][i][j] -> k*n*n + i*n + j
  Mat ricci;
  double scalar = 0.0;

  double gamma(int k, int i, int j) const { return christoffel[(k * n + i) * n + j]; }
};

Mat metric_at(const MetricSpec& spec, const Vec& x);

/// Metric and derivatives up to `order` (1 or 2) using the spec's derivative mode.
MetricJet metric_derivatives_at(const MetricSpec& spec, const Vec& x, int order);

/// Central-difference jet with an explicit step (first and second derivatives).
MetricJet metric_derivatives_fd(const MetricSpec& spec, const Vec& x, int order,
                                double step);

/// Default finite-difference steps: eps^{1/3} for first, eps^{1/4} for second
/// derivatives, both scaled by max(1, |x|).
double default_fd_step(const Vec& x, int order);

PointwiseCurvature curvature_at(const MetricSpec& spec, const Vec& x);

/// Coordinate curvature of any metric jet with second derivatives (any dimension).
PointwiseCurvature curvature_from_jet(const MetricJet& jet);

/// Scalar curvature of e^{2 psi} g1 on a hypersurface of dimension n-1, where
/// e^{2 psi} = U^{4/(n-2)} and the g1-quantities are supplied by the caller.
double conformal_scalar_curvature_hypersurface(double conformal_u, double base_scalar,
                                               double laplacian_psi,
                                               double grad_psi_squared, int n);

/// Cholesky-based inverse; throws NotPositiveDefinite.
Mat checked_inverse(const Mat& g);

}  // namespace afmass
