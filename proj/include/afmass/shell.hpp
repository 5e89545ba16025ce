#pragma once

#include <json.hpp>

#include <memory>
#include <vector>

#include "afmass/fields.hpp"
#include "afmass/metric.hpp"

namespace afmass {

/// Radial source profile rho(s) >= 0 supported in [1/2, 1] with unit integral
/// over R^n. The shape is (1 - (4(s - 3/4))^2)^power, normalized numerically.
class ShellProfile {
 public:
  ShellProfile(int n, int power = 3);

  int dimension() const { return n_; }
  int power() const { return power_; }
  double normalization() const { return c_; }
  /// rho(s) and its first two derivatives.
  RadialJet at(double s) const;
  nlohmann::json to_json() const { return {{"kind", "poly_bump"}, {"power", power_}}; }

 private:
  int n_;
  int power_;
  double c_;
};

/// Solution of (r^{n-1} v')' = -r^{n-1} rho_i(r), v'(0) = 0, v(infinity) = 0 for
/// rho_i(x) = i^{-n} rho(x / i). Node values are tabulated on a uniform grid
/// across [i/2, i]; values between nodes come from the integral representation
/// on the enclosing cell.
class ShellPotential final : public RadialFunction {
 public:
  ShellPotential(std::shared_ptr<const ShellProfile> profile, double index, int grid_nodes = 64);

  RadialJet at(double r) const override;
  nlohmann::json to_json() const override;
  std::vector<double> breakpoints() const override { return {0.5 * index_, index_}; }
  double source_support_radius() const override { return index_; }

  double index() const { return index_; }
  /// Coefficient a with v = a r^{2-n} outside the support.
  double tail_coefficient() const { return a_; }
  /// rho_i(r).
  double source(double r) const;
  const std::vector<double>& grid() const { return nodes_; }
  const std::vector<double>& grid_values() const { return v_; }

 private:
  double enclosed(double r) const;  // int_0^r s^{n-1} rho_i(s) ds
  std::size_t cell_of(double r) const;

  std::shared_ptr<const ShellProfile> profile_;
  int n_;
  double index_;
  double a_;
  std::vector<double> nodes_;
  std::vector<double> enclosed_;  // at nodes
  std::vector<double> v_;         // at nodes
};

/// The index-parameterized conformal family g_i = (1 + v_i)^{4/(n-2)} delta.
struct ShellFamily {
  int n = 3;
  double index = 1.0;
  int grid_nodes = 64;
  std::shared_ptr<const ShellProfile> profile;
  std::shared_ptr<const ShellPotential> potential;

  static ShellFamily make(int n, double index, int grid_nodes = 64, int power = 3);
  static ShellFamily from_json(int n, const nlohmann::json& params);
  nlohmann::json to_json() const;

  /// a = 1 / ((n-2) omega_{n-1}); the ADM mass is 2a.
  double tail_coefficient() const { return potential->tail_coefficient(); }
  double mass() const { return 2.0 * tail_coefficient(); }
};

MetricSpec shell_metric(const ShellFamily& family);

}  // namespace afmass
