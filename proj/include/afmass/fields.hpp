#pragma once

#include <json.hpp>

#include <memory>
#include <vector>

#include "afmass/types.hpp"

namespace afmass {

/// A smooth scalar field on a chart, used as a conformal factor U.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual FieldJet evaluate(const Vec& x) const = 0;
  virtual nlohmann::json to_json() const = 0;

  /// True when the field blows up at the chart origin.
  virtual bool singular_at_origin() const { return false; }
  /// Radii where the field is only finitely smooth (quadrature panel edges).
  virtual std::vector<double> radial_breakpoints() const { return {}; }
  /// Outer radius of supp(Laplacian U) when compact, negative otherwise.
  virtual double laplacian_support_radius() const { return -1.0; }
  /// Exponent p with U - 1 - (monopole) = O(r^{-p}); n-2 for the families here.
  virtual double decay_order(int n) const { return n - 2.0; }
};

/// U = 1 + a |x|^{2-n} + b.x |x|^{-n}: harmonic away from the origin.
class HarmonicFactor final : public ScalarField {
 public:
  HarmonicFactor(int n, double a, Vec dipole = {});

  FieldJet evaluate(const Vec& x) const override;
  nlohmann::json to_json() const override;
  bool singular_at_origin() const override { return true; }

  double monopole() const { return a_; }
  const Vec& dipole() const { return dipole_; }

 private:
  int n_;
  double a_;
  Vec dipole_;
};

/// Radial profile value and first two derivatives.
struct RadialJet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

class RadialFunction {
 public:
  virtual ~RadialFunction() = default;
  virtual RadialJet at(double r) const = 0;
  virtual nlohmann::json to_json() const = 0;
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual double source_support_radius() const { return -1.0; }
};

/// U(x) = 1 + v(|x|) for a radial profile v that is smooth at the origin.
class RadialField final : public ScalarField {
 public:
  explicit RadialField(std::shared_ptr<const RadialFunction> profile);

  FieldJet evaluate(const Vec& x) const override;
  nlohmann::json to_json() const override { return profile_->to_json(); }
  std::vector<double> radial_breakpoints() const override {
    return profile_->breakpoints();
  }
  double laplacian_support_radius() const override {
    return profile_->source_support_radius();
  }

  const RadialFunction& profile() const { return *profile_; }

 private:
  std::shared_ptr<const RadialFunction> profile_;
};

/// Symmetric 2-tensor added to a metric: value and coordinate derivatives.
class TensorPerturbation {
 public:
  virtual ~TensorPerturbation() = default;
  /// Adds h and its derivatives up to `order` into an already-sized jet.
  virtual void add_to(const Vec& x, int order, MetricJet& jet) const = 0;
  virtual nlohmann::json to_json() const = 0;
  /// p with h = O(|x|^{-p}).
  virtual double decay_order() const = 0;
};

/// h_ij = c (x_k^2 delta_ij + x_i x_j) |x|^{-(n+1)}, homogeneous of degree 1-n.
class QuadrupolePerturbation final : public TensorPerturbation {
 public:
  QuadrupolePerturbation(int n, double amplitude, int axis = 0);

  void add_to(const Vec& x, int order, MetricJet& jet) const override;
  nlohmann::json to_json() const override;
  double decay_order() const override { return n_ - 1.0; }

 private:
  int n_;
  double c_;
  int axis_;
};

}  // namespace afmass
