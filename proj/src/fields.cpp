#include "afmass/fields.hpp"

#include <cmath>

#include "afmass/error.hpp"

namespace afmass {

HarmonicFactor::HarmonicFactor(int n, double a, Vec dipole)
    : n_(n), a_(a), dipole_(std::move(dipole)) {
  if (n_ < 3) {
    throw Error(ErrorKind::ConfigInvalid, "harmonic conformal factor needs n >= 3");
  }
  if (dipole_.size() == 0) {
    dipole_ = Vec::Zero(n_);
  }
  if (dipole_.size() != n_) {
    throw Error(ErrorKind::ConfigInvalid, "dipole vector has wrong length");
  }
}

FieldJet HarmonicFactor::evaluate(const Vec& x) const {
  const double r2 = x.squaredNorm();
  const double r = std::sqrt(r2);
  const double rn = std::pow(r, -n_);        // r^{-n}
  const double rn2 = rn / r2;                // r^{-n-2}
  const Mat id = Mat::Identity(n_, n_);
  const Mat xx = x * x.transpose();

  FieldJet jet;
  const double bx = dipole_.dot(x);
  jet.value = 1.0 + a_ * r2 * rn + bx * rn;

  jet.grad = a_ * (2.0 - n_) * rn * x + rn * dipole_ - n_ * bx * rn2 * x;

  jet.hess = a_ * (2.0 - n_) * (rn * id - n_ * rn2 * xx);
  jet.hess += -n_ * rn2 * (dipole_ * x.transpose() + x * dipole_.transpose());
  jet.hess += -n_ * bx * (rn2 * id - (n_ + 2.0) * rn2 / r2 * xx);
  return jet;
}

nlohmann::json HarmonicFactor::to_json() const {
  return {{"kind", "harmonic"},
          {"a", a_},
          {"dipole", std::vector<double>(dipole_.data(), dipole_.data() + dipole_.size())}};
}

RadialField::RadialField(std::shared_ptr<const RadialFunction> profile)
    : profile_(std::move(profile)) {}

FieldJet RadialField::evaluate(const Vec& x) const {
  const int n = static_cast<int>(x.size());
  const double r = x.norm();
  const RadialJet p = profile_->at(r);
  FieldJet jet;
  jet.value = 1.0 + p.v;
  if (r == 0.0) {
    jet.grad = Vec::Zero(n);
    jet.hess = p.d2 * Mat::Identity(n, n);
    return jet;
  }
  const Vec unit = x / r;
  jet.grad = p.d1 * unit;
  const Mat radial = unit * unit.transpose();
  jet.hess = p.d2 * radial + (p.d1 / r) * (Mat::Identity(n, n) - radial);
  return jet;
}

QuadrupolePerturbation::QuadrupolePerturbation(int n, double amplitude, int axis)
    : n_(n), c_(amplitude), axis_(axis) {
  if (axis_ < 0 || axis_ >= n_) {
    throw Error(ErrorKind::ConfigInvalid, "perturbation axis out of range");
  }
}

void QuadrupolePerturbation::add_to(const Vec& x, int order, MetricJet& jet) const {
  const int n = n_;
  const int k = axis_;
  const double r2 = x.squaredNorm();
  const double s = n + 1.0;
  const double w = std::pow(r2, -0.5 * s);
  const double w1 = -s * w / r2;  // d_l w = w1 * x_l
  const Mat id = Mat::Identity(n, n);

  const Mat q = x(k) * x(k) * id + x * x.transpose();
  jet.g += c_ * w * q;
  if (order < 1) return;

  // dq[l] = d_l Q
  std::vector<Mat> dq(n, Mat::Zero(n, n));
  for (int l = 0; l < n; ++l) {
    if (l == k) dq[l] += 2.0 * x(k) * id;
    dq[l].row(l) += x.transpose();
    dq[l].col(l) += x;
  }
  for (int l = 0; l < n; ++l) {
    jet.first[l] += c_ * (dq[l] * w + q * (w1 * x(l)));
  }
  if (order < 2) return;

  for (int l = 0; l < n; ++l) {
    for (int m = l; m < n; ++m) {
      Mat ddq = Mat::Zero(n, n);
      if (l == k && m == k) ddq += 2.0 * id;
      ddq(l, m) += 1.0;
      ddq(m, l) += 1.0;
      const double wlm = w1 * (l == m ? 1.0 : 0.0) + s * (s + 2.0) * w / (r2 * r2) * x(l) * x(m);
      Mat term = ddq * w + dq[l] * (w1 * x(m)) + dq[m] * (w1 * x(l)) + q * wlm;
      jet.second[l * n + m] += c_ * term;
      if (m != l) jet.second[m * n + l] += c_ * term;
    }
  }
}

nlohmann::json QuadrupolePerturbation::to_json() const {
  return {{"kind", "quadrupole"}, {"c", c_}, {"axis", axis_}};
}

}  // namespace afmass
