#include "afmass/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "afmass/error.hpp"
#include "afmass/format.hpp"

namespace afmass {

std::string to_csv_row(const SphereReport& s) {
  std::ostringstream out;
  out << fmt_num(s.r) << ',' << fmt_num(s.area) << ',' << fmt_num(s.H_min) << ','
      << fmt_num(s.H_max) << ',' << fmt_num(s.maxH2) << ',' << fmt_num(s.rho_min) << ','
      << fmt_num(s.rho_max) << ',' << s.q;
  return out.str();
}

Mat tangent_basis(const Vec& p) {
  // Householder reflection mapping e_1 to p; its other columns span p-perp.
  const int n = static_cast<int>(p.size());
  Vec v = p;
  const double sign = p(0) >= 0.0 ? 1.0 : -1.0;
  v(0) += sign;
  const double vv = v.squaredNorm();
  Mat h = Mat::Identity(n, n) - (2.0 / vv) * v * v.transpose();
  return h.rightCols(n - 1);
}

namespace {

void check_radius(const MetricSpec& spec, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::ConfigInvalid, "sphere radius must be positive");
  const auto ball = spec.family().excluded();
  if (ball && ball->center.norm() + ball->radius >= r) {
    throw Error(ErrorKind::SingularPoint, "coordinate sphere meets the excluded region");
  }
}

void check_angles(const Vec& phi) {
  const double tol = 1e-12;
  for (int j = 0; j + 1 < phi.size(); ++j) {
    if (std::abs(std::sin(phi(j))) < tol) {
      throw Error(ErrorKind::PoleEvaluation, "angular chart evaluated at a pole");
    }
  }
}

// Columns: d x / d phi^alpha divided by r.
Mat angular_frame(const Vec& phi) {
  const int d = static_cast<int>(phi.size());
  const int n = d + 1;
  Mat e = Mat::Zero(n, d);
  // x^j is the product of sin(phi_l) for l < j, times cos(phi_j) when j < d.
  for (int j = 0; j < n; ++j) {
    const int last = std::min(j, d - 1);
    for (int a = 0; a <= last; ++a) {
      double val = 1.0;
      for (int l = 0; l < std::min(j, d); ++l) val *= (l == a) ? std::cos(phi(l)) : std::sin(phi(l));
      if (j < d) val *= (j == a) ? -std::sin(phi(j)) : std::cos(phi(j));
      e(j, a) = val;
    }
  }
  return e;
}

}  // namespace

Mat induced_metric_at(const MetricSpec& spec, double r, const Vec& phi) {
  if (phi.size() != spec.dimension() - 1) {
    throw Error(ErrorKind::ConfigInvalid, "angle vector has wrong length");
  }
  check_angles(phi);
  check_radius(spec, r);
  const Vec x = r * sphere_point(phi);
  const Mat e = angular_frame(phi);
  return r * r * e.transpose() * metric_at(spec, x) * e;
}

MetricJet induced_metric_jet(const MetricSpec& spec, double r, const Vec& p) {
  const int n = spec.dimension();
  const int d = n - 1;
  const Mat t = tangent_basis(p);
  const MetricJet amb = metric_derivatives_at(spec, r * p, 2);

  const Mat gt = amb.g * t;
  const Mat s = t.transpose() * gt;               // S_ab
  const Vec pg = amb.g * p;
  const Vec pt = t.transpose() * pg;              // P_a
  const double pp = p.dot(pg);

  // G_mu = sum_k t_mu^k d_k g
  std::vector<Mat> gmu(d, Mat::Zero(n, n));
  Mat gp = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < d; ++m) gmu[m] += t(k, m) * amb.first[k];
    gp += p(k) * amb.first[k];
  }
  std::vector<Mat> gmu_t(d);   // T^T G_mu T
  Mat q(d, d);                 // Q_{mu a} = p^T G_mu t_a
  for (int m = 0; m < d; ++m) {
    gmu_t[m] = t.transpose() * gmu[m] * t;
    q.row(m) = (p.transpose() * gmu[m] * t);
  }
  const Mat gp_t = t.transpose() * gp * t;

  // Hs_{mu nu} = T^T (sum_kl t_mu^k t_nu^l d_k d_l g) T
  std::vector<Mat> w(n * d, Mat::Zero(n, n));  // w[k*d+nu] = sum_l t_nu^l dd(k,l)
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Mat& h = amb.dd(k, l);
      for (int nu = 0; nu < d; ++nu) w[k * d + nu] += t(l, nu) * h;
    }

  const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
  MetricJet jet;
  jet.g = r2 * s;
  jet.first.assign(d, Mat::Zero(d, d));
  jet.second.assign(d * d, Mat::Zero(d, d));
  for (int m = 0; m < d; ++m) {
    Mat& f = jet.first[m];
    f = r3 * gmu_t[m];
    for (int b = 0; b < d; ++b) {
      f(m, b) -= r2 * pt(b);
      f(b, m) -= r2 * pt(b);
    }
  }
  auto kd = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int m = 0; m < d; ++m) {
    for (int nu = m; nu < d; ++nu) {
      Mat hs_amb = Mat::Zero(n, n);
      for (int k = 0; k < n; ++k) hs_amb += t(k, m) * w[k * d + nu];
      Mat out = r4 * (t.transpose() * hs_amb * t);
      if (m == nu) out -= r3 * gp_t + 2.0 * r2 * s;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          double v = 0.0;
          v -= r2 * (kd(a, m) * s(nu, b) + kd(a, nu) * s(m, b));
          v -= r2 * (kd(b, m) * s(a, nu) + kd(b, nu) * s(a, m));
          v -= r3 * (kd(a, m) * q(nu, b) + kd(b, m) * q(nu, a));
          v -= r3 * (kd(a, nu) * q(m, b) + kd(b, nu) * q(m, a));
          v += r2 * pp * (kd(a, m) * kd(b, nu) + kd(a, nu) * kd(b, m));
          out(a, b) += v;
        }
      }
      jet.second[m * d + nu] = out;
      if (nu != m) jet.second[nu * d + m] = out;
    }
  }
  return jet;
}

double sphere_area(const MetricSpec& spec, double r, int q) {
  check_radius(spec, r);
  const int n = spec.dimension();
  const SphereGrid grid = sphere_grid(n, q, kFirstOrderBudget);
  std::vector<double> terms(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vec& p = grid.directions[i];
    const Mat t = tangent_basis(p);
    const Mat s = t.transpose() * metric_at(spec, r * p) * t;
    terms[i] = grid.weights[i] * std::sqrt(s.determinant());
  });
  return ordered_sum(terms) * std::pow(r, n - 1);
}

double mean_curvature_at_point(const MetricSpec& spec, double r, const Vec& p) {
  check_radius(spec, r);
  const int n = spec.dimension();
  const MetricJet jet = metric_derivatives_at(spec, r * p, 1);
  const Mat ginv = checked_inverse(jet.g);
  const Vec& nvec = p;  // dF = x / r
  const Vec big_n = ginv * nvec;
  const double s2 = nvec.dot(big_n);
  if (!(s2 > 0.0)) throw Error(ErrorKind::DegenerateNormal, "gradient of |x| is degenerate");
  const double s = std::sqrt(s2);

  // d_j n_i = (delta_ij - n_i n_j) / r
  const Mat dn = (Mat::Identity(n, n) - nvec * nvec.transpose()) / r;
  double div_n = 0.0;   // d_i N^i
  Vec ds = Vec::Zero(n);  // d_j s
  double trace_gamma = 0.0;  // Gamma^i_ik N^k
  for (int j = 0; j < n; ++j) {
    const Vec dg_n = jet.first[j] * big_n;
    const Vec dbig_n = -ginv * dg_n + ginv * dn.col(j);
    div_n += dbig_n(j);
    ds(j) = (dn.col(j).dot(big_n) - 0.5 * big_n.dot(dg_n)) / s;
    trace_gamma += 0.5 * ginv.cwiseProduct(jet.first[j]).sum() * big_n(j);
  }
  return div_n / s - big_n.dot(ds) / s2 + trace_gamma / s;
}

double mean_curvature_at(const MetricSpec& spec, double r, const Vec& phi) {
  check_angles(phi);
  return mean_curvature_at_point(spec, r, sphere_point(phi));
}

double intrinsic_scalar_curvature_at_point(const MetricSpec& spec, double r, const Vec& p) {
  check_radius(spec, r);
  if (spec.dimension() < 3) return 0.0;
  return curvature_from_jet(induced_metric_jet(spec, r, p)).scalar;
}

double intrinsic_scalar_curvature_at(const MetricSpec& spec, double r, const Vec& phi) {
  check_angles(phi);
  return intrinsic_scalar_curvature_at_point(spec, r, sphere_point(phi));
}

double sphere_laplacian_at_point(const MetricSpec& spec, const ScalarField& f, double r,
                                 const Vec& p) {
  const int n = spec.dimension();
  const int d = n - 1;
  const Mat t = tangent_basis(p);
  const FieldJet u = f.evaluate(r * p);
  const MetricJet gam = induced_metric_jet(spec, r, p);
  const PointwiseCurvature c = curvature_from_jet(gam);
  const Mat ginv = checked_inverse(gam.g);
  // Chart derivatives of f(X(y)) at y = 0.
  const Vec f1 = r * t.transpose() * u.grad;
  Mat f2 = r * r * t.transpose() * u.hess * t;
  f2.diagonal().array() -= r * u.grad.dot(p);
  double lap = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double v = f2(a, b);
      for (int m = 0; m < d; ++m) v -= c.gamma(m, a, b) * f1(m);
      lap += ginv(a, b) * v;
    }
  return lap;
}

SphereReport sphere_report(const MetricSpec& spec, double r, int q) {
  check_radius(spec, r);
  const int n = spec.dimension();
  const SphereGrid grid = sphere_grid(n, q, kSecondOrderBudget);
  std::vector<double> area(grid.size()), h(grid.size()), rho(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vec& p = grid.directions[i];
    const Mat t = tangent_basis(p);
    const Mat s = t.transpose() * metric_at(spec, r * p) * t;
    area[i] = grid.weights[i] * std::sqrt(s.determinant());
    h[i] = mean_curvature_at_point(spec, r, p);
    rho[i] = intrinsic_scalar_curvature_at_point(spec, r, p);
  });
  SphereReport rep;
  rep.r = r;
  rep.q = grid.q;
  rep.area = ordered_sum(area) * std::pow(r, n - 1);
  rep.H_min = *std::min_element(h.begin(), h.end());
  rep.H_max = *std::max_element(h.begin(), h.end());
  rep.maxH2 = 0.0;
  for (double v : h) rep.maxH2 = std::max(rep.maxH2, v * v);
  rep.rho_min = *std::min_element(rho.begin(), rho.end());
  rep.rho_max = *std::max_element(rho.begin(), rho.end());
  return rep;
}

}  // namespace afmass
