#include "afmass/metric.hpp"

#include <cmath>
#include <limits>

#include "afmass/error.hpp"
#include "afmass/metric_json.hpp"

namespace afmass {

namespace {

MetricJet zero_jet(int n, int order) {
  MetricJet jet;
  jet.g = Mat::Zero(n, n);
  if (order >= 1) jet.first.assign(n, Mat::Zero(n, n));
  if (order >= 2) jet.second.assign(n * n, Mat::Zero(n, n));
  return jet;
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

class EuclideanFamily final : public MetricFamily {
 public:
  explicit EuclideanFamily(int n) : n_(n) {}
  int dimension() const override { return n_; }
  std::string name() const override { return "euclidean"; }
  nlohmann::json params_json() const override { return nlohmann::json::object(); }
  Mat metric(const Vec&) const override { return Mat::Identity(n_, n_); }
  bool has_analytic_derivatives() const override { return true; }
  void analytic_jet(const Vec&, int order, MetricJet& jet) const override {
    jet = zero_jet(n_, order);
    jet.g.setIdentity();
  }
  double scalar_curvature_support_radius() const override { return 0.0; }

 private:
  int n_;
};

/// g = U^{4/(n-2)} delta.
class ConformalFamily : public MetricFamily {
 public:
  ConformalFamily(int n, std::shared_ptr<const ScalarField> u, std::optional<ExcludedBall> excluded)
      : n_(n), p_(4.0 / (n - 2.0)), u_(std::move(u)), excluded_(std::move(excluded)) {
    if (n_ < 3) throw Error(ErrorKind::ConfigInvalid, "conformally flat family needs n >= 3");
  }

  int dimension() const override { return n_; }
  std::string name() const override { return "conformally_flat"; }
  nlohmann::json params_json() const override { return {{"U", u_->to_json()}}; }

  Mat metric(const Vec& x) const override {
    const double u = u_->evaluate(x).value;
    check_u(u, x);
    return std::pow(u, p_) * Mat::Identity(n_, n_);
  }

  bool has_analytic_derivatives() const override { return true; }

  void analytic_jet(const Vec& x, int order, MetricJet& jet) const override {
    jet = zero_jet(n_, order);
    const FieldJet u = u_->evaluate(x);
    check_u(u.value, x);
    const double phi = std::pow(u.value, p_);
    jet.g.diagonal().setConstant(phi);
    if (order < 1) return;
    const double d1 = p_ * phi / u.value;
    for (int k = 0; k < n_; ++k) jet.first[k].diagonal().setConstant(d1 * u.grad(k));
    if (order < 2) return;
    const double d2 = p_ * (p_ - 1.0) * phi / (u.value * u.value);
    for (int k = 0; k < n_; ++k) {
      for (int l = k; l < n_; ++l) {
        const double v = d2 * u.grad(k) * u.grad(l) + d1 * u.hess(k, l);
        jet.second[k * n_ + l].diagonal().setConstant(v);
        jet.second[l * n_ + k].diagonal().setConstant(v);
      }
    }
  }

  std::optional<ExcludedBall> excluded() const override { return excluded_; }
  double flux_decay_order() const override { return u_->decay_order(n_); }
  std::vector<double> radial_breakpoints() const override { return u_->radial_breakpoints(); }
  double scalar_curvature_support_radius() const override {
    return u_->laplacian_support_radius();
  }

  const ScalarField& conformal_factor() const { return *u_; }

 protected:
  void check_u(double u, const Vec& x) const {
    if (!(u > 0.0)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "conformal factor U = " + std::to_string(u) + " at |x| = " +
                      std::to_string(x.norm()));
    }
  }

  int n_;
  double p_;
  std::shared_ptr<const ScalarField> u_;
  std::optional<ExcludedBall> excluded_;
};

class NamedConformalFamily final : public ConformalFamily {
 public:
  NamedConformalFamily(int n, std::shared_ptr<const ScalarField> u, std::string name,
                       nlohmann::json params, std::optional<ExcludedBall> excluded)
      : ConformalFamily(n, std::move(u), std::move(excluded)),
        name_(std::move(name)),
        params_(std::move(params)) {}
  std::string name() const override { return name_; }
  nlohmann::json params_json() const override { return params_; }

 private:
  std::string name_;
  nlohmann::json params_;
};

class SchwarzschildFamily final : public ConformalFamily {
 public:
  SchwarzschildFamily(int n, double m, double inner)
      : ConformalFamily(n, std::make_shared<HarmonicFactor>(n, 0.5 * m),
                        ExcludedBall{Vec::Zero(n), inner}),
        m_(m),
        inner_(inner) {}
  std::string name() const override { return "schwarzschild"; }
  nlohmann::json params_json() const override { return {{"m", m_}, {"inner_radius", inner_}}; }
  double scalar_curvature_support_radius() const override { return 0.0; }

 private:
  double m_;
  double inner_;
};

class HarmonicallyFlatFamily final : public ConformalFamily {
 public:
  HarmonicallyFlatFamily(int n, std::shared_ptr<const HarmonicFactor> u, double inner)
      : ConformalFamily(n, u, ExcludedBall{Vec::Zero(n), inner}), h_(std::move(u)) {}
  std::string name() const override { return "harmonically_flat"; }
  nlohmann::json params_json() const override {
    return {{"a", h_->monopole()}, {"dipole", to_std(h_->dipole())}};
  }
  double scalar_curvature_support_radius() const override { return 0.0; }

 private:
  std::shared_ptr<const HarmonicFactor> h_;
};

class AsymptoticallySchwarzschildFamily final : public MetricFamily {
 public:
  AsymptoticallySchwarzschildFamily(int n, double m, std::shared_ptr<const TensorPerturbation> h,
                                    double inner)
      : n_(n), m_(m), inner_(inner), schwarzschild_(n, m, inner), h_(std::move(h)) {}

  int dimension() const override { return n_; }
  std::string name() const override { return "asymptotically_schwarzschild"; }
  nlohmann::json params_json() const override {
    return {{"m", m_}, {"inner_radius", inner_}, {"perturbation", h_->to_json()}};
  }
  Mat metric(const Vec& x) const override {
    MetricJet jet;
    analytic_jet(x, 0, jet);
    return jet.g;
  }
  bool has_analytic_derivatives() const override { return true; }
  void analytic_jet(const Vec& x, int order, MetricJet& jet) const override {
    schwarzschild_.analytic_jet(x, order, jet);
    h_->add_to(x, order, jet);
  }
  std::optional<ExcludedBall> excluded() const override {
    return ExcludedBall{Vec::Zero(n_), inner_};
  }
  double flux_decay_order() const override {
    return std::min(n_ - 2.0, h_->decay_order() - (n_ - 2.0));
  }

 private:
  int n_;
  double m_;
  double inner_;
  SchwarzschildFamily schwarzschild_;
  std::shared_ptr<const TensorPerturbation> h_;
};

class ScaledFamily final : public MetricFamily {
 public:
  ScaledFamily(MetricSpec base, double lambda) : base_(std::move(base)), lambda_(lambda) {
    if (!(lambda_ > 0.0)) throw Error(ErrorKind::ConfigInvalid, "scale factor must be positive");
  }
  int dimension() const override { return base_.dimension(); }
  std::string name() const override { return "scaled"; }
  nlohmann::json params_json() const override {
    return {{"lambda", lambda_}, {"base", spec_to_json(base_)}};
  }
  Mat metric(const Vec& x) const override { return lambda_ * lambda_ * metric_at(base_, x); }
  bool has_analytic_derivatives() const override {
    return base_.derivative_mode() == DerivativeMode::analytic &&
           base_.family().has_analytic_derivatives();
  }
  void analytic_jet(const Vec& x, int order, MetricJet& jet) const override {
    jet = metric_derivatives_at(base_, x, order);
    const double s = lambda_ * lambda_;
    jet.g *= s;
    for (auto& m : jet.first) m *= s;
    for (auto& m : jet.second) m *= s;
  }
  std::optional<ExcludedBall> excluded() const override { return base_.family().excluded(); }
  double flux_decay_order() const override { return base_.family().flux_decay_order(); }
  double asymptotic_scale() const override {
    return lambda_ * lambda_ * base_.family().asymptotic_scale();
  }
  std::vector<double> radial_breakpoints() const override {
    return base_.family().radial_breakpoints();
  }
  double scalar_curvature_support_radius() const override {
    return base_.family().scalar_curvature_support_radius();
  }

 private:
  MetricSpec base_;
  double lambda_;
};

class TranslatedFamily final : public MetricFamily {
 public:
  TranslatedFamily(MetricSpec base, Vec offset) : base_(std::move(base)), offset_(std::move(offset)) {
    if (offset_.size() != base_.dimension()) {
      throw Error(ErrorKind::ConfigInvalid, "offset has wrong dimension");
    }
  }
  int dimension() const override { return base_.dimension(); }
  std::string name() const override { return "translated"; }
  nlohmann::json params_json() const override {
    return {{"offset", to_std(offset_)}, {"base", spec_to_json(base_)}};
  }
  Mat metric(const Vec& x) const override { return metric_at(base_, x + offset_); }
  bool has_analytic_derivatives() const override {
    return base_.derivative_mode() == DerivativeMode::analytic &&
           base_.family().has_analytic_derivatives();
  }
  void analytic_jet(const Vec& x, int order, MetricJet& jet) const override {
    jet = metric_derivatives_at(base_, x + offset_, order);
  }
  std::optional<ExcludedBall> excluded() const override {
    auto ball = base_.family().excluded();
    if (ball) ball->center -= offset_;
    return ball;
  }
  double flux_decay_order() const override { return base_.family().flux_decay_order(); }
  double asymptotic_scale() const override { return base_.family().asymptotic_scale(); }
  double scalar_curvature_support_radius() const override {
    const double r = base_.family().scalar_curvature_support_radius();
    return r < 0.0 ? r : r + offset_.norm();
  }

 private:
  MetricSpec base_;
  Vec offset_;
};

double horizon_radius(int n, double m) { return std::pow(0.5 * std::abs(m), 1.0 / (n - 2.0)); }

}  // namespace

void MetricFamily::analytic_jet(const Vec&, int, MetricJet&) const {
  throw Error(ErrorKind::ConfigInvalid,
              "family '" + name() + "' has no closed-form derivatives; use derivative_mode fd");
}

MetricSpec::MetricSpec(std::shared_ptr<const MetricFamily> family, DerivativeMode mode,
                       std::optional<double> fd_step)
    : family_(std::move(family)), mode_(mode), fd_step_(fd_step) {
  if (!family_) throw Error(ErrorKind::ConfigInvalid, "null metric family");
  if (family_->dimension() < 2) throw Error(ErrorKind::ConfigInvalid, "dimension must be >= 2");
  if (fd_step_ && !(*fd_step_ > 0.0)) {
    throw Error(ErrorKind::ConfigInvalid, "fd_step must be positive");
  }
}

bool MetricSpec::contains(const Vec& x) const {
  const auto ball = family_->excluded();
  if (!ball) return true;
  return (x - ball->center).norm() > ball->radius;
}

double MetricSpec::distance_to_boundary(const Vec& x) const {
  const auto ball = family_->excluded();
  if (!ball) return std::numeric_limits<double>::infinity();
  return (x - ball->center).norm() - ball->radius;
}

MetricSpec MetricSpec::euclidean(int n) {
  return MetricSpec(std::make_shared<EuclideanFamily>(n));
}

MetricSpec MetricSpec::schwarzschild(int n, double m, std::optional<double> inner_radius) {
  if (n < 3) throw Error(ErrorKind::ConfigInvalid, "Schwarzschild needs n >= 3");
  const double inner = inner_radius.value_or(horizon_radius(n, m));
  return MetricSpec(std::make_shared<SchwarzschildFamily>(n, m, inner));
}

MetricSpec MetricSpec::conformally_flat(int n, std::shared_ptr<const ScalarField> u) {
  std::optional<ExcludedBall> ball;
  if (u->singular_at_origin()) ball = ExcludedBall{Vec::Zero(n), 0.0};
  return MetricSpec(std::make_shared<ConformalFamily>(n, std::move(u), ball));
}

MetricSpec MetricSpec::harmonically_flat(int n, double a, Vec dipole) {
  auto u = std::make_shared<HarmonicFactor>(n, a, std::move(dipole));
  const double s = std::abs(a) + u->dipole().norm();
  const double inner = std::max(std::pow(s, 1.0 / (n - 2.0)), std::pow(s, 1.0 / (n - 1.0)));
  return MetricSpec(std::make_shared<HarmonicallyFlatFamily>(n, std::move(u), inner));
}

MetricSpec MetricSpec::asymptotically_schwarzschild(int n, double m,
                                                    std::shared_ptr<const TensorPerturbation> h,
                                                    std::optional<double> inner_radius) {
  if (n < 3) throw Error(ErrorKind::ConfigInvalid, "asymptotically Schwarzschild needs n >= 3");
  const double inner = inner_radius.value_or(horizon_radius(n, m));
  return MetricSpec(
      std::make_shared<AsymptoticallySchwarzschildFamily>(n, m, std::move(h), inner));
}

MetricSpec MetricSpec::scaled(const MetricSpec& base, double lambda) {
  return MetricSpec(std::make_shared<ScaledFamily>(base, lambda), base.derivative_mode(),
                    base.fd_step());
}

MetricSpec MetricSpec::translated(const MetricSpec& base, const Vec& offset) {
  return MetricSpec(std::make_shared<TranslatedFamily>(base, offset), base.derivative_mode(),
                    base.fd_step());
}

std::shared_ptr<const MetricFamily> make_conformal_family(int n,
                                                          std::shared_ptr<const ScalarField> u,
                                                          std::string name, nlohmann::json params,
                                                          std::optional<ExcludedBall> excluded) {
  return std::make_shared<NamedConformalFamily>(n, std::move(u), std::move(name),
                                                std::move(params), std::move(excluded));
}

Mat checked_inverse(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "metric failed Cholesky factorization");
  }
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

namespace {

void require_inside(const MetricSpec& spec, const Vec& x) {
  if (x.size() != spec.dimension()) {
    throw Error(ErrorKind::ConfigInvalid, "point has wrong dimension");
  }
  if (!spec.contains(x)) {
    throw Error(ErrorKind::SingularPoint,
                "point outside the chart of family '" + spec.family().name() + "'");
  }
}

void require_positive_definite(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "metric failed Cholesky factorization");
  }
}

}  // namespace

Mat metric_at(const MetricSpec& spec, const Vec& x) {
  require_inside(spec, x);
  Mat g = spec.family().metric(x);
  require_positive_definite(g);
  return g;
}

double default_fd_step(const Vec& x, int order) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(1.0, x.norm());
  return (order >= 2 ? std::pow(eps, 0.25) : std::cbrt(eps)) * scale;
}

MetricJet metric_derivatives_fd(const MetricSpec& spec, const Vec& x, int order, double step) {
  const int n = spec.dimension();
  require_inside(spec, x);
  const double h1 = step;
  const double h2 = step;
  if (spec.distance_to_boundary(x) <= 2.0 * std::max(h1, h2) * std::sqrt(2.0)) {
    throw Error(ErrorKind::StepTooLarge, "finite-difference stencil leaves the chart");
  }
  auto g_at = [&](const Vec& y) { return spec.family().metric(y); };

  MetricJet jet = zero_jet(n, order);
  jet.g = g_at(x);
  require_positive_definite(jet.g);
  if (order < 1) return jet;
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp(k) += h1;
    xm(k) -= h1;
    jet.first[k] = (g_at(xp) - g_at(xm)) / (2.0 * h1);
  }
  if (order < 2) return jet;
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp(k) += h2;
    xm(k) -= h2;
    jet.second[k * n + k] = (g_at(xp) - 2.0 * jet.g + g_at(xm)) / (h2 * h2);
    for (int l = k + 1; l < n; ++l) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp(k) += h2; pp(l) += h2;
      pm(k) += h2; pm(l) -= h2;
      mp(k) -= h2; mp(l) += h2;
      mm(k) -= h2; mm(l) -= h2;
      const Mat d = (g_at(pp) - g_at(pm) - g_at(mp) + g_at(mm)) / (4.0 * h2 * h2);
      jet.second[k * n + l] = d;
      jet.second[l * n + k] = d;
    }
  }
  return jet;
}

MetricJet metric_derivatives_at(const MetricSpec& spec, const Vec& x, int order) {
  if (order < 0 || order > 2) throw Error(ErrorKind::ConfigInvalid, "derivative order must be 0..2");
  if (spec.derivative_mode() == DerivativeMode::analytic) {
    require_inside(spec, x);
    MetricJet jet;
    spec.family().analytic_jet(x, order, jet);
    require_positive_definite(jet.g);
    return jet;
  }
  if (spec.fd_step()) return metric_derivatives_fd(spec, x, order, *spec.fd_step());
  if (order < 2) return metric_derivatives_fd(spec, x, order, default_fd_step(x, 1));
  // First derivatives at the eps^{1/3} step, second at eps^{1/4}.
  MetricJet jet = metric_derivatives_fd(spec, x, 2, default_fd_step(x, 2));
  const MetricJet first = metric_derivatives_fd(spec, x, 1, default_fd_step(x, 1));
  jet.first = first.first;
  return jet;
}

PointwiseCurvature curvature_from_jet(const MetricJet& jet) {
  const int n = jet.dimension();
  const Mat ginv = checked_inverse(jet.g);
  PointwiseCurvature out;
  out.n = n;
  out.christoffel.assign(n * n * n, 0.0);

  // Lowered symbols Gamma_{l,ij}, then raised.
  std::vector<double> lower(n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lower[(l * n + i) * n + j] =
            0.5 * (jet.d(i)(j, l) + jet.d(j)(i, l) - jet.d(l)(i, j));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * lower[(l * n + i) * n + j];
        out.christoffel[(k * n + i) * n + j] = s;
      }
  auto gam = [&](int k, int i, int j) { return out.christoffel[(k * n + i) * n + j]; };

  // d_k Gamma^k_ij = 1/2 g^{kl}(d_k d_i g_jl + d_k d_j g_il - d_k d_l g_ij) - V_b Gamma^b_ij
  Mat div_gamma = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) *
               (jet.dd(k, i)(j, l) + jet.dd(k, j)(i, l) - jet.dd(k, l)(i, j));
      div_gamma(i, j) = 0.5 * s;
    }
  Vec v = Vec::Zero(n);
  for (int b = 0; b < n; ++b)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a) v(b) += ginv(k, a) * jet.d(k)(a, b);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += v(b) * gam(b, i, j);
      div_gamma(i, j) -= s;
      div_gamma(j, i) = div_gamma(i, j);
    }

  // d_j Gamma^k_ik = 1/2 d_j (g^{ab} d_i g_ab)
  Mat grad_trace = Mat::Zero(n, n);
  std::vector<Mat> ginv_dg(n);
  for (int k = 0; k < n; ++k) ginv_dg[k] = ginv * jet.d(k);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double second = (ginv.cwiseProduct(jet.dd(i, j))).sum();
      const double first = (ginv_dg[j].cwiseProduct(ginv_dg[i].transpose())).sum();
      grad_trace(i, j) = 0.5 * (second - first);
      grad_trace(j, i) = grad_trace(i, j);
    }

  Vec contracted = Vec::Zero(n);  // Gamma^k_kl
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) contracted(l) += gam(k, k, l);

  out.ricci = div_gamma - grad_trace;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double q = 0.0;
      for (int l = 0; l < n; ++l) q += contracted(l) * gam(l, i, j);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) q -= gam(k, j, l) * gam(l, i, k);
      out.ricci(i, j) += q;
      if (j != i) out.ricci(j, i) = out.ricci(i, j);
    }
  out.scalar = ginv.cwiseProduct(out.ricci).sum();
  return out;
}

PointwiseCurvature curvature_at(const MetricSpec& spec, const Vec& x) {
  return curvature_from_jet(metric_derivatives_at(spec, x, 2));
}

double conformal_scalar_curvature_hypersurface(double conformal_u, double base_scalar,
                                               double laplacian_psi, double grad_psi_squared,
                                               int n) {
  if (!(conformal_u > 0.0)) {
    throw Error(ErrorKind::NonPositiveConformalFactor, "U must be positive");
  }
  const double e_minus_2psi = std::pow(conformal_u, -4.0 / (n - 2.0));
  return e_minus_2psi * (base_scalar - 2.0 * (n - 2.0) * laplacian_psi -
                         (n - 3.0) * (n - 2.0) * grad_psi_squared);
}

}  // namespace afmass
