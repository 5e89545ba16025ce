#include "afmass/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "afmass/error.hpp"
#include "afmass/mass.hpp"
#include "afmass/quadrature.hpp"

namespace afmass {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::ConfigInvalid, "cone parameter alpha must be positive");
}

class FlatWarp final : public Warp {
 public:
  explicit FlatWarp(double alpha) : alpha_(alpha) { check_alpha(alpha); }
  WarpJet at(double r, double) const override { return {alpha_ * r, alpha_, 0.0, 0.0}; }
  nlohmann::json to_json() const override { return {{"kind", "flat"}}; }
  double alpha() const override { return alpha_; }
  bool has_cap() const override { return alpha_ == 1.0; }

 private:
  double alpha_;
};

class RoundCapWarp final : public Warp {
 public:
  explicit RoundCapWarp(double alpha) : alpha_(alpha) {
    check_alpha(alpha);
    if (alpha_ < 1.0) r0_ = std::acos(alpha_);
    if (alpha_ > 1.0) r0_ = std::acosh(alpha_);
  }
  WarpJet at(double r, double) const override {
    if (alpha_ == 1.0) return {r, 1.0, 0.0, 0.0};
    const bool sphere = alpha_ < 1.0;
    if (r <= r0_) {
      if (sphere) return {std::sin(r), std::cos(r), -std::sin(r), 0.0};
      return {std::sinh(r), std::cosh(r), std::sinh(r), 0.0};
    }
    const double f0 = sphere ? std::sin(r0_) : std::sinh(r0_);
    return {f0 + alpha_ * (r - r0_), alpha_, 0.0, 0.0};
  }
  nlohmann::json to_json() const override { return {{"kind", "round_cap"}}; }
  double alpha() const override { return alpha_; }
  bool has_cap() const override { return true; }
  std::vector<double> breakpoints() const override {
    return r0_ > 0.0 ? std::vector<double>{r0_} : std::vector<double>{};
  }

 private:
  double alpha_;
  double r0_ = 0.0;
};

class SmoothCapWarp final : public Warp {
 public:
  SmoothCapWarp(double alpha, double width) : alpha_(alpha), w_(width) {
    check_alpha(alpha);
    if (!(w_ > 0.0)) throw Error(ErrorKind::ConfigInvalid, "cap width must be positive");
  }
  WarpJet at(double r, double) const override {
    const double e = std::exp(-(r * r) / (w_ * w_));
    const double c = 1.0 - alpha_;
    return {alpha_ * r + c * w_ * 0.5 * std::sqrt(std::numbers::pi) * std::erf(r / w_),
            alpha_ + c * e, -c * 2.0 * r / (w_ * w_) * e, 0.0};
  }
  nlohmann::json to_json() const override { return {{"kind", "smooth_cap"}, {"width", w_}}; }
  double alpha() const override { return alpha_; }
  bool has_cap() const override { return true; }

 private:
  double alpha_;
  double w_;
};

class PerturbedWarp final : public Warp {
 public:
  PerturbedWarp(std::shared_ptr<const Warp> base, double eps, double tau, double beta, int k)
      : base_(std::move(base)), eps_(eps), tau_(tau), beta_(beta), k_(k) {
    if (!(tau_ > 0.0)) throw Error(ErrorKind::ConfigInvalid, "perturbation decay tau must be positive");
    if (std::abs(eps_) * (1.0 + std::abs(beta_)) >= 1.0) {
      throw Error(ErrorKind::ConfigInvalid, "perturbation too large for a positive warp");
    }
  }
  WarpJet at(double r, double theta) const override {
    const WarpJet b = base_->at(r, theta);
    const double q = 1.0 + r * r;
    const double s = r * r * std::pow(q, -(1.0 + 0.5 * tau_));
    const double bq = std::pow(q, -(2.0 + 0.5 * tau_));
    const double a = 2.0 * r - tau_ * r * r * r;
    const double s1 = a * bq;
    const double s2 = (2.0 - 3.0 * tau_ * r * r) * bq - a * (4.0 + tau_) * r * bq / q;
    const double c = 1.0 + beta_ * std::cos(k_ * theta);
    const double ct = -beta_ * k_ * std::sin(k_ * theta);
    const double m = 1.0 + eps_ * s * c;
    WarpJet j;
    j.f = b.f * m;
    j.fr = b.fr * m + b.f * eps_ * s1 * c;
    j.frr = b.frr * m + 2.0 * b.fr * eps_ * s1 * c + b.f * eps_ * s2 * c;
    j.ft = b.ft * m + b.f * eps_ * s * ct;
    return j;
  }
  nlohmann::json to_json() const override {
    return {{"kind", "perturbed"}, {"eps", eps_}, {"tau", tau_}, {"beta", beta_}, {"k", k_},
            {"base", base_->to_json()}};
  }
  double alpha() const override { return base_->alpha(); }
  bool has_cap() const override { return base_->has_cap(); }
  std::vector<double> breakpoints() const override { return base_->breakpoints(); }
  double decay_order() const override { return tau_; }

 private:
  std::shared_ptr<const Warp> base_;
  double eps_, tau_, beta_;
  int k_;
};

class ScaledWarp final : public Warp {
 public:
  ScaledWarp(std::shared_ptr<const Warp> base, double factor) : base_(std::move(base)), l_(factor) {
    if (!(l_ > 0.0)) throw Error(ErrorKind::ConfigInvalid, "scale factor must be positive");
  }
  WarpJet at(double r, double theta) const override {
    const WarpJet b = base_->at(r / l_, theta);
    return {l_ * b.f, b.fr, b.frr / l_, l_ * b.ft};
  }
  nlohmann::json to_json() const override {
    return {{"kind", "scaled"}, {"factor", l_}, {"base", base_->to_json()}};
  }
  double alpha() const override { return base_->alpha(); }
  bool has_cap() const override { return base_->has_cap(); }
  std::vector<double> breakpoints() const override {
    auto b = base_->breakpoints();
    for (double& v : b) v *= l_;
    return b;
  }
  double decay_order() const override { return base_->decay_order(); }

 private:
  std::shared_ptr<const Warp> base_;
  double l_;
};

class Cone2DFamily final : public MetricFamily {
 public:
  explicit Cone2DFamily(ConicalSurface s) : s_(std::move(s)) {}
  int dimension() const override { return 2; }
  std::string name() const override { return "cone2d"; }
  nlohmann::json params_json() const override { return s_.to_json(); }
  Mat metric(const Vec& x) const override {
    const double r = x.norm();
    const double theta = std::atan2(x(1), x(0));
    const WarpJet w = s_.warp->at(r, theta);
    Vec e(2), t(2);
    e << x(0) / r, x(1) / r;
    t << -e(1), e(0);
    const double ratio = w.f / r;
    return e * e.transpose() + ratio * ratio * t * t.transpose();
  }
  std::optional<ExcludedBall> excluded() const override { return ExcludedBall{Vec::Zero(2), 0.0}; }
  double flux_decay_order() const override {
    const double tau = s_.warp->decay_order();
    return tau > 0.0 ? tau : 1.0;
  }

 private:
  ConicalSurface s_;
};

const Rule1D& panel_rule() {
  static const Rule1D rule = gauss_legendre(24);
  return rule;
}

}  // namespace

std::shared_ptr<const Warp> flat_warp(double alpha) { return std::make_shared<FlatWarp>(alpha); }
std::shared_ptr<const Warp> round_cap_warp(double alpha) { return std::make_shared<RoundCapWarp>(alpha); }
std::shared_ptr<const Warp> smooth_cap_warp(double alpha, double width) {
  return std::make_shared<SmoothCapWarp>(alpha, width);
}
std::shared_ptr<const Warp> perturbed_warp(std::shared_ptr<const Warp> base, double eps, double tau,
                                           double beta, int k) {
  return std::make_shared<PerturbedWarp>(std::move(base), eps, tau, beta, k);
}
std::shared_ptr<const Warp> scaled_warp(std::shared_ptr<const Warp> base, double factor) {
  return std::make_shared<ScaledWarp>(std::move(base), factor);
}

std::shared_ptr<const Warp> warp_from_json(double alpha, const nlohmann::json& profile) {
  const std::string kind = profile.value("kind", std::string("round_cap"));
  if (kind == "flat") return flat_warp(alpha);
  if (kind == "round_cap") return round_cap_warp(alpha);
  if (kind == "smooth_cap") return smooth_cap_warp(alpha, profile.value("width", 1.0));
  if (kind == "perturbed") {
    const auto base = warp_from_json(alpha, profile.value("base", nlohmann::json::object()));
    return perturbed_warp(base, profile.at("eps").get<double>(), profile.at("tau").get<double>(),
                          profile.value("beta", 0.0), profile.value("k", 2));
  }
  if (kind == "scaled") {
    return scaled_warp(warp_from_json(alpha, profile.at("base")), profile.at("factor").get<double>());
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown cone profile '" + kind + "'");
}

ConicalSurface ConicalSurface::from_json(const nlohmann::json& params) {
  try {
    ConicalSurface s;
    s.warp = warp_from_json(params.at("alpha").get<double>(),
                            params.value("profile", nlohmann::json::object()));
    s.chi = params.value("chi", 1.0);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("cone surface: ") + e.what());
  }
}

nlohmann::json ConicalSurface::to_json() const {
  return {{"alpha", alpha()}, {"chi", chi}, {"profile", warp->to_json()}};
}

MetricSpec cone_metric(const ConicalSurface& surface) {
  return MetricSpec(std::make_shared<Cone2DFamily>(surface), DerivativeMode::finite_difference);
}

double gauss_curvature_at(const ConicalSurface& surface, double r, double theta) {
  if (!(r > 0.0)) throw Error(ErrorKind::SingularPoint, "Gauss curvature requested at the origin");
  const WarpJet w = surface.warp->at(r, theta);
  return -w.frr / w.f;
}

double geodesic_curvature_integral(const ConicalSurface& surface, double r, int q) {
  if (!(r > 0.0)) throw Error(ErrorKind::ConfigInvalid, "circle radius must be positive");
  if (q < 2) throw Error(ErrorKind::ConfigInvalid, "quadrature resolution q must be >= 2");
  const int nodes = 2 * q;
  const double h = 2.0 * std::numbers::pi / nodes;
  double total = 0.0;
  for (int a = 0; a < nodes; ++a) {
    const WarpJet w = surface.warp->at(r, (a + 0.5) * h);
    // Polar chart: E = 1, G = f^2, Gamma^r_thetatheta = -f f_r.
    const double g = w.f * w.f;
    const double gamma_r = -w.f * w.fr;
    const double kappa = -gamma_r / g;
    total += kappa * std::sqrt(g) * h;
  }
  return total;
}

double total_gauss_curvature(const ConicalSurface& surface, double r, int q) {
  if (!surface.warp->has_cap()) {
    throw Error(ErrorKind::MissingCap, "bare cone tip: the disc integral needs a cap model");
  }
  if (q < 2) throw Error(ErrorKind::ConfigInvalid, "quadrature resolution q must be >= 2");
  // Panel edges: breakpoints, then doubling radii.
  std::vector<double> edges{0.0};
  for (double b : surface.warp->breakpoints())
    if (b < r) edges.push_back(b);
  for (double e = std::min(r, 0.25); e < r; e *= 2.0) edges.push_back(e);
  edges.push_back(r);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const Rule1D& rule = panel_rule();
  const int nodes = 2 * q;
  const double h = 2.0 * std::numbers::pi / nodes;
  double total = 0.0;
  for (int a = 0; a < nodes; ++a) {
    const double theta = (a + 0.5) * h;
    double radial = 0.0;
    for (std::size_t p = 1; p < edges.size(); ++p) {
      const double half = 0.5 * (edges[p] - edges[p - 1]);
      const double mid = 0.5 * (edges[p] + edges[p - 1]);
      if (half <= 0.0) continue;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const WarpJet w = surface.warp->at(mid + half * rule.nodes[j], theta);
        radial += rule.weights[j] * half * (-w.frr);  // K dA = -f_rr dr dtheta
      }
    }
    total += radial * h;
  }
  return total;
}

MassEstimate cone_mass(const ConicalSurface& surface, const std::vector<double>& radii, int q,
                       ConeMass* detail) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double tau = surface.warp->decay_order();
  const double p = tau > 0.0 ? tau : 1.0;
  std::vector<double> geo(radii.size()), gb(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    geo[k] = 1.0 - geodesic_curvature_integral(surface, radii[k], q) / two_pi;
    gb[k] = (total_gauss_curvature(surface, radii[k], q) - two_pi * (surface.chi - 1.0)) / two_pi;
  }
  MassEstimate a = fit_decay(radii, geo, p);
  const MassEstimate b = fit_decay(radii, gb, p);
  const double gap = std::abs(a.value - b.value);
  if (detail) *detail = {a.value, b.value, gap};
  if (gap > 1e-6 + a.error + b.error) {
    throw Error(ErrorKind::EstimatesDisagree, "geodesic-curvature and Gauss-Bonnet estimates differ by " +
                                                  std::to_string(gap));
  }
  return a;
}

}  // namespace afmass
