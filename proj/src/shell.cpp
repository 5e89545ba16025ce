#include "afmass/shell.hpp"

#include <algorithm>
#include <cmath>

#include "afmass/error.hpp"
#include "afmass/quadrature.hpp"

namespace afmass {

namespace {

// Bump b(s) = (1 - w^2)^k with w = 4(s - 3/4), and its s-derivatives.
RadialJet bump(double s, int k) {
  if (s <= 0.5 || s >= 1.0) return {};
  const double w = 4.0 * (s - 0.75);
  const double z = 1.0 - w * w;
  const double dz = -8.0 * w;  // dz/ds
  const double ddz = -32.0;
  RadialJet j;
  j.v = std::pow(z, k);
  j.d1 = k * std::pow(z, k - 1) * dz;
  j.d2 = k * (k - 1) * std::pow(z, k - 2) * dz * dz + k * std::pow(z, k - 1) * ddz;
  return j;
}

const Rule1D& cell_rule() {
  static const Rule1D rule = gauss_legendre(12);
  return rule;
}

// Integral of f over [a, b] with the cached 12-point rule.
template <class F>
double integrate(F&& f, double a, double b) {
  const Rule1D& rule = cell_rule();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) s += rule.weights[j] * f(mid + half * rule.nodes[j]);
  return s * half;
}

}  // namespace

ShellProfile::ShellProfile(int n, int power) : n_(n), power_(power), c_(1.0) {
  if (n_ < 3) throw Error(ErrorKind::ConfigInvalid, "shell example needs n >= 3");
  if (power_ < 3) throw Error(ErrorKind::ConfigInvalid, "bump power must be >= 3");
  // Polynomial integrand: split [1/2, 1] into a few cells for exactness.
  double m = 0.0;
  for (int c = 0; c < 8; ++c) {
    const double a = 0.5 + c / 16.0, b = a + 1.0 / 16.0;
    m += integrate([&](double s) { return std::pow(s, n_ - 1) * bump(s, power_).v; }, a, b);
  }
  c_ = 1.0 / (unit_sphere_area(n_ - 1) * m);
}

RadialJet ShellProfile::at(double s) const {
  RadialJet j = bump(s, power_);
  j.v *= c_;
  j.d1 *= c_;
  j.d2 *= c_;
  return j;
}

ShellPotential::ShellPotential(std::shared_ptr<const ShellProfile> profile, double index,
                               int grid_nodes)
    : profile_(std::move(profile)), n_(profile_->dimension()), index_(index) {
  if (!(index_ > 0.0)) throw Error(ErrorKind::ConfigInvalid, "shell index must be positive");
  if (grid_nodes < 32) {
    throw Error(ErrorKind::GridTooCoarse,
                "shell profile needs at least 32 grid nodes across [i/2, i]");
  }
  a_ = 1.0 / ((n_ - 2.0) * unit_sphere_area(n_ - 1));

  const double lo = 0.5 * index_, hi = index_;
  nodes_.resize(grid_nodes);
  for (int k = 0; k < grid_nodes; ++k) nodes_[k] = lo + (hi - lo) * k / (grid_nodes - 1);
  nodes_.back() = hi;

  enclosed_.assign(grid_nodes, 0.0);
  for (int k = 1; k < grid_nodes; ++k) {
    enclosed_[k] = enclosed_[k - 1] +
                   integrate([&](double s) { return std::pow(s, n_ - 1) * source(s); },
                             nodes_[k - 1], nodes_[k]);
  }
  // v(i) = a i^{2-n}; integrate v' = -r^{1-n} M(r) inward.
  v_.assign(grid_nodes, 0.0);
  v_.back() = a_ * std::pow(hi, 2.0 - n_);
  for (int k = grid_nodes - 1; k > 0; --k) {
    const double drop = integrate(
        [&](double s) { return std::pow(s, 1.0 - n_) * enclosed(s); }, nodes_[k - 1], nodes_[k]);
    v_[k - 1] = v_[k] + drop;
  }
}

double ShellPotential::source(double r) const {
  return std::pow(index_, -static_cast<double>(n_)) * profile_->at(r / index_).v;
}

std::size_t ShellPotential::cell_of(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  if (k == 0) return 0;
  return std::min(k - 1, nodes_.size() - 2);
}

double ShellPotential::enclosed(double r) const {
  if (r <= nodes_.front()) return 0.0;
  if (r >= nodes_.back()) return enclosed_.back();
  const std::size_t k = cell_of(r);
  return enclosed_[k] +
         integrate([&](double s) { return std::pow(s, n_ - 1) * source(s); }, nodes_[k], r);
}

RadialJet ShellPotential::at(double r) const {
  RadialJet j;
  if (r >= index_) {
    j.v = a_ * std::pow(r, 2.0 - n_);
    j.d1 = (2.0 - n_) * a_ * std::pow(r, 1.0 - n_);
    j.d2 = (2.0 - n_) * (1.0 - n_) * a_ * std::pow(r, -static_cast<double>(n_));
    return j;
  }
  if (r <= nodes_.front()) {
    j.v = v_.front();
    return j;
  }
  const std::size_t k = cell_of(r);
  const double b = nodes_[k + 1];
  j.v = v_[k + 1] + integrate([&](double s) { return std::pow(s, 1.0 - n_) * enclosed(s); }, r, b);
  j.d1 = -std::pow(r, 1.0 - n_) * enclosed(r);
  j.d2 = -source(r) - (n_ - 1.0) * j.d1 / r;
  return j;
}

nlohmann::json ShellPotential::to_json() const {
  return {{"kind", "shell_potential"},
          {"index", index_},
          {"grid_nodes", static_cast<int>(nodes_.size())},
          {"profile", profile_->to_json()}};
}

ShellFamily ShellFamily::make(int n, double index, int grid_nodes, int power) {
  ShellFamily f;
  f.n = n;
  f.index = index;
  f.grid_nodes = grid_nodes;
  f.profile = std::make_shared<ShellProfile>(n, power);
  f.potential = std::make_shared<ShellPotential>(f.profile, index, grid_nodes);
  return f;
}

ShellFamily ShellFamily::from_json(int n, const nlohmann::json& params) {
  int power = 3;
  if (params.contains("profile")) {
    const auto& p = params["profile"];
    const std::string kind = p.value("kind", std::string("poly_bump"));
    if (kind != "poly_bump") throw Error(ErrorKind::ConfigInvalid, "unknown shell profile '" + kind + "'");
    power = p.value("power", 3);
  }
  return make(n, params.at("index").get<double>(), params.value("grid_nodes", 64), power);
}

nlohmann::json ShellFamily::to_json() const {
  return {{"index", index}, {"grid_nodes", grid_nodes}, {"profile", profile->to_json()}};
}

MetricSpec shell_metric(const ShellFamily& family) {
  // u = 1 + v > 0 holds since v > 0; check at the grid anyway.
  for (double v : family.potential->grid_values()) {
    if (!(1.0 + v > 0.0)) throw Error(ErrorKind::NonPositiveU, "shell conformal factor is not positive");
  }
  auto u = std::make_shared<RadialField>(family.potential);
  return MetricSpec(make_conformal_family(family.n, u, "shell", family.to_json()));
}

}  // namespace afmass
