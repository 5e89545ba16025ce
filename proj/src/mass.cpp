#include "afmass/mass.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "afmass/error.hpp"
#include "afmass/format.hpp"
#include "afmass/quadrature.hpp"

namespace afmass {

bool operator==(const MassEstimate& a, const MassEstimate& b) {
  return a.value == b.value && a.error == b.error && a.radii == b.radii && a.raw == b.raw &&
         a.model.c0 == b.model.c0 && a.model.c1 == b.model.c1 && a.model.p == b.model.p;
}

nlohmann::json to_json(const MassEstimate& m) {
  return {{"value", m.value},
          {"error", m.error},
          {"radii", m.radii},
          {"raw", m.raw},
          {"model", {{"c0", m.model.c0}, {"c1", m.model.c1}, {"p", m.model.p}}}};
}

MassEstimate mass_estimate_from_json(const nlohmann::json& doc) {
  try {
    MassEstimate m;
    m.value = doc.at("value").get<double>();
    m.error = doc.at("error").get<double>();
    m.radii = doc.at("radii").get<std::vector<double>>();
    m.raw = doc.at("raw").get<std::vector<double>>();
    const auto& model = doc.at("model");
    m.model = {model.at("c0").get<double>(), model.at("c1").get<double>(),
               model.at("p").get<double>()};
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("mass estimate: ") + e.what());
  }
}

MassEstimate fit_decay(const std::vector<double>& radii, const std::vector<double>& raw, double p) {
  if (radii.size() < 3 || radii.size() != raw.size()) {
    throw Error(ErrorKind::ConfigInvalid, "extrapolation needs at least three radii");
  }
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] > radii[k - 1])) throw Error(ErrorKind::ConfigInvalid, "radii must increase strictly");
  }
  if (!(radii.front() > 0.0)) throw Error(ErrorKind::ConfigInvalid, "radii must be positive");
  const auto m = static_cast<Eigen::Index>(radii.size());
  Mat a(m, 2);
  Vec b(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    a(k, 0) = 1.0;
    a(k, 1) = std::pow(radii[k], -p);
    b(k) = raw[k];
  }
  const double spread = a.col(1).maxCoeff() - a.col(1).minCoeff();
  if (!(spread > 1e-6 * a.col(1).maxCoeff())) {
    throw Error(ErrorKind::FitIllConditioned, "radii too clustered for the decay fit");
  }
  const Vec c = a.colPivHouseholderQr().solve(b);
  const Vec res = a * c - b;
  MassEstimate est;
  est.radii = radii;
  est.raw = raw;
  est.model = {c(0), c(1), p};
  est.value = c(0);
  est.error = std::abs(raw.back() - c(0)) + std::sqrt(res.squaredNorm() / static_cast<double>(m));
  if (!std::isfinite(est.value)) throw Error(ErrorKind::ComputationFailed, "decay fit is not finite");
  return est;
}

double adm_flux(const MetricSpec& spec, double r, int q) {
  const int n = spec.dimension();
  const SphereGrid grid = sphere_grid(n, q, kFirstOrderBudget);
  std::vector<double> terms(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const Vec& p = grid.directions[k];
    const MetricJet jet = metric_derivatives_at(spec, r * p, 1);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += jet.first[i](i, j) - jet.first[j](i, i);
      s += v * p(j);
    }
    terms[k] = grid.weights[k] * s;
  });
  const double scale = spec.family().asymptotic_scale();
  const double norm = 2.0 * (n - 1.0) * unit_sphere_area(n - 1);
  return ordered_sum(terms) * std::pow(r, n - 1) / norm * std::pow(scale, 0.5 * (n - 4));
}

MassEstimate adm_mass(const MetricSpec& spec, const std::vector<double>& radii, int q) {
  const int n = spec.dimension();
  const double p = std::min(n - 2.0, spec.family().flux_decay_order());
  std::vector<double> raw(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) raw[k] = adm_flux(spec, radii[k], q);
  return fit_decay(radii, raw, p > 0.0 ? p : 1.0);
}

FgValue fg_from_report(const SphereReport& rep, int n) {
  if (rep.rho_min == 0.0) throw Error(ErrorKind::ZeroRhoMin, "minimum induced scalar curvature is zero");
  const double ratio = (n - 2.0) / (n - 1.0);
  FgValue v;
  v.report = rep;
  v.value = 0.5 * std::pow(rep.area / unit_sphere_area(n - 1), (n - 2.0) / (n - 1.0)) *
            (1.0 - ratio * rep.maxH2 / rep.rho_min);
  v.margin = rep.rho_min - ratio * rep.maxH2;
  v.hypothesis_holds = v.margin > 0.0;
  v.flagged = rep.rho_min < 0.0;
  return v;
}

FgValue fg(const MetricSpec& spec, double r, int q) {
  if (spec.dimension() < 3) throw Error(ErrorKind::ConfigInvalid, "F_g needs n >= 3");
  return fg_from_report(sphere_report(spec, r, q), spec.dimension());
}

MassEstimate fg_limit(const MetricSpec& spec, const std::vector<double>& radii, int q) {
  std::vector<double> raw(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) raw[k] = fg(spec, radii[k], q).value;
  return fit_decay(radii, raw, 1.0);
}

PenroseCheck penrose_like_check(const MetricSpec& spec, double r, int q, const MassEstimate& mass) {
  const int n = spec.dimension();
  if (n < 3 || n > 7) throw Error(ErrorKind::ConfigInvalid, "the inequality check needs 3 <= n <= 7");
  const FgValue v = fg(spec, r, q);
  PenroseCheck c;
  c.hypothesis_holds = v.hypothesis_holds;
  c.fg_value = v.value;
  c.mass_value = mass.value;
  c.tolerance = 1e-2 + mass.error;
  c.inequality_holds = mass.value >= v.value - c.tolerance;
  return c;
}

std::string fg_profile_row(const FgValue& v) {
  std::ostringstream out;
  out << fmt_num(v.report.r) << ',' << fmt_num(v.value) << ',' << fmt_num(v.report.area) << ','
      << fmt_num(v.report.maxH2) << ',' << fmt_num(v.report.rho_min) << ','
      << (v.hypothesis_holds ? "true" : "false");
  return out.str();
}

}  // namespace afmass
