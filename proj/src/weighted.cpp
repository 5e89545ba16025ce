#include "afmass/weighted.hpp"

#include <algorithm>
#include <cmath>

#include "afmass/error.hpp"
#include "afmass/quadrature.hpp"

namespace afmass {

namespace {

constexpr std::size_t kVolumeBudget = std::size_t{1} << 10;

std::vector<double> log_radii(const WeightedNormParams& p) {
  if (!(p.inner_radius > 0.0) || p.radii_per_decade < 1 || p.decades < 1) {
    throw Error(ErrorKind::ConfigInvalid, "weighted grid is empty");
  }
  const int count = p.radii_per_decade * p.decades + 1;
  std::vector<double> r(count);
  for (int k = 0; k < count; ++k) r[k] = p.inner_radius * std::pow(10.0, double(k) / p.radii_per_decade);
  return r;
}

double weighted_terms(double rad, double tau, int k, double value, const Vec& grad, const Mat& hess) {
  double m = std::pow(rad, tau) * std::abs(value);
  if (k >= 1) m = std::max(m, std::pow(rad, 1.0 + tau) * grad.cwiseAbs().maxCoeff());
  if (k >= 2) m = std::max(m, std::pow(rad, 2.0 + tau) * hess.cwiseAbs().maxCoeff());
  return m;
}

const Rule1D& radial_rule() {
  static const Rule1D rule = gauss_legendre(16);
  return rule;
}

// Radial panel edges on [lo, hi]: breakpoints plus a doubling sequence.
std::vector<double> panel_edges(double lo, double hi, std::vector<double> breaks) {
  std::vector<double> e{lo, hi};
  double start = lo > 0.0 ? lo : std::min(hi, 0.125);
  for (double r = start; r < hi; r *= std::sqrt(2.0)) e.push_back(r);
  for (double b : breaks)
    if (b > lo && b < hi) e.push_back(b);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

// Spherical average times area: A(r) = r^{n-1} int_{S^{n-1}} f(r p) dOmega.
double radial_density(const std::function<double(const Vec&)>& f, const SphereGrid& grid, double r) {
  std::vector<double> t(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { t[k] = grid.weights[k] * f(r * grid.directions[k]); });
  return ordered_sum(t) * std::pow(r, grid.n - 1);
}

double integrate_radially(const std::function<double(const Vec&)>& f, const SphereGrid& grid,
                          const std::vector<double>& edges) {
  const Rule1D& rule = radial_rule();
  double total = 0.0;
  for (std::size_t p = 1; p < edges.size(); ++p) {
    const double half = 0.5 * (edges[p] - edges[p - 1]);
    const double mid = 0.5 * (edges[p] + edges[p - 1]);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      total += rule.weights[j] * half * radial_density(f, grid, mid + half * rule.nodes[j]);
    }
  }
  return total;
}

// Power-law tail int_R^infinity A(r) dr from A(R/2) and A(R).
double power_tail(double a_half, double a_full, double r) {
  if (a_full == 0.0) return 0.0;
  if (a_half == 0.0 || (a_half > 0.0) != (a_full > 0.0)) {
    throw Error(ErrorKind::TailNotNegligible, "integrand changes sign near the outer radius");
  }
  const double s = std::log2(a_half / a_full);
  if (!(s > 1.05)) {
    throw Error(ErrorKind::TailNotNegligible, "integrand does not decay fast enough beyond the outer radius");
  }
  return a_full * r / (s - 1.0);
}

double inner_radius_for(const MetricSpec& spec) {
  const auto ball = spec.family().excluded();
  if (!ball) return 0.0;
  const double c = ball->center.norm();
  return ball->radius > 0.0 ? c + 2.0 * ball->radius : c + 1.0;
}

}  // namespace

double weighted_seminorm(const std::function<FieldJet(const Vec&)>& f, int n,
                         const WeightedNormParams& params) {
  if (params.k < 0 || params.k > 2) throw Error(ErrorKind::ConfigInvalid, "weighted norm order must be 0..2");
  const auto radii = log_radii(params);
  const SphereGrid grid = sphere_grid(n, std::max(2, params.q));
  std::vector<double> best(radii.size(), 0.0);
  parallel_for(radii.size(), [&](std::size_t i) {
    for (const Vec& p : grid.directions) {
      const FieldJet j = f(radii[i] * p);
      best[i] = std::max(best[i], weighted_terms(radii[i], params.tau, params.k, j.value, j.grad, j.hess));
    }
  });
  return *std::max_element(best.begin(), best.end());
}

double weighted_seminorm(const ScalarField& f, int n, const WeightedNormParams& params) {
  return weighted_seminorm([&](const Vec& x) { return f.evaluate(x); }, n, params);
}

double weighted_metric_seminorm(const MetricSpec& spec, const WeightedNormParams& params) {
  const int n = spec.dimension();
  const auto radii = log_radii(params);
  const SphereGrid grid = sphere_grid(n, std::max(2, params.q));
  std::vector<double> best(radii.size(), 0.0);
  parallel_for(radii.size(), [&](std::size_t i) {
    for (const Vec& p : grid.directions) {
      const MetricJet jet = metric_derivatives_at(spec, radii[i] * p, std::max(params.k, 1));
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          Vec grad(n);
          Mat hess = Mat::Zero(n, n);
          for (int k = 0; k < n; ++k) grad(k) = jet.first[k](a, b);
          if (params.k >= 2)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) hess(k, l) = jet.dd(k, l)(a, b);
          const double dev = jet.g(a, b) - (a == b ? 1.0 : 0.0);
          best[i] = std::max(best[i], weighted_terms(radii[i], params.tau, params.k, dev, grad, hess));
        }
    }
  });
  return *std::max_element(best.begin(), best.end());
}

double d_operator(const MetricJet& jet) {
  const int n = jet.dimension();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += jet.dd(i, j)(i, j) - jet.dd(j, j)(i, i);
  return s;
}

double d_operator_at(const MetricSpec& spec, const Vec& x) {
  return d_operator(metric_derivatives_at(spec, x, 2));
}

DivergenceMass mass_via_divergence(const MetricSpec& spec, double outer_radius, int q) {
  const int n = spec.dimension();
  DivergenceMass out;
  out.inner_radius = inner_radius_for(spec);
  if (!(outer_radius > 2.0 * out.inner_radius)) {
    throw Error(ErrorKind::ConfigInvalid, "outer radius must exceed twice the inner radius");
  }
  const double norm = 2.0 * (n - 1.0) * unit_sphere_area(n - 1);
  const double scale = std::pow(spec.family().asymptotic_scale(), 0.5 * (n - 4));
  const SphereGrid grid = sphere_grid(n, q, kVolumeBudget);
  auto dfun = [&](const Vec& x) { return d_operator_at(spec, x); };

  if (out.inner_radius > 0.0) out.inner_flux = adm_flux(spec, out.inner_radius, q);
  const auto edges = panel_edges(out.inner_radius, outer_radius, spec.family().radial_breakpoints());
  out.volume = integrate_radially(dfun, grid, edges) / norm * scale;
  const double a_half = radial_density(dfun, grid, 0.5 * outer_radius);
  const double a_full = radial_density(dfun, grid, outer_radius);
  out.tail = power_tail(a_half, a_full, outer_radius) / norm * scale;

  const double f_full = adm_flux(spec, outer_radius, q);
  const double f_half = adm_flux(spec, 0.5 * outer_radius, q);
  if (std::abs(f_full - f_half) > 0.05 * std::max(1.0, std::abs(f_full))) {
    throw Error(ErrorKind::TailNotNegligible, "boundary flux still moving at the outer radius");
  }
  out.value = out.inner_flux + out.volume + out.tail;
  return out;
}

double matter_integral(const MetricSpec& spec, double outer_radius, int q) {
  const int n = spec.dimension();
  const double norm = 2.0 * (n - 1.0) * unit_sphere_area(n - 1);
  const double lo = inner_radius_for(spec);
  const double support = spec.family().scalar_curvature_support_radius();
  if (support == 0.0) return 0.0;  // scalar flat on the chart
  const double hi = support > 0.0 ? std::min(support, outer_radius) : outer_radius;
  if (!(hi > lo)) return 0.0;
  const SphereGrid grid = sphere_grid(n, q, kVolumeBudget);
  auto rfun = [&](const Vec& x) {
    const MetricJet jet = metric_derivatives_at(spec, x, 2);
    return curvature_from_jet(jet).scalar * std::sqrt(jet.g.determinant());
  };
  const auto edges = panel_edges(lo, hi, spec.family().radial_breakpoints());
  double total = integrate_radially(rfun, grid, edges);
  if (support < 0.0 || support > outer_radius) {
    total += power_tail(radial_density(rfun, grid, 0.5 * outer_radius),
                        radial_density(rfun, grid, outer_radius), outer_radius);
  }
  return total / norm;
}

nlohmann::json to_json(const DefectReport& r) {
  return {{"mass", to_json(r.mass)}, {"matter_integral", r.matter_integral}, {"defect", r.defect}};
}

DefectReport defect_report_from_json(const nlohmann::json& doc) {
  try {
    DefectReport r;
    r.mass = mass_estimate_from_json(doc.at("mass"));
    r.matter_integral = doc.at("matter_integral").get<double>();
    r.defect = doc.at("defect").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("defect report: ") + e.what());
  }
}

bool operator==(const DefectReport& a, const DefectReport& b) {
  return a.mass == b.mass && a.matter_integral == b.matter_integral && a.defect == b.defect;
}

DefectReport mass_matter_defect(const MetricSpec& spec, const std::vector<double>& radii,
                                double outer_radius, int q) {
  DefectReport r;
  r.mass = adm_mass(spec, radii, q);
  r.matter_integral = matter_integral(spec, outer_radius, q);
  r.defect = r.mass.value - r.matter_integral;
  return r;
}

}  // namespace afmass
