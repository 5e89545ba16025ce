#pragma once

#include <json.hpp>

#include <functional>
#include <string>

#include "afmass/fields.hpp"
#include "afmass/mass.hpp"
#include "afmass/metric.hpp"

namespace afmass {

/// Grid approximation of the weighted C^k_{-tau} seminorm on |x| >= inner_radius.
struct WeightedNormParams {
  int k = 2;
  double tau = 1.0;
  double inner_radius = 1.0;
  int radii_per_decade = 64;
  int decades = 3;
  int q = 4;  // angular resolution
};

/// max over the grid and |gamma| <= k of |x|^{|gamma| + tau} |d^gamma f(x)|.
double weighted_seminorm(const std::function<FieldJet(const Vec&)>& f, int n,
                         const WeightedNormParams& params);
double weighted_seminorm(const ScalarField& f, int n, const WeightedNormParams& params);

/// Same seminorm applied to every component of g - delta (max over components).
double weighted_metric_seminorm(const MetricSpec& spec, const WeightedNormParams& params);

/// D(g) = d_i d_j g_ij - d_j d_j g_ii from a jet with second derivatives.
double d_operator(const MetricJet& jet);
double d_operator_at(const MetricSpec& spec, const Vec& x);

struct DivergenceMass {
  double value = 0.0;
  double inner_flux = 0.0;  // flux through the inner sphere, 0 for charts without a hole
  double volume = 0.0;      // normalized integral of D(g) between the inner and outer radius
  double tail = 0.0;        // fitted contribution beyond the outer radius
  double inner_radius = 0.0;
};

/// Normalized integral of D(g) dV_0 over the chart, via the divergence identity.
DivergenceMass mass_via_divergence(const MetricSpec& spec, double outer_radius, int q);

/// (1 / (2(n-1) omega_{n-1})) int R(g) dV_g.
double matter_integral(const MetricSpec& spec, double outer_radius, int q);

struct DefectReport {
  MassEstimate mass;
  double matter_integral = 0.0;
  double defect = 0.0;
};

nlohmann::json to_json(const DefectReport& r);
DefectReport defect_report_from_json(const nlohmann::json& doc);
bool operator==(const DefectReport& a, const DefectReport& b);

DefectReport mass_matter_defect(const MetricSpec& spec, const std::vector<double>& radii,
                                double outer_radius, int q);

inline constexpr const char* kShellSequenceCsvHeader = "i,mass,matter,defect";

}  // namespace afmass
