#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "afmass/metric.hpp"
#include "afmass/sphere.hpp"

namespace afmass {

/// raw(r) ~ c0 + c1 r^{-p}
struct DecayModel {
  double c0 = 0.0;
  double c1 = 0.0;
  double p = 1.0;
};

struct MassEstimate {
  double value = 0.0;
  double error = 0.0;
  std::vector<double> radii;
  std::vector<double> raw;
  DecayModel model;
};

bool operator==(const MassEstimate& a, const MassEstimate& b);

nlohmann::json to_json(const MassEstimate& m);
MassEstimate mass_estimate_from_json(const nlohmann::json& doc);

/// Least-squares fit of c0 + c1 r^{-p}; value = c0, error = |raw.back() - c0| + rms residual.
/// Throws FitIllConditioned when the radii are too clustered, ConfigInvalid when
/// fewer than three strictly increasing radii are given.
MassEstimate fit_decay(const std::vector<double>& radii, const std::vector<double>& raw, double p);

/// ADM flux integral over S_r in the chart (flat area element). For Scaled specs
/// the value refers to the asymptotically Euclidean rescaled chart.
double adm_flux(const MetricSpec& spec, double r, int q);

/// Extrapolated ADM mass with p = min(n-2, family decay order).
MassEstimate adm_mass(const MetricSpec& spec, const std::vector<double>& radii, int q);

struct FgValue {
  double value = 0.0;
  /// rho_min > (n-2)/(n-1) maxH2 (the inequality's hypothesis).
  bool hypothesis_holds = false;
  /// rho_min - (n-2)/(n-1) maxH2, the distance from the hypothesis boundary.
  double margin = 0.0;
  /// rho_min <= 0: the value is still returned but the hypothesis fails.
  bool flagged = false;
  SphereReport report;
};

/// F_g from a sphere report; throws ZeroRhoMin when rho_min == 0.
FgValue fg_from_report(const SphereReport& report, int n);
FgValue fg(const MetricSpec& spec, double r, int q);

/// Extrapolation of fg(r) with c0 + c1 / r.
MassEstimate fg_limit(const MetricSpec& spec, const std::vector<double>& radii, int q);

struct PenroseCheck {
  bool hypothesis_holds = false;
  double fg_value = 0.0;
  double mass_value = 0.0;
  double tolerance = 0.0;
  bool inequality_holds = false;
};

PenroseCheck penrose_like_check(const MetricSpec& spec, double r, int q, const MassEstimate& mass);

inline constexpr const char* kFgProfileCsvHeader = "r,fg,area,maxH2,rho_min,hypothesis_holds";
std::string fg_profile_row(const FgValue& v);

}  // namespace afmass
