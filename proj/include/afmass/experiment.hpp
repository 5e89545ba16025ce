#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "afmass/metric.hpp"
#include "afmass/types.hpp"

namespace afmass {

/// Metric and derivatives sampled on the cube [-L, L]^n, `resolution` points per axis.
struct WindowSample {
  int n = 0;
  double L = 0.0;
  int resolution = 0;
  std::vector<Vec> points;
  std::vector<MetricJet> jets;
};

/// g_hat(x) = A^T g(center + A x / scale) A with derivatives in x.
WindowSample sample_window(const MetricSpec& spec, const Vec& center, const Mat& a, double scale,
                           double L, int resolution);

/// Flat reference window (identity metric).
WindowSample identity_window(int n, double L, int resolution);

/// Pulled-back window of (M, i^2 g, p), normalized so that g_hat(0) is the identity.
WindowSample blow_up_window(const MetricSpec& spec, const Vec& p, double i, double L, int resolution);

/// Windows of Translated(spec, p_k) at the chart origin. With `normalize`, each
/// window is also linearly normalized to the identity at its center.
std::vector<WindowSample> escaping_window(const MetricSpec& spec, const std::vector<Vec>& offsets,
                                          double L, int resolution, bool normalize = false);

/// Max over grid points, components and derivative orders 0..2 of the difference.
double c2_window_distance(const WindowSample& sample, const WindowSample& reference);

struct ExperimentReport {
  std::string label;
  std::string kind;
  std::vector<double> indices;
  std::vector<double> masses;
  std::vector<double> distances;
  /// Abscissa of the convergence fit: the index, or |p_i| for escaping sequences.
  std::vector<double> scales;
  std::string limit_label;
  double limit_mass = 0.0;
  double liminf_mass = 0.0;
  double mass_tolerance = 0.0;
  bool verdict = false;
  double drop = 0.0;
  /// Fitted decay exponent of the window distance (absent when distances vanish).
  std::optional<double> convergence_exponent;
  std::optional<double> nominal_exponent;
  /// First index position from which the distances are nonincreasing.
  int monotone_from = 0;
  std::string window_note;
};

nlohmann::json to_json(const ExperimentReport& r);
ExperimentReport experiment_report_from_json(const nlohmann::json& doc);
bool operator==(const ExperimentReport& a, const ExperimentReport& b);

inline constexpr const char* kExperimentCsvHeader = "index,mass,distance";
std::string to_csv(const ExperimentReport& r);

/// Config: {"kind", "n", "indices", "window_L", "resolution", ...}; kinds are
/// blow_up, escaping, shells, constant, cone_blow_up, cone_escaping, cone_constant.
/// Optional keys: "metric" (spec JSON), "point", "radii", "q", "surface".
ExperimentReport run_semicontinuity_experiment(const nlohmann::json& config);

}  // namespace afmass
