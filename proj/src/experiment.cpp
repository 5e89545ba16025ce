#include "afmass/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "afmass/cone.hpp"
#include "afmass/error.hpp"
#include "afmass/format.hpp"
#include "afmass/mass.hpp"
#include "afmass/metric_json.hpp"
#include "afmass/shell.hpp"

namespace afmass {

WindowSample sample_window(const MetricSpec& spec, const Vec& center, const Mat& a, double scale,
                           double L, int resolution) {
  const int n = spec.dimension();
  if (resolution < 2 || !(L > 0.0) || !(scale > 0.0)) {
    throw Error(ErrorKind::ConfigInvalid, "window needs L > 0, scale > 0 and resolution >= 2");
  }
  const double stretch = Eigen::JacobiSVD<Mat>(a).singularValues()(0);
  const double reach = stretch * L * std::sqrt(double(n)) / scale;
  if (!(reach < spec.distance_to_boundary(center))) {
    throw Error(ErrorKind::WindowExitsChart, "window leaves the chart's valid region");
  }
  WindowSample w;
  w.n = n;
  w.L = L;
  w.resolution = resolution;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int k = 0; k < n; ++k) x(k) = -L + 2.0 * L * idx[k] / (resolution - 1);
    w.points.push_back(x);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == resolution) idx[k--] = 0;
    if (k < 0) break;
  }
  w.jets.resize(w.points.size());
  const Mat at = a.transpose();
  for (std::size_t s = 0; s < w.points.size(); ++s) {
    const MetricJet j = metric_derivatives_at(spec, center + a * w.points[s] / scale, 2);
    std::vector<Mat> b(n);
    for (int l = 0; l < n; ++l) b[l] = at * j.first[l] * a;
    MetricJet out;
    out.g = at * j.g * a;
    out.first.assign(n, Mat::Zero(n, n));
    out.second.assign(n * n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) out.first[k] += (a(l, k) / scale) * b[l];
    for (int l = 0; l < n; ++l)
      for (int o = 0; o < n; ++o) {
        const Mat c = at * j.dd(l, o) * a;
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) out.second[k * n + m] += (a(l, k) * a(o, m) / (scale * scale)) * c;
      }
    w.jets[s] = std::move(out);
  }
  return w;
}

WindowSample identity_window(int n, double L, int resolution) {
  return sample_window(MetricSpec::euclidean(n), Vec::Zero(n), Mat::Identity(n, n), 1.0, L, resolution);
}

namespace {

Mat normalizing_map(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "metric at window center");
  // A = L^{-T} gives A^T g A = identity.
  const Mat l = llt.matrixL();
  return l.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(g.rows(), g.cols()));
}

}  // namespace

WindowSample blow_up_window(const MetricSpec& spec, const Vec& p, double i, double L, int resolution) {
  if (!spec.contains(p)) throw Error(ErrorKind::WindowExitsChart, "base point outside the chart");
  return sample_window(spec, p, normalizing_map(metric_at(spec, p)), i, L, resolution);
}

std::vector<WindowSample> escaping_window(const MetricSpec& spec, const std::vector<Vec>& offsets,
                                          double L, int resolution, bool normalize) {
  std::vector<WindowSample> out;
  const int n = spec.dimension();
  for (const Vec& p : offsets) {
    const MetricSpec moved = MetricSpec::translated(spec, p);
    const Vec origin = Vec::Zero(n);
    if (!moved.contains(origin)) throw Error(ErrorKind::WindowExitsChart, "offset lies in the excluded region");
    const Mat a = normalize ? normalizing_map(metric_at(moved, origin)) : Mat::Identity(n, n);
    out.push_back(sample_window(moved, origin, a, 1.0, L, resolution));
  }
  return out;
}

double c2_window_distance(const WindowSample& s, const WindowSample& ref) {
  if (s.n != ref.n || s.resolution != ref.resolution || s.L != ref.L || s.jets.size() != ref.jets.size()) {
    throw Error(ErrorKind::GridMismatch, "windows are sampled on different grids");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < s.jets.size(); ++k) {
    const MetricJet& a = s.jets[k];
    const MetricJet& b = ref.jets[k];
    d = std::max(d, (a.g - b.g).cwiseAbs().maxCoeff());
    for (std::size_t l = 0; l < a.first.size(); ++l) d = std::max(d, (a.first[l] - b.first[l]).cwiseAbs().maxCoeff());
    for (std::size_t l = 0; l < a.second.size(); ++l)
      d = std::max(d, (a.second[l] - b.second[l]).cwiseAbs().maxCoeff());
  }
  return d;
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json j = {{"label", r.label},
                      {"kind", r.kind},
                      {"indices", r.indices},
                      {"masses", r.masses},
                      {"distances", r.distances},
                      {"scales", r.scales},
                      {"limit_label", r.limit_label},
                      {"limit_mass", r.limit_mass},
                      {"liminf_mass", r.liminf_mass},
                      {"mass_tolerance", r.mass_tolerance},
                      {"verdict", r.verdict},
                      {"drop", r.drop},
                      {"convergence_exponent", nullptr},
                      {"nominal_exponent", nullptr},
                      {"monotone_from", r.monotone_from},
                      {"window_note", r.window_note}};
  if (r.convergence_exponent) j["convergence_exponent"] = *r.convergence_exponent;
  if (r.nominal_exponent) j["nominal_exponent"] = *r.nominal_exponent;
  return j;
}

ExperimentReport experiment_report_from_json(const nlohmann::json& doc) {
  try {
    ExperimentReport r;
    r.label = doc.at("label").get<std::string>();
    r.kind = doc.at("kind").get<std::string>();
    r.indices = doc.at("indices").get<std::vector<double>>();
    r.masses = doc.at("masses").get<std::vector<double>>();
    r.distances = doc.at("distances").get<std::vector<double>>();
    r.scales = doc.at("scales").get<std::vector<double>>();
    r.limit_label = doc.at("limit_label").get<std::string>();
    r.limit_mass = doc.at("limit_mass").get<double>();
    r.liminf_mass = doc.at("liminf_mass").get<double>();
    r.mass_tolerance = doc.at("mass_tolerance").get<double>();
    r.verdict = doc.at("verdict").get<bool>();
    r.drop = doc.at("drop").get<double>();
    if (!doc.at("convergence_exponent").is_null()) r.convergence_exponent = doc["convergence_exponent"].get<double>();
    if (!doc.at("nominal_exponent").is_null()) r.nominal_exponent = doc["nominal_exponent"].get<double>();
    r.monotone_from = doc.at("monotone_from").get<int>();
    r.window_note = doc.at("window_note").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("experiment report: ") + e.what());
  }
}

bool operator==(const ExperimentReport& a, const ExperimentReport& b) {
  return to_json(a) == to_json(b);
}

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << kExperimentCsvHeader << '\n';
  for (std::size_t k = 0; k < r.indices.size(); ++k) {
    out << fmt_num(r.indices[k]) << ',' << fmt_num(r.masses[k]) << ',' << fmt_num(r.distances[k]) << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> number_list(const nlohmann::json& cfg, const char* key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  auto v = cfg[key].get<std::vector<double>>();
  if (v.empty()) throw Error(ErrorKind::ConfigInvalid, std::string(key) + " must not be empty");
  return v;
}

Vec unit_offset(int n, double length) {
  Vec p = Vec::Zero(n);
  p(0) = length;
  return p;
}

std::optional<double> fit_exponent(const std::vector<double>& x, const std::vector<double>& d) {
  if (x.size() < 2) return std::nullopt;
  for (double v : d)
    if (!(v > 0.0)) return std::nullopt;
  double mx = 0.0, my = 0.0;
  const double m = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]) / m;
    my += std::log(d[k]) / m;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(d[k]) - my);
    sxx += dx * dx;
  }
  return -sxy / sxx;
}

void finish(ExperimentReport& r) {
  // liminf over a finite sequence: minimum over the last half of the indices.
  const std::size_t start = r.masses.size() / 2;
  r.liminf_mass = *std::min_element(r.masses.begin() + static_cast<std::ptrdiff_t>(start), r.masses.end());
  r.drop = r.liminf_mass - r.limit_mass;
  r.verdict = r.liminf_mass >= r.limit_mass - r.mass_tolerance;
  r.convergence_exponent = fit_exponent(r.scales, r.distances);
  int from = static_cast<int>(r.distances.size()) - 1;
  while (from > 0 && r.distances[from - 1] >= r.distances[from]) --from;
  r.monotone_from = from;
}

std::vector<double> scaled_radii(const std::vector<double>& radii, double factor) {
  std::vector<double> out(radii);
  for (double& v : out) v *= factor;
  return out;
}

ExperimentReport run(const nlohmann::json& cfg) {
  const std::string kind = cfg.at("kind").get<std::string>();
  const int n = cfg.value("n", kind.rfind("cone", 0) == 0 ? 2 : 3);
  const int q = cfg.value("q", 32);
  const int res = cfg.value("resolution", 5);
  ExperimentReport r;
  r.kind = kind;

  auto metric_or = [&](MetricSpec fallback) {
    return cfg.contains("metric") ? spec_from_json(cfg["metric"]) : fallback;
  };
  auto surface_or = [&](const ConicalSurface& fallback) {
    return cfg.contains("surface") ? ConicalSurface::from_json(cfg["surface"]) : fallback;
  };

  if (kind == "blow_up") {
    const MetricSpec spec = metric_or(MetricSpec::schwarzschild(n, 1.0));
    Vec p = unit_offset(n, 10.0);
    if (cfg.contains("point")) {
      const auto v = cfg["point"].get<std::vector<double>>();
      if (static_cast<int>(v.size()) != n) throw Error(ErrorKind::ConfigInvalid, "point has wrong dimension");
      p = Eigen::Map<const Vec>(v.data(), n);
    }
    const double L = cfg.value("window_L", 1.0);
    r.indices = number_list(cfg, "indices", {2, 4, 8, 16});
    const auto radii = number_list(cfg, "radii", {50, 100, 200, 400});
    const WindowSample flat = identity_window(n, L, res);
    for (double i : r.indices) {
      const MassEstimate m = adm_mass(MetricSpec::scaled(spec, i), radii, q);
      r.masses.push_back(m.value);
      r.mass_tolerance = std::max(r.mass_tolerance, m.error);
      r.distances.push_back(c2_window_distance(blow_up_window(spec, p, i, L, res), flat));
      r.scales.push_back(i);
    }
    r.label = "blow-up of " + spec.family().name() + " (mass of i^2 g)";
    r.limit_label = "euclidean";
    r.nominal_exponent = 1.0;
    r.window_note = "fixed window [-L,L]^n around the base point, normalized to the identity there";
  } else if (kind == "escaping") {
    const MetricSpec spec = metric_or(MetricSpec::schwarzschild(n, 1.0));
    const double L = cfg.value("window_L", 1.0);
    const double step = cfg.value("offset_step", 10.0);
    r.indices = number_list(cfg, "indices", {1, 2, 4, 8});
    const auto radii = number_list(cfg, "radii", {200, 400, 800, 1600});
    std::vector<Vec> offsets;
    for (double i : r.indices) offsets.push_back(unit_offset(n, step * i));
    const auto windows = escaping_window(spec, offsets, L, res);
    const WindowSample flat = identity_window(n, L, res);
    for (std::size_t k = 0; k < r.indices.size(); ++k) {
      const MassEstimate m = adm_mass(MetricSpec::translated(spec, offsets[k]), radii, q);
      r.masses.push_back(m.value);
      r.mass_tolerance = std::max(r.mass_tolerance, m.error);
      r.distances.push_back(c2_window_distance(windows[k], flat));
      r.scales.push_back(offsets[k].norm());
    }
    r.label = "escaping points of " + spec.family().name();
    r.limit_label = "euclidean";
    r.nominal_exponent = std::min(n - 2.0, spec.family().flux_decay_order());
    r.window_note = "window [-L,L]^n at the chart origin of the translated metric";
  } else if (kind == "shells") {
    const double L = cfg.value("window_L", 0.25);
    r.indices = number_list(cfg, "indices", {1, 2, 4, 8});
    const auto radii = number_list(cfg, "radii", {100, 200, 400, 800});
    const WindowSample flat = identity_window(n, L, res);
    for (double i : r.indices) {
      const MetricSpec spec = shell_metric(ShellFamily::make(n, i, cfg.value("grid_nodes", 64)));
      const MassEstimate m = adm_mass(spec, radii, q);
      r.masses.push_back(m.value);
      r.mass_tolerance = std::max(r.mass_tolerance, m.error);
      r.distances.push_back(
          c2_window_distance(sample_window(spec, Vec::Zero(n), Mat::Identity(n, n), 1.0, L, res), flat));
      r.scales.push_back(i);
    }
    r.label = "matter shells escaping to infinity";
    r.limit_label = "euclidean";
    r.nominal_exponent = n - 2.0;
    r.window_note = "window [-L,L]^n at the origin, inside the hollow of every shell";
  } else if (kind == "constant") {
    const MetricSpec spec = metric_or(MetricSpec::schwarzschild(n, 1.0));
    const double L = cfg.value("window_L", 1.0);
    r.indices = number_list(cfg, "indices", {1, 2, 3, 4});
    const auto radii = number_list(cfg, "radii", {50, 100, 200, 400});
    const MassEstimate m = adm_mass(spec, radii, q);
    const Vec p = unit_offset(n, 10.0);
    const WindowSample w = sample_window(spec, p, Mat::Identity(n, n), 1.0, L, res);
    for (double i : r.indices) {
      r.masses.push_back(m.value);
      r.distances.push_back(c2_window_distance(w, w));
      r.scales.push_back(i);
    }
    r.mass_tolerance = m.error;
    r.label = "constant sequence of " + spec.family().name();
    r.limit_label = spec.family().name();
    r.limit_mass = m.value;
    r.window_note = "every term equals the limit";
  } else if (kind == "cone_blow_up" || kind == "cone_escaping" || kind == "cone_constant") {
    const double L = cfg.value("window_L", 1.0);
    if (kind == "cone_blow_up") {
      const ConicalSurface s = surface_or({smooth_cap_warp(0.7, 1.0), 1.0});
      const MetricSpec spec = cone_metric(s);
      const Vec p = unit_offset(2, cfg.value("point_radius", 2.0));
      r.indices = number_list(cfg, "indices", {2, 4, 8, 16});
      const WindowSample flat = identity_window(2, L, res);
      const auto base_radii = number_list(cfg, "radii", {8, 16, 32, 64});
      for (double i : r.indices) {
        const ConicalSurface si{scaled_warp(s.warp, i), s.chi};
        const MassEstimate m = cone_mass(si, scaled_radii(base_radii, i), q);
        r.masses.push_back(m.value);
        r.mass_tolerance = std::max(r.mass_tolerance, m.error);
        r.distances.push_back(c2_window_distance(blow_up_window(spec, p, i, L, res), flat));
        r.scales.push_back(i);
      }
      r.label = "blow-up of a nonnegatively curved cone";
      r.limit_label = "plane";
      r.nominal_exponent = 1.0;
      r.window_note = "fixed window around a point of the cap, normalized to the identity there";
    } else if (kind == "cone_escaping") {
      const ConicalSurface s = surface_or({perturbed_warp(smooth_cap_warp(0.7, 1.0), 0.2, 0.5, 0.5, 2), 1.0});
      const MetricSpec spec = cone_metric(s);
      const auto radii = number_list(cfg, "radii", {50, 100, 200, 400});
      const double step = cfg.value("offset_step", 10.0);
      r.indices = number_list(cfg, "indices", {1, 2, 4, 8});
      std::vector<Vec> offsets;
      for (double i : r.indices) offsets.push_back(unit_offset(2, step * i));
      const auto windows = escaping_window(spec, offsets, L, res, true);
      const WindowSample flat = identity_window(2, L, res);
      const MassEstimate m = cone_mass(s, radii, q);
      for (std::size_t k = 0; k < r.indices.size(); ++k) {
        r.masses.push_back(m.value);
        r.distances.push_back(c2_window_distance(windows[k], flat));
        r.scales.push_back(offsets[k].norm());
      }
      r.mass_tolerance = m.error;
      r.label = "escaping points of a perturbed cone";
      r.limit_label = "plane";
      r.nominal_exponent = 1.0;
      r.window_note = "window at p_i normalized to the identity; the cone metric is homogeneous of degree 0";
    } else {
      const ConicalSurface s = surface_or({smooth_cap_warp(0.7, 1.0), 1.0});
      const MetricSpec spec = cone_metric(s);
      const auto radii = number_list(cfg, "radii", {50, 100, 200, 400});
      r.indices = number_list(cfg, "indices", {1, 2, 3, 4});
      const MassEstimate m = cone_mass(s, radii, q);
      const WindowSample w = sample_window(spec, unit_offset(2, 2.0), Mat::Identity(2, 2), 1.0, L, res);
      for (double i : r.indices) {
        r.masses.push_back(m.value);
        r.distances.push_back(c2_window_distance(w, w));
        r.scales.push_back(i);
      }
      r.mass_tolerance = m.error;
      r.label = "constant sequence of a cone";
      r.limit_label = "cone";
      r.limit_mass = m.value;
      r.window_note = "every term equals the limit";
    }
  } else {
    throw Error(ErrorKind::ConfigInvalid, "unknown experiment kind '" + kind + "'");
  }
  finish(r);
  return r;
}

}  // namespace

ExperimentReport run_semicontinuity_experiment(const nlohmann::json& config) {
  try {
    return run(config);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("experiment config: ") + e.what());
  }
}

}  // namespace afmass
