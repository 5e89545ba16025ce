#include "afmass/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "afmass/cone.hpp"
#include "afmass/error.hpp"
#include "afmass/experiment.hpp"
#include "afmass/format.hpp"
#include "afmass/mass.hpp"
#include "afmass/metric_json.hpp"
#include "afmass/quadrature.hpp"
#include "afmass/shell.hpp"
#include "afmass/weighted.hpp"

namespace afmass {

namespace fs = std::filesystem;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, "malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

void write_report(const std::string& path, const nlohmann::json& report) {
  write_text(path, report.dump(2) + "\n");
}

nlohmann::json read_report(const std::string& path) { return read_json_file(path); }

int resolve_threads(std::optional<int> flag) {
  if (flag) return std::max(1, *flag);
  if (const char* env = std::getenv("AFMASS_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      throw Error(ErrorKind::ConfigInvalid, "AFMASS_THREADS is not an integer");
    }
  }
  return 1;
}

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::vector<double> radii_of(const nlohmann::json& doc, std::vector<double> fallback = {}) {
  if (!doc.contains("radii")) {
    if (fallback.empty()) throw Error(ErrorKind::ConfigInvalid, "config needs a 'radii' list");
    return fallback;
  }
  auto radii = doc["radii"].get<std::vector<double>>();
  if (radii.empty()) throw Error(ErrorKind::ConfigInvalid, "radii list is empty");
  return radii;
}

const nlohmann::json& metric_of(const nlohmann::json& doc) {
  if (!doc.contains("metric")) throw Error(ErrorKind::ConfigInvalid, "config needs a 'metric' object");
  return doc["metric"];
}

struct Outputs {
  nlohmann::json result;
  std::string csv;  // empty: no CSV for this command
};

Outputs adm_mass_cmd(const nlohmann::json& doc, int q) {
  const MetricSpec spec = spec_from_json(metric_of(doc));
  return {to_json(adm_mass(spec, radii_of(doc), q)), ""};
}

Outputs fg_profile_cmd(const nlohmann::json& doc, int q) {
  const MetricSpec spec = spec_from_json(metric_of(doc));
  const auto radii = radii_of(doc);
  std::ostringstream csv;
  csv << kFgProfileCsvHeader << '\n';
  nlohmann::json rows = nlohmann::json::array();
  std::vector<double> values;
  for (double r : radii) {
    const FgValue v = fg(spec, r, q);
    values.push_back(v.value);
    csv << fg_profile_row(v) << '\n';
    rows.push_back({{"r", r},
                    {"fg", v.value},
                    {"area", v.report.area},
                    {"maxH2", v.report.maxH2},
                    {"rho_min", v.report.rho_min},
                    {"hypothesis_holds", v.hypothesis_holds},
                    {"sphere", to_csv_row(v.report)}});
  }
  nlohmann::json result = {{"profile", rows}, {"limit", nullptr}};
  if (radii.size() >= 3) result["limit"] = to_json(fit_decay(radii, values, 1.0));
  return {result, csv.str()};
}

Outputs weighted_mass_cmd(const nlohmann::json& doc, int q) {
  nlohmann::json result;
  std::string csv;
  if (doc.contains("metric")) {
    const MetricSpec spec = spec_from_json(doc["metric"]);
    const auto radii = radii_of(doc);
    const double outer = doc.value("outer_radius", radii.back());
    const DefectReport rep = mass_matter_defect(spec, radii, outer, q);
    const DivergenceMass div = mass_via_divergence(spec, outer, q);
    result["defect"] = to_json(rep);
    result["divergence_mass"] = {{"value", div.value},
                                 {"inner_flux", div.inner_flux},
                                 {"volume", div.volume},
                                 {"tail", div.tail},
                                 {"inner_radius", div.inner_radius}};
  }
  if (doc.contains("shells")) {
    const auto& sh = doc["shells"];
    const int n = sh.value("n", 3);
    const auto indices = sh.at("indices").get<std::vector<double>>();
    if (indices.empty()) throw Error(ErrorKind::ConfigInvalid, "shell indices are empty");
    const auto radii = radii_of(sh, {100, 200, 400, 800});
    std::ostringstream out;
    out << kShellSequenceCsvHeader << '\n';
    nlohmann::json seq = nlohmann::json::array();
    for (double i : indices) {
      const MetricSpec spec = shell_metric(ShellFamily::make(n, i, sh.value("grid_nodes", 64)));
      const DefectReport rep = mass_matter_defect(spec, radii, radii.back(), q);
      out << fmt_num(i) << ',' << fmt_num(rep.mass.value) << ',' << fmt_num(rep.matter_integral) << ','
          << fmt_num(rep.defect) << '\n';
      seq.push_back({{"i", i}, {"report", to_json(rep)}});
    }
    result["shell_sequence"] = seq;
    csv = out.str();
  }
  if (result.is_null()) throw Error(ErrorKind::ConfigInvalid, "weighted-mass needs 'metric' or 'shells'");
  return {result, csv};
}

Outputs sequence_cmd(const nlohmann::json& doc, int q, const char* fallback_kind) {
  nlohmann::json exp = doc.contains("experiment") ? doc["experiment"] : doc;
  if (!exp.contains("kind")) exp["kind"] = fallback_kind;
  if (!exp.contains("q")) exp["q"] = q;
  const ExperimentReport rep = run_semicontinuity_experiment(exp);
  return {to_json(rep), to_csv(rep)};
}

Outputs cone_angle_cmd(const nlohmann::json& doc, int q) {
  nlohmann::json params = doc.contains("surface") ? doc["surface"] : nlohmann::json::object();
  if (!doc.contains("surface")) {
    if (!doc.contains("alpha")) throw Error(ErrorKind::ConfigInvalid, "cone-angle needs 'surface' or 'alpha'");
    params["alpha"] = doc["alpha"];
  }
  const ConicalSurface s = ConicalSurface::from_json(params);
  ConeMass detail;
  const MassEstimate m = cone_mass(s, radii_of(doc, {50, 100, 200, 400}), q, &detail);
  nlohmann::json result = to_json(m);
  result["estimates"] = {{"geodesic_curvature", detail.geodesic_estimate},
                         {"gauss_bonnet", detail.gauss_bonnet_estimate},
                         {"discrepancy", detail.discrepancy}};
  result["surface"] = s.to_json();
  return {result, ""};
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult out;
  nlohmann::json echoed = config.document;
  const std::string command = config.command.empty() ? config.document.value("command", std::string())
                                                     : config.command;
  nlohmann::json envelope = {{"tool_version", kToolVersion},
                             {"command", command},
                             {"config", echoed},
                             {"seed", config.seed},
                             {"timestamp", timestamp()}};
  try {
    if (!config.document.is_object()) throw Error(ErrorKind::ConfigInvalid, "config must be a JSON object");
    if (config.document.contains("command") && config.document["command"].get<std::string>() != command) {
      throw Error(ErrorKind::ConfigInvalid, "config command does not match the subcommand");
    }
    const int q = config.quadrature.value_or(config.document.value("q", kDefaultQuadrature));
    if (q < 2) throw Error(ErrorKind::ConfigInvalid, "quadrature resolution must be >= 2");
    envelope["quadrature"] = q;
    set_thread_count(config.threads);

    Outputs o;
    if (command == "adm-mass") o = adm_mass_cmd(config.document, q);
    else if (command == "fg-profile") o = fg_profile_cmd(config.document, q);
    else if (command == "weighted-mass") o = weighted_mass_cmd(config.document, q);
    else if (command == "sequence") o = sequence_cmd(config.document, q, "shells");
    else if (command == "cone-angle") o = cone_angle_cmd(config.document, q);
    else if (command == "cone-sequence") o = sequence_cmd(config.document, q, "cone_blow_up");
    else throw Error(ErrorKind::ConfigInvalid, "unknown command '" + command + "'");

    envelope["result"] = o.result;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    const std::string base = (fs::path(config.out_dir) / command).string();
    write_report(base + ".json", envelope);
    out.written.push_back(base + ".json");
    if (!o.csv.empty()) {
      write_text(base + ".csv", o.csv);
      out.written.push_back(base + ".csv");
    }
    out.report = envelope;
    out.exit_code = 0;
  } catch (const std::exception& e) {
    ErrorKind kind = ErrorKind::ComputationFailed;
    if (const auto* err = dynamic_cast<const Error*>(&e)) kind = err->kind();
    else if (dynamic_cast<const nlohmann::json::exception*>(&e)) kind = ErrorKind::ConfigInvalid;
    out.exit_code = kind == ErrorKind::ConfigInvalid ? 2 : 1;
    envelope["error"] = {{"kind", std::string(to_string(kind))},
                         {"status", out.exit_code == 2 ? "ConfigInvalid" : "ComputationFailed"},
                         {"message", e.what()}};
    out.report = envelope;
    try {
      std::error_code ec;
      fs::create_directories(config.out_dir, ec);
      const std::string path = (fs::path(config.out_dir) / "error.json").string();
      write_report(path, envelope);
      out.written.push_back(path);
    } catch (const Error&) {
      // The error report itself could not be written; the exit code still reports failure.
    }
  }
  return out;
}

}  // namespace afmass
