#include "afmass/metric_json.hpp"

#include "afmass/cone.hpp"
#include "afmass/error.hpp"
#include "afmass/shell.hpp"

namespace afmass {

namespace {

Vec vec_from(const nlohmann::json& arr) {
  if (!arr.is_array()) throw Error(ErrorKind::ConfigInvalid, "expected a numeric array");
  Vec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

std::optional<double> opt_number(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return obj[key].get<double>();
}

MetricSpec parse(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ConfigInvalid, "metric spec must be an object");
  const int n = doc.at("n").get<int>();
  const std::string family = doc.at("family").get<std::string>();
  const nlohmann::json params = doc.value("params", nlohmann::json::object());
  if (n < 2 || n > 16) throw Error(ErrorKind::ConfigInvalid, "n out of range");

  std::optional<MetricSpec> spec;
  if (family == "euclidean") {
    spec = MetricSpec::euclidean(n);
  } else if (family == "schwarzschild") {
    spec = MetricSpec::schwarzschild(n, params.at("m").get<double>(), opt_number(params, "inner_radius"));
  } else if (family == "harmonically_flat") {
    Vec dipole = params.contains("dipole") ? vec_from(params["dipole"]) : Vec();
    spec = MetricSpec::harmonically_flat(n, params.at("a").get<double>(), dipole);
  } else if (family == "conformally_flat") {
    spec = MetricSpec::conformally_flat(n, scalar_field_from_json(n, params.at("U")));
  } else if (family == "asymptotically_schwarzschild") {
    spec = MetricSpec::asymptotically_schwarzschild(
        n, params.at("m").get<double>(), perturbation_from_json(n, params.at("perturbation")),
        opt_number(params, "inner_radius"));
  } else if (family == "scaled") {
    spec = MetricSpec::scaled(parse(params.at("base")), params.at("lambda").get<double>());
  } else if (family == "translated") {
    spec = MetricSpec::translated(parse(params.at("base")), vec_from(params.at("offset")));
  } else if (family == "shell") {
    spec = shell_metric(ShellFamily::from_json(n, params));
  } else if (family == "cone2d") {
    if (n != 2) throw Error(ErrorKind::ConfigInvalid, "cone2d requires n = 2");
    spec = cone_metric(ConicalSurface::from_json(params));
  } else {
    throw Error(ErrorKind::ConfigInvalid, "unknown metric family '" + family + "'");
  }
  if (spec->dimension() != n) throw Error(ErrorKind::ConfigInvalid, "base dimension does not match n");

  const std::string mode = doc.value("derivative_mode", std::string("analytic"));
  if (mode == "fd") {
    return spec->with_derivatives(DerivativeMode::finite_difference, opt_number(doc, "fd_step"));
  }
  if (mode != "analytic") throw Error(ErrorKind::ConfigInvalid, "unknown derivative_mode '" + mode + "'");
  if (!spec->family().has_analytic_derivatives()) {
    throw Error(ErrorKind::ConfigInvalid,
                "family '" + family + "' has no closed-form derivatives; use derivative_mode fd");
  }
  return *spec;
}

}  // namespace

std::shared_ptr<const ScalarField> scalar_field_from_json(int n, const nlohmann::json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "harmonic") {
    Vec dipole = doc.contains("dipole") ? vec_from(doc["dipole"]) : Vec();
    return std::make_shared<HarmonicFactor>(n, doc.at("a").get<double>(), dipole);
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown conformal factor kind '" + kind + "'");
}

std::shared_ptr<const TensorPerturbation> perturbation_from_json(int n, const nlohmann::json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "quadrupole") {
    return std::make_shared<QuadrupolePerturbation>(n, doc.at("c").get<double>(), doc.value("axis", 0));
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown perturbation kind '" + kind + "'");
}

nlohmann::json spec_to_json(const MetricSpec& spec) {
  nlohmann::json doc = {{"n", spec.dimension()},
                        {"family", spec.family().name()},
                        {"params", spec.family().params_json()}};
  if (spec.derivative_mode() == DerivativeMode::finite_difference) {
    doc["derivative_mode"] = "fd";
    if (spec.fd_step()) doc["fd_step"] = *spec.fd_step();
  } else {
    doc["derivative_mode"] = "analytic";
  }
  return doc;
}

MetricSpec spec_from_json(const nlohmann::json& doc) {
  try {
    return parse(doc);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("metric spec: ") + e.what());
  }
}

}  // namespace afmass
