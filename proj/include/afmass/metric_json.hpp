#pragma once

#include <json.hpp>

#include "afmass/metric.hpp"

namespace afmass {

/// {"n": int, "family": string, "params": {...}, "derivative_mode": "analytic"|"fd", "fd_step"?}
nlohmann::json spec_to_json(const MetricSpec& spec);

/// Throws ConfigInvalid on unknown families, missing fields or bad values.
MetricSpec spec_from_json(const nlohmann::json& doc);

std::shared_ptr<const ScalarField> scalar_field_from_json(int n, const nlohmann::json& doc);
std::shared_ptr<const TensorPerturbation> perturbation_from_json(int n, const nlohmann::json& doc);

}  // namespace afmass
