#pragma once

#include <string>

#include "qnc/learning.hpp"

namespace qnc {

// JSON model files. Centroid angles, cone radii, weights, and bounds
// round-trip exactly; sublabel members are training-only and are not
// stored.
std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace qnc
