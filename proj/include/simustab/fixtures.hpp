#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "simustab/stabdata.hpp"

namespace simustab {

/// Built-in two-plant families used by the reproduce command and the tests.
PlantPair example1_plants();
PlantPair example2_plants();

/// Named free-parameter presets: "example1", "a".."f" (2x2) and
/// "example2" (4x2).
std::optional<Eigen::MatrixXd> sigma_preset(const std::string& name);
std::vector<std::string> sigma_preset_names();

}  // namespace simustab
