#pragma once

#include <span>
#include <string_view>

#include "probwave/cli/config.hpp"
#include "probwave/cli/output.hpp"

namespace probwave::cli {

/// free-wave, potential-wave, ensemble, decoherence, entropy,
/// sturm-liouville, uncertainty, contour, composite, field.
std::span<const std::string_view> scenario_names();

/// Runs the scenario named in `config`. Reads (and records) the scenario
/// parameters, so the config is updated in place.
///
/// Throws ConfigError for an unknown scenario or key; library errors
/// propagate unchanged.
ScenarioResult run_scenario(ScenarioConfig& config);

}  // namespace probwave::cli
