#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mocet/corpus.hpp"
#include "mocet/engine.hpp"
#include "mocet/error_analysis.hpp"
#include "mocet/validation.hpp"

// JSON shapes of the engine's reports. Field order is fixed (ordered_json) so
// the same report always serializes to the same bytes.
namespace mocet {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const StepProbabilityEstimate& estimate);
ordered_json to_json(const SimulationResult& simulation);
ordered_json to_json(const MocetReport& report);
ordered_json to_json(const ErrorReport& report);
ordered_json to_json(const SeparationResult& result);
ordered_json to_json(const ValidationReport& report);

// "scenario,e_y,mocet,cumulative_mocet,k,trials,seed"
std::string csv_header();
std::string csv_row(const MocetReport& report);

}  // namespace mocet
