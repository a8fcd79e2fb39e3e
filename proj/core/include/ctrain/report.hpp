#pragma once

#include <filesystem>
#include <string>

#include "ctrain/experiment.hpp"

namespace ctrain {

/// The resolved-configuration echo embedded in every report. Serialized
/// JSON object text; `extra_json` (an object, may be "{}") carries
/// caller-level fields such as the dataset path or CLI schema options.
std::string config_to_json(const TrialConfig& cfg, const std::string& extra_json = "{}");

/// Full report document: {"config": ..., "trials": [...], "summary": ...}.
/// Output is byte-stable for a given input.
std::string report_to_json(const TrialConfig& cfg, const SummaryReport& report,
                           const std::string& extra_config_json = "{}");

void write_report(const std::filesystem::path& path, const TrialConfig& cfg,
                  const SummaryReport& report,
                  const std::string& extra_config_json = "{}");

/// Flat per-trial table for external plotting.
std::string trials_to_csv(const SummaryReport& report);

void write_trials_csv(const std::filesystem::path& path, const SummaryReport& report);

}  // namespace ctrain
