#pragma once

#include "ocdr/config.hpp"

#include <string>
#include <utility>
#include <vector>

// Scenario runners: each CLI subcommand resolves scenario defaults onto the
// user config, executes the full pipeline (spectra -> psf -> scan -> dsp ->
// models), writes plot-ready data files, and returns named metrics.

namespace ocdr {

struct RunReport {
  Scenario scenario = Scenario::psf;
  std::vector<std::pair<std::string, double>> metrics;      // insertion order
  std::vector<std::pair<std::string, std::string>> files;   // role -> path
  std::string resolved_config;                              // reparseable echo
  std::string version;

  double metric(const std::string& name) const;  // throws range_violation if absent
  bool has_metric(const std::string& name) const;
};

/// Fills every scenario-dependent default the user left unset; the result
/// serializes to a complete config that reruns identically.
ExperimentConfig resolve_scenario_defaults(const ExperimentConfig& cfg);

RunReport run_experiment(const ExperimentConfig& cfg);

std::string format_report(const RunReport& report);
void write_report(const RunReport& report, const std::string& path);

} // namespace ocdr
