// scenario.hpp -- scenario ingestion and experiment execution: builds the
// lattice/coupling stack from a config file, runs one named experiment, and
// writes a JSON summary plus CSV data files into the output directory.
#pragma once

#include <optional>
#include <string>

#include "mbq/config.hpp"
#include "mbq/couplings.hpp"
#include "mbq/geometry.hpp"

namespace mbq {

struct ScenarioOptions {
  std::string out_dir;       // final output directory (already resolved)
  int workers = 0;           // 0 -> library default thread count
  bool reproducible = false; // omit timestamps for byte-identical reruns
};

struct Scenario {
  std::string name;
  std::string model;         // basic | double-well | small-sample | films
  long seed = 0;
  ConfigFile cfg;
  // Absent when the scenario supplies qubit parameters directly ([params]).
  std::optional<LatticeSpec> lattice;
  std::optional<CouplingModel> coupling;
  std::optional<CouplingTable> table;
};

// Parses and validates the scenario; throws ConfigError with field paths.
Scenario load_scenario(const ConfigFile& cfg);

// Runs one experiment (dispersion | synchronism | qubit | evolve | sweep |
// oracle-check | scaling). Returns 0 when all built-in checks pass, 1 when a
// check fails. Config problems throw ConfigError; other failures throw.
int run_experiment(const std::string& experiment, const ConfigFile& cfg,
                   const ScenarioOptions& opt);

// Renders a previously written JSON summary as a text report (stdout +
// report.txt). Returns 0, or 1 when the summary records failed checks.
int run_report(const std::string& results_path, const ScenarioOptions& opt);

}  // namespace mbq
