#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgibbs/hamiltonian.hpp"

namespace qgibbs {

/// Settings shared by every command; each field has a usable default.
struct RunConfig {
  std::string command;
  std::string model = "transverse_field_ising";
  ModelParams params;
  std::string spec_file;
  double beta = 1.0;
  std::vector<int> dims = {8};
  bool periodic = false;
  std::vector<double> ells = {1, 2, 3};
  int r = 0;  ///< 0: min(side, 4 max ℓ)
  std::string out = "qgibbs-out";
  std::uint64_t seed = 1;
  bool schedule_only = false;
  std::string input_state = "mixed";  ///< mixed | ground
  int anchor = -1;                    ///< -1: site 0
  std::vector<int> sites;             ///< bp perturbation sites; empty: central site
  std::string mode = "touching";      ///< touching | contained
  std::string rotation = "plain";     ///< plain | integrated
  double target = 0.01;
  double side = 0;                 ///< schedule side length; 0: lattice side
  std::vector<std::string> fits;   ///< "c1:c2" or "c1:c2:power"
};

/// Canonical JSON of the settings that influence the numbers.
nlohmann::json config_to_json(const RunConfig& cfg);

LocalHamiltonian load_model(const RunConfig& cfg);

/// Runs cfg.command, writes its files under cfg.out and returns the report.
/// Wall-clock time goes to a separate timing.json.
nlohmann::json execute(const RunConfig& cfg);

/// Maps library errors to process exit codes (1 config, 2 cap, 3 invariant).
int exit_code_for(const std::exception& e);

}  // namespace qgibbs
