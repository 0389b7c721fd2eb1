#pragma once

#include <string>
#include <vector>

#include "ist/report.hpp"

namespace ist {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat experiment configuration; JSON on disk, unknown keys rejected.
// Experiments fill unset fields with their registered defaults.
struct RunConfig {
  std::string experiment;
  int n = 0;
  double half_width = 0.0;
  std::string potential = "gaussian";
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
  double t = -1.0;
  std::vector<double> times;
  double dt = 0.0;
  std::vector<double> epsilons;
  double tol_unitarity = 1e-8;
  double bc_tol = 1e-10;
  double cgo_tol = 1e-10;
  int max_iter = 200;
  int k_block = 0;
  int z_pad = 1;
  int inverse_pad = 1;
  int sweep_order = 4;
  int substeps = 1;
  int workers = 0;

  std::vector<std::pair<std::string, std::string>> echo() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_json(const std::string& text);

// Throws ConfigError on invalid values (before any compute).
void validate(const RunConfig& cfg);

}  // namespace ist
