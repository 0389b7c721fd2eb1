#pragma once

#include "ist/config.hpp"
#include "ist/report.hpp"

namespace ist {

// Registered experiment ids, one per acceptance criterion.
std::vector<std::string> experiment_ids();
bool is_experiment(const std::string& id);

// CLI verb -> experiment family.
std::vector<std::string> experiments_for_verb(const std::string& verb);
std::vector<std::string> cli_verbs();

// Default configuration of an experiment (the acceptance-suite settings).
RunConfig default_config(const std::string& experiment);

// Metric names the experiment must report (validated by the runner).
std::vector<std::string> declared_metrics(const std::string& experiment);

// Runs the experiment, writes CSV/ISTF artifacts plus report.txt and
// timing.log into out_dir, and returns the report. Outputs are byte-identical
// for identical config and version regardless of worker count.
ExperimentReport run_experiment(const RunConfig& cfg, const std::string& out_dir);

}  // namespace ist
