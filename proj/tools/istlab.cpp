// Command-line front end: one verb per pipeline family, each reading a flat
// JSON config and writing CSV/ISTF artifacts plus a deterministic report.

#include <CLI11.hpp>

#include <iostream>

#include "ist/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"istlab: direct/inverse scattering experiments for defocusing "
               "NLS (1D) and Davey-Stewartson II (2D)"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  for (const std::string& verb : ist::cli_verbs()) {
    CLI::App* sub = app.add_subcommand(verb, "run the " + verb + " experiments");
    sub->add_option("--config", config_path, "flat JSON config file");
    sub->add_option("--out", out_dir, "output directory")->required();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string verb = app.get_subcommands().front()->get_name();

  try {
    std::vector<ist::RunConfig> configs;
    if (!config_path.empty()) {
      ist::RunConfig cfg = ist::parse_config_file(config_path);
      const auto family = ist::experiments_for_verb(verb);
      if (std::find(family.begin(), family.end(), cfg.experiment) == family.end())
        throw ist::ConfigError("experiment '" + cfg.experiment +
                               "' does not belong to verb '" + verb + "'");
      configs.push_back(cfg);
    } else {
      for (const std::string& id : ist::experiments_for_verb(verb))
        configs.push_back(ist::default_config(id));
    }

    bool all_pass = true;
    for (const ist::RunConfig& cfg : configs) {
      const std::string dir = configs.size() == 1 ? out_dir : out_dir + "/" + cfg.experiment;
      ist::ExperimentReport rep = ist::run_experiment(cfg, dir);
      for (const ist::Check& c : rep.checks) {
        std::cout << cfg.experiment << ": " << c.name << " = " << c.value << " "
                  << (c.passed ? "PASS" : "FAIL") << "\n";
        all_pass = all_pass && c.passed;
      }
      std::cout << cfg.experiment << ": report written to " << dir << " ("
                << rep.wall_clock_ms / 1000.0 << " s)\n";
    }
    return all_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
