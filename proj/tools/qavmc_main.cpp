#include <CLI11.hpp>

#include "qavmc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qavmc: quantum-assisted VMC simulation suite"};
  app.require_subcommand(1);

  std::string config_path;
  qavmc::cli::Overrides overrides;
  std::uint64_t seed = 0;
  std::string output_dir;

  static const std::map<std::string, std::string> descriptions = {
      {"gap-scan", "absolute spectral gap vs system parameter, per proposal"},
      {"gap-size", "gap vs system size with exponential scaling fits"},
      {"tau-threshold", "evolution time needed to reach a fraction of the effective gap"},
      {"histogram", "proposal weight over (Hamming distance, delta-epsilon) bins"},
      {"mcmc-observable", "observable estimates across independent chains"},
      {"vmc", "RBM ground-state optimization trajectories"},
      {"mixing-time", "spectral gap, mixing-time bounds and exact mixing time"},
  };

  std::string chosen;
  for (const auto& name : qavmc::cli::kSubcommands) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("-c,--config", config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    auto* seed_opt = sub->add_option("--seed", seed, "override the master seed");
    auto* out_opt = sub->add_option("--output-dir", output_dir, "override the output directory");
    sub->add_option("--set", overrides.sets,
                    "override a config entry, dotted.path=json-value (repeatable)");
    sub->callback([&, name, seed_opt, out_opt]() {
      chosen = name;
      if (seed_opt->count()) overrides.seed = seed;
      if (out_opt->count()) overrides.output_dir = output_dir;
    });
  }

  CLI11_PARSE(app, argc, argv);
  return qavmc::cli::run_subcommand(chosen, config_path, overrides);
}
