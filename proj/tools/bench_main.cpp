#include "gard/bench.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
};

int run(const std::string& subcommand, const Options& opt) {
  using namespace gard::bench;
  const Experiment experiment = parse_experiment(subcommand);
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (!opt.preset.empty()) {
    cfg = preset(opt.preset);
    if (cfg.experiment != experiment) {
      throw ConfigError("preset '" + opt.preset + "' is a " + to_string(cfg.experiment) + " experiment, not " +
                        to_string(experiment));
    }
  }
  if (!opt.config.empty()) cfg = load_config_file(cfg, opt.config);
  if (cfg.experiment != experiment) {
    throw ConfigError("config experiment '" + to_string(cfg.experiment) + "' does not match subcommand '" +
                      subcommand + "'");
  }
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (opt.workers) cfg.workers = *opt.workers;
  if (opt.out) cfg.output_path = *opt.out;

  const BenchResult res = run_experiment(cfg);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& path : write_outputs(res, cfg.output_path)) std::cout << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GARD robust regression experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gard::bench::kVersion);
  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "Print the named presets and exit");

  Options opt;
  const std::vector<std::pair<const char*, const char*>> subcommands{
      {"mse-sweep", "MSE and run time versus outlier fraction"},
      {"scaling", "MSE and run time versus n at fixed m"},
      {"support", "Support recovery with theory bounds"},
      {"phase", "50% success crossing versus m"},
      {"noise-suite", "Heavy-tailed and mixed noise Tests A-D"},
      {"certify", "Brute-force certificates for each trial instance"},
  };
  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opt.config, "JSON config file applied on top of the preset");
    sub->add_option("--preset", opt.preset, "Named base configuration");
    sub->add_option("--seed", opt.seed, "Master seed");
    sub->add_option("--out", opt.out, "Output prefix: writes <out>.csv, <out>_trials.csv, <out>.json");
    sub->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  }

  // --list-presets works without a subcommand.
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--list-presets") {
      for (const auto& name : gard::bench::preset_names()) std::cout << name << '\n';
      return 0;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (opt.config.empty() && opt.preset.empty()) {
    std::cerr << "error: give --config and/or --preset\n";
    return kExitConfig;
  }
  try {
    return run(chosen->get_name(), opt);
  } catch (const gard::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gard::theory::BudgetExceededError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
