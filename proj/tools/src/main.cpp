#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "qtensor/cli/config.hpp"
#include "qtensor/cli/dispatch.hpp"
#include "qtensor/cli/manifest.hpp"
#include "qtensor/errors.hpp"

int main(int argc, char** argv) {
  using namespace qtensor;

  CLI::App app{"Energy-stable Q-tensor flow with inertia: simulations and convergence studies", "qtensor"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::version());

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::optional<int> reference_level;

  const std::pair<const char*, const char*> commands[] = {
      {"run", "single simulation with an energy trace"},
      {"space-refine", "mesh refinement study against a fine reference"},
      {"time-refine", "time step refinement study against a small-dt reference"},
      {"sigma-study", "zero-inertia study with perturbed initial data"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "INI config file; omitted keys keep their defaults")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides experiment.output_dir)");
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--reference-level", reference_level, "reference mesh level k, h = 2^-k (space-refine)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return cli::kValidationFailure;
  }

  const auto kind = *cli::kind_from_subcommand(app.get_subcommands().front()->get_name());
  ExperimentConfig config;
  try {
    config = config_path.empty() ? default_config(kind) : cli::parse_config_file(config_path, kind);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (threads > 0) config.workers = threads;
    if (reference_level) config.reference_level = *reference_level;
    config.validate();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kValidationFailure;
  }
  return cli::dispatch(config, std::cout, std::cerr);
}
