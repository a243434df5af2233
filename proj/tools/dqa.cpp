#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dqa/config.hpp"
#include "dqa/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Digitized annealing and QAOA experiments on the transverse-field Ising chain"};

  std::string experiment;
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::string> overrides;
  bool timestamp = false;

  app.add_option("-e,--experiment", experiment,
                 "bound-scan | regular | degeneracy | compare-schedules | collapse | field-scan | validate");
  app.add_option("-c,--config", config_file, "INI file; top-level keys plus a [<experiment>] section")
      ->check(CLI::ExistingFile);
  app.add_option("-s,--seed", seed, "Seed for stochastic experiments");
  app.add_option("-o,--out", out_dir, "Output directory (default: $DQA_OUTPUT_DIR or .)");
  app.add_option("-j,--threads", threads, "Worker threads; never changes results")->check(CLI::PositiveNumber);
  app.add_option("--set", overrides, "Parameter override key=value (repeatable)");
  app.add_flag("--timestamp", timestamp, "Record wall-clock time in JSON metadata");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dqa::kExitOk : dqa::kExitConfigError;
  }

  try {
    std::optional<std::filesystem::path> file;
    if (!config_file.empty()) file = config_file;
    dqa::RunConfig config = dqa::load_config(file, experiment);
    dqa::apply_overrides(config, overrides);
    if (seed) config.seed = seed;
    if (out_dir.empty()) {
      const char* env = std::getenv("DQA_OUTPUT_DIR");
      out_dir = env && *env ? env : ".";
    }
    config.out_dir = out_dir;
    config.threads = threads;
    config.timestamp = timestamp;

    const dqa::RunOutcome outcome = dqa::run_experiment(config, std::cerr);
    for (const auto& f : outcome.files) std::cout << f.string() << '\n';
    return outcome.exit_code;
  } catch (const dqa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return dqa::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dqa::kExitValidationFailure;
  }
}
