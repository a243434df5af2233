#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "dqa/config.hpp"

namespace dqa {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
};

/// Runs one experiment and writes its CSV/JSON files into config.out_dir.
/// Progress and summaries go to `log`. Throws ConfigError for bad or
/// unknown parameters.
RunOutcome run_experiment(const RunConfig& config, std::ostream& log);

/// printf("%.17g")
std::string format_double(double v);

}  // namespace dqa
