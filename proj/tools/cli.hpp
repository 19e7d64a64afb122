#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gausscap::cli {

enum ExitCode { kOk = 0, kInvalidInput = 2, kNumericalFailure = 3, kUsageError = 4 };

enum class OutputFormat { Json, Csv };

struct RunConfig {
  double tol_psd = 1e-9;  ///< CP / uncertainty checks on loaded objects
  double tol_sym = 1e-9;  ///< symmetry checks on measured covariance matrices
  double tol_opt = 1e-4;  ///< convergence of unconstrained capacity estimates
  int fock_cutoff = 25;
  OutputFormat output_format = OutputFormat::Json;
  int verbosity = 1;  ///< 0 silent, 1 warnings, 2 diagnostics
};

/// Parses a RunConfig JSON document; absent fields keep their defaults.
/// Throws gausscap::InvalidArgument naming the offending field.
RunConfig parse_config(const std::string& text);

/// Dispatches one command. `args` excludes the program name. The config file
/// path, when given, overrides GAUSSCAP_CONFIG.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::optional<std::string> config_path = std::nullopt);

}  // namespace gausscap::cli
