#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thirdassay/distributions.hpp"

namespace thirdassay::cli {

enum class Command { Table1, Threshold, Pdf, Density, Exceedance, Simulate, Gof, GenData };

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitInput = 3,
  kExitNonConvergence = 4,
};

inline constexpr const char* kSeedEnvVar = "THIRDASSAY_SEED";
inline constexpr std::uint64_t kDefaultSeed = 20231015;

struct RunConfig {
  Command command = Command::Table1;
  std::optional<ErrorModel> model;  ///< unset means both models where that makes sense
  double alpha = 0.05;
  double sigma = 0.4;
  double grid_min = -4.0;
  double grid_max = 4.0;
  double grid_step = 0.01;
  std::optional<std::uint64_t> samples;  ///< command-specific default when unset
  std::uint64_t reps = 100000;
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-8;
  std::uint64_t max_evals = 1'000'000;  ///< quadrature evaluations per pass (density, exceedance)
  double bin_width = 0.1;
  double mean = 0.0;  ///< true value used by gen-data
  std::string input;
  std::string output;  ///< empty means stdout
  std::string out_dir = ".";
  bool diff_column = false;
  bool markdown = false;
};

/// Malformed command line. The message is ready for display.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv into a RunConfig. Throws UsageError or HelpRequested.
RunConfig parse_args(int argc, const char* const* argv);

/// Checks cross-field invariants (grid_min < grid_max, positive step, ...). Throws DomainError.
void validate(const RunConfig& config);

/// Executes one command. Diagnostics go to `err`; the returned value is an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + validate + run with exit-code mapping; what main() calls.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads assay differences from CSV: header `x1,x2` (difference x1 - x2 per row) or, with
/// diff_column, header `diff`. Blank lines are skipped; malformed rows throw InputError.
/// Warnings (for example ignored extra columns) are appended to `warnings`.
std::vector<double> read_differences(std::istream& in, bool diff_column, std::vector<std::string>& warnings);

}  // namespace thirdassay::cli
