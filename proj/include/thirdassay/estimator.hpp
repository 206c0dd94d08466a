#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "thirdassay/distributions.hpp"
#include "thirdassay/errors.hpp"

namespace thirdassay {

/// One execution of the duplicate-then-conditional-third protocol.
struct EstimatorOutcome {
  double x1 = 0.0;
  double x2 = 0.0;
  std::optional<double> x3;  ///< present iff rejected
  bool rejected = false;
  double mu_hat = 0.0;
};

/// Reports (x1 + x2)/2 when |x1 - x2| <= r. Otherwise calls `third` exactly once and reports
/// the average of x3 and whichever of x1, x2 lies closer to it; an exact tie goes to x1.
template <class Supplier>
  requires std::invocable<Supplier&> && std::convertible_to<std::invoke_result_t<Supplier&>, double>
EstimatorOutcome estimate(double x1, double x2, Supplier&& third, double r) {
  if (!std::isfinite(x1) || !std::isfinite(x2)) throw InputError("estimate: assays must be finite");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("estimate: threshold must be positive");

  EstimatorOutcome out{x1, x2, std::nullopt, false, 0.5 * (x1 + x2)};
  if (std::abs(x1 - x2) <= r) return out;

  const double x3 = static_cast<double>(third());
  if (!std::isfinite(x3)) throw InputError("estimate: third assay must be finite");
  const double closest = std::abs(x1 - x3) <= std::abs(x2 - x3) ? x1 : x2;
  out.x3 = x3;
  out.rejected = true;
  out.mu_hat = 0.5 * (closest + x3);
  return out;
}

struct SimulationSummary {
  ErrorModel model = ErrorModel::Normal;
  double alpha = 0.0;
  double r = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t rejections = 0;
  std::uint64_t third_draws = 0;  ///< number of times the third-assay supplier ran
  double rejection_rate = 0.0;
  std::vector<double> conditional_samples;  ///< mu_hat of rejected executions, in execution order
  double mean = 0.0;                        ///< of conditional_samples
  double variance = 0.0;                    ///< of conditional_samples (n - 1 denominator)

  bool operator==(const SimulationSummary&) const = default;
};

/// n protocol executions with standardized errors and r = r_of_alpha(model, alpha).
/// Work is cut into fixed blocks, block k drawing from RandomStream(seed).split(k), so the
/// result does not depend on the number of threads.
SimulationSummary simulate(ErrorModel model, double alpha, std::uint64_t n, std::uint64_t seed);

struct ConditionalSamples {
  std::vector<double> values;
  std::uint64_t pair_draws = 0;  ///< (X1, X2) pairs drawn, including those not rejected
};

/// m independent draws of mu_hat given |X1 - X2| > r, by rejection sampling on the pair.
ConditionalSamples conditional_sample(ErrorModel model, double alpha, std::uint64_t m, std::uint64_t seed);

struct HistogramBin {
  double center;
  std::uint64_t count;
  double density;  ///< count / (total * width)
};

/// Bins centered on integer multiples of `width`, spanning the data.
std::vector<HistogramBin> centered_histogram(std::span<const double> values, double width);

}  // namespace thirdassay
