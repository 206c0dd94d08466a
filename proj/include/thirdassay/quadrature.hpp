#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace thirdassay::quadrature {

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;  ///< always >= 0
  std::size_t evaluations = 0;  ///< integrand calls, summed over all nested passes
};

struct Rectangle {
  double x_min, x_max;
  double y_min, y_max;
};

inline constexpr std::size_t kDefaultEvaluationBudget = 1'000'000;

using Integrand1d = std::function<double(double)>;
using Integrand2d = std::function<double(double, double)>;

/// Globally adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
///
/// The interval with the largest local error estimate is bisected until the summed estimate
/// drops to tol (or to a floor of a few ulps of the absolute integral, whichever is larger).
/// Local errors use the QUADPACK scaling of |K15 - G7|.
/// Jumps and kinks are absorbed by repeated bisection around them.
///
/// Throws DomainError for tol <= 0 or a > b, ConvergenceError (carrying the best estimate)
/// once more than `budget` integrand evaluations would be needed.
IntegrationResult integrate_1d(const Integrand1d& f, double a, double b, double tol,
                               std::size_t budget = kDefaultEvaluationBudget);

/// As above, with the domain pre-split at `points` (sorted, first/last are the limits).
/// Use for integrands with known kink locations.
IntegrationResult integrate_1d(const Integrand1d& f, std::span<const double> points, double tol,
                               std::size_t budget = kDefaultEvaluationBudget);

/// Iterated adaptive integration over a rectangle: outer pass over x, inner pass over y.
/// The inner tolerance is tol / (2 * (x_max - x_min)) so the accumulated inner error stays
/// within tol / 2; the outer pass gets the other half. `budget` applies to each 1-D pass.
IntegrationResult integrate_2d(const Integrand2d& f, const Rectangle& region, double tol,
                               std::size_t budget = kDefaultEvaluationBudget);

}  // namespace thirdassay::quadrature
