#pragma once

#include <vector>

#include "thirdassay/distributions.hpp"

namespace thirdassay {

/// A rejection rate alpha bound to the difference quantile r with P(|X1 - X2| > r) = alpha.
struct Threshold {
  ErrorModel model;
  double alpha;
  double r;
};

inline constexpr double kThresholdResidual = 1e-10;

/// Solves diff_tail(model, r) = alpha by bisection on [0, 50] refined with Newton steps.
/// Throws DomainError unless 0 < alpha < 1.
Threshold r_of_alpha(ErrorModel model, double alpha);

/// t with P(|X| > t) = alpha for a single standardized observation.
///   Normal:  Phi^{-1}(1 - alpha/2)
///   Laplace: -ln(alpha) / sqrt(2)
/// This single-observation quantile is the quantity the classic tail-thickness table lists; it is
/// not the difference quantile the rejection rule uses (see r_of_alpha).
double two_sided_quantile(ErrorModel model, double alpha);

struct TailRow {
  double alpha;
  double normal;   ///< rounded to 3 decimals
  double laplace;  ///< rounded to 3 decimals
};

/// Two-sided quantiles for alpha in {0.10, 0.05, 0.025, 0.01, 0.005}.
std::vector<TailRow> tail_thickness_table();

}  // namespace thirdassay
