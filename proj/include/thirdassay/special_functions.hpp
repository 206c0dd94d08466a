#pragma once

namespace thirdassay::special {

/// erf(x) by W. J. Cody's rational Chebyshev approximations.
double erf(double x);

/// erfc(x) = 1 - erf(x), without cancellation for large x.
double erfc(double x);

/// Standard normal lower-tail probability Phi(x).
double normal_cdf(double x);

/// Inverse of Phi. Wichura's AS241 followed by one Halley correction step.
/// Requires 0 < p < 1; returns -inf/+inf at the endpoints.
double normal_quantile(double p);

/// AS241 alone (about 16 significant digits, no refinement). Used on sampling hot paths.
double normal_quantile_as241(double p);

}  // namespace thirdassay::special
