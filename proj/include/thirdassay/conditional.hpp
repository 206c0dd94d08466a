#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "thirdassay/distributions.hpp"
#include "thirdassay/quadrature.hpp"

namespace thirdassay {

struct ConditionalOptions {
  /// Absolute quadrature tolerance for each evaluation of g.
  double density_tol = 1e-12;
  /// Absolute tolerance for integrated probabilities (exceedance, total mass).
  double probability_tol = 1e-10;
  /// Half-width T of the truncated real line; 0 selects the model default.
  double truncation = 0.0;
  /// Integrand evaluations allowed per one-dimensional quadrature pass.
  std::size_t evaluation_budget = quadrature::kDefaultEvaluationBudget;
};

/// Normal: 10. Laplace: 16 (exp(-sqrt(2) * 16) < 1e-9).
double default_truncation(ErrorModel model);

/// The conditioning event |X1 - X2| > r together with evaluation settings.
/// Build with make_conditional_spec so that r matches alpha.
struct ConditionalSpec {
  ErrorModel model;
  double alpha;
  double r;
  double truncation;
  double density_tol;
  double probability_tol;
  std::size_t evaluation_budget = quadrature::kDefaultEvaluationBudget;
};

ConditionalSpec make_conditional_spec(ErrorModel model, double alpha, const ConditionalOptions& options = {});

/// g(x) = d/dx P[(X1+X3)/2 <= x, X1-X2 > r, X3 > (X1+X2)/2], evaluated literally as the
/// double integral of 2 f(2x - x1) f(x1) f(x2) over {x2 < x1 - r, 3 x1 + x2 < 4x}, with the
/// indicator left inside the integrand. Slow; kept as an independent check on g_1d.
double g_2d(const ConditionalSpec& spec, double x);

/// The same g with the inner integral done in closed form:
///   g(x) = integral of 2 f(2x - x1) f(x1) F(min(x1 - r, 4x - 3 x1)) dx1.
double g_1d(const ConditionalSpec& spec, double x);

/// Conditional density of the reported value given rejection: (2/alpha) (g(x) + g(-x)).
double h(const ConditionalSpec& spec, double x);

/// P(reported value > x | rejection), integrating h over [x, T].
double exceedance(const ConditionalSpec& spec, double x);

/// Integral of g over [-T, T]; equals alpha / 4 analytically.
double total_g(const ConditionalSpec& spec);

/// Direct quadrature of h over [-T, T]; equals 1 analytically.
double total_h(const ConditionalSpec& spec);

struct DensityCurve {
  std::vector<double> xs;
  std::vector<double> g_plus;   ///< g(x_i)
  std::vector<double> g_minus;  ///< g(-x_i)
  std::vector<double> h;        ///< (2/alpha)(g_plus + g_minus)
  std::vector<double> exceedance;
};

/// Evaluates the curve on an ordered grid. Exceedance values are accumulated from the right
/// by integrating h between consecutive grid points. Grid points are evaluated in parallel.
DensityCurve curve(const ConditionalSpec& spec, std::span<const double> grid);

/// min, min + step, ... up to max (inclusive; a single point when min == max, with a 1e-9 step slack). When min is a multiple of
/// step the points are exact multiples, so symmetric ranges give exactly symmetric grids.
std::vector<double> make_grid(double min, double max, double step);

}  // namespace thirdassay
