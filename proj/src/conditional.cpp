#include "thirdassay/conditional.hpp"

#include <algorithm>
#include <cmath>

#include "thirdassay/errors.hpp"
#include "thirdassay/parallel.hpp"
#include "thirdassay/quadrature.hpp"
#include "thirdassay/threshold.hpp"

namespace thirdassay {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw InputError(std::string(what) + ": argument must be finite");
}

std::vector<double> with_breakpoints(double lo, double hi, std::initializer_list<double> candidates) {
  std::vector<double> points = {lo, hi};
  for (double c : candidates) {
    if (c > lo && c < hi) points.push_back(c);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

double clamp_to(double x, double t) { return std::clamp(x, -t, t); }

}  // namespace

double default_truncation(ErrorModel model) { return model == ErrorModel::Normal ? 10.0 : 16.0; }

ConditionalSpec make_conditional_spec(ErrorModel model, double alpha, const ConditionalOptions& options) {
  const Threshold threshold = r_of_alpha(model, alpha);
  if (!(options.density_tol > 0.0) || !(options.probability_tol > 0.0)) {
    throw DomainError("conditional: tolerances must be positive");
  }
  if (options.truncation < 0.0 || !std::isfinite(options.truncation)) {
    throw DomainError("conditional: truncation must be nonnegative and finite");
  }
  const double t = options.truncation > 0.0 ? options.truncation : default_truncation(model);
  return {model, alpha, threshold.r, t, options.density_tol, options.probability_tol, options.evaluation_budget};
}

double g_2d(const ConditionalSpec& spec, double x) {
  require_finite(x, "g_2d");
  const ErrorModel model = spec.model;
  const double r = spec.r;
  const auto integrand = [model, r, x](double x1, double x2) {
    const bool inside = 4.0 * x > 3.0 * x1 + x2 && x1 - x2 > r;
    if (!inside) return 0.0;
    return 2.0 * pdf(model, 2.0 * x - x1) * pdf(model, x1) * pdf(model, x2);
  };
  const double t = spec.truncation;
  return quadrature::integrate_2d(integrand, {-t, t, -t, t}, spec.density_tol, spec.evaluation_budget).value;
}

double g_1d(const ConditionalSpec& spec, double x) {
  require_finite(x, "g_1d");
  const double t = spec.truncation;
  const double lo = std::max(-t, 2.0 * x - t);
  const double hi = std::min(t, 2.0 * x + t);
  if (!(lo < hi)) return 0.0;

  const ErrorModel model = spec.model;
  const double r = spec.r;
  const auto integrand = [model, r, x](double x1) {
    const double upper = std::min(x1 - r, 4.0 * x - 3.0 * x1);
    return 2.0 * pdf(model, 2.0 * x - x1) * pdf(model, x1) * cdf(model, upper);
  };
  // The two region constraints cross at x1 = x + r/4. The Laplace factors add kinks where
  // their arguments vanish.
  const auto points = model == ErrorModel::Normal
                          ? with_breakpoints(lo, hi, {x + 0.25 * r})
                          : with_breakpoints(lo, hi, {x + 0.25 * r, 0.0, 2.0 * x, r, 4.0 * x / 3.0});
  const double value = quadrature::integrate_1d(integrand, points, spec.density_tol, spec.evaluation_budget).value;
  return std::max(0.0, value);
}

double h(const ConditionalSpec& spec, double x) {
  require_finite(x, "h");
  return (2.0 / spec.alpha) * (g_1d(spec, x) + g_1d(spec, -x));
}

double exceedance(const ConditionalSpec& spec, double x) {
  require_finite(x, "exceedance");
  const double t = spec.truncation;
  const double lo = clamp_to(x, t);
  if (lo >= t) return 0.0;
  const auto points = with_breakpoints(lo, t, {0.0});
  const double value =
      quadrature::integrate_1d([&spec](double s) { return h(spec, s); }, points, spec.probability_tol, spec.evaluation_budget).value;
  return std::clamp(value, 0.0, 1.0);
}

double total_g(const ConditionalSpec& spec) {
  const double t = spec.truncation;
  const auto points = with_breakpoints(-t, t, {0.0});
  return quadrature::integrate_1d([&spec](double s) { return g_1d(spec, s); }, points,
                                  0.25 * spec.alpha * spec.probability_tol, spec.evaluation_budget)
      .value;
}

double total_h(const ConditionalSpec& spec) {
  const double t = spec.truncation;
  const auto points = with_breakpoints(-t, t, {0.0});
  return quadrature::integrate_1d([&spec](double s) { return h(spec, s); }, points, spec.probability_tol, spec.evaluation_budget).value;
}

DensityCurve curve(const ConditionalSpec& spec, std::span<const double> grid) {
  for (double x : grid) require_finite(x, "curve");
  if (!std::is_sorted(grid.begin(), grid.end())) throw InputError("curve: grid must be ordered");

  const std::size_t n = grid.size();
  DensityCurve out;
  out.xs.assign(grid.begin(), grid.end());
  out.g_plus.resize(n);
  out.g_minus.resize(n);
  out.h.resize(n);
  out.exceedance.resize(n);

  parallel_for(n, [&](std::size_t i) {
    out.g_plus[i] = g_1d(spec, grid[i]);
    out.g_minus[i] = g_1d(spec, -grid[i]);
    out.h[i] = (2.0 / spec.alpha) * (out.g_plus[i] + out.g_minus[i]);
  });
  if (n == 0) return out;

  // Integrals of h over [x_i, x_{i+1}] (clipped to the truncated line), then a right-to-left sum.
  const double t = spec.truncation;
  std::vector<double> pieces(n, 0.0);
  const auto h_of = [&spec](double s) { return h(spec, s); };
  const double piece_tol = spec.probability_tol / static_cast<double>(n + 1);
  parallel_for(n, [&](std::size_t i) {
    const double a = clamp_to(grid[i], t);
    const double b = i + 1 < n ? clamp_to(grid[i + 1], t) : t;
    if (a < b) pieces[i] = quadrature::integrate_1d(h_of, with_breakpoints(a, b, {0.0}), piece_tol,
                                                  spec.evaluation_budget).value;
  });
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    running += pieces[i];
    out.exceedance[i] = std::clamp(running, 0.0, 1.0);
  }
  return out;
}

std::vector<double> make_grid(double min, double max, double step) {
  if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(step)) {
    throw InputError("grid: bounds and step must be finite");
  }
  if (!(min <= max) || !(step > 0.0)) throw DomainError("grid: need min <= max and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  const double k0 = min / step;
  const bool aligned = std::abs(k0 - std::round(k0)) < 1e-9;
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = aligned ? (std::round(k0) + static_cast<double>(i)) * step : min + static_cast<double>(i) * step;
  }
  return xs;
}

}  // namespace thirdassay
