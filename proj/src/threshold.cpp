#include "thirdassay/threshold.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "thirdassay/errors.hpp"

namespace thirdassay {

namespace {

void require_probability(double alpha, const char* what) {
  if (!std::isfinite(alpha)) throw InputError(std::string(what) + ": alpha must be finite");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(std::string(what) + ": alpha must lie in (0, 1)");
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

Threshold r_of_alpha(ErrorModel model, double alpha) {
  require_probability(alpha, "r_of_alpha");

  // diff_tail is strictly decreasing from 1 at r = 0.
  double lo = 0.0;
  double hi = 50.0;
  for (int i = 0; i < 60 && hi - lo > 1e-6; ++i) {
    const double mid = 0.5 * (lo + hi);
    (diff_tail(model, mid) > alpha ? lo : hi) = mid;
  }

  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const double residual = diff_tail(model, r) - alpha;
    const double slope = diff_tail_derivative(model, r);
    if (residual == 0.0 || slope == 0.0) break;
    double next = r - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    (diff_tail(model, next) > alpha ? lo : hi) = next;
    if (std::abs(next - r) <= 4.0 * std::numeric_limits<double>::epsilon() * next) {
      r = next;
      break;
    }
    r = next;
  }
  return {model, alpha, r};
}

double two_sided_quantile(ErrorModel model, double alpha) {
  require_probability(alpha, "two_sided_quantile");
  if (model == ErrorModel::Normal) return -quantile(model, 0.5 * alpha);
  return -std::log(alpha) / std::numbers::sqrt2;
}

std::vector<TailRow> tail_thickness_table() {
  constexpr std::array<double, 5> alphas = {0.10, 0.05, 0.025, 0.01, 0.005};
  std::vector<TailRow> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) {
    rows.push_back({a, round3(two_sided_quantile(ErrorModel::Normal, a)),
                    round3(two_sided_quantile(ErrorModel::Laplace, a))});
  }
  return rows;
}

}  // namespace thirdassay
