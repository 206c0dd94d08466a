#include "thirdassay/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "thirdassay/errors.hpp"
#include "thirdassay/special_functions.hpp"

namespace thirdassay {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw InputError(std::string(what) + ": argument must be finite");
}

double laplace_quantile(double p) {
  return p < 0.5 ? kInvSqrt2 * std::log(2.0 * p) : -kInvSqrt2 * std::log(2.0 * (1.0 - p));
}

}  // namespace

std::string_view to_string(ErrorModel model) {
  return model == ErrorModel::Normal ? "normal" : "laplace";
}

std::optional<ErrorModel> parse_model(std::string_view name) {
  if (name == "normal" || name == "Normal") return ErrorModel::Normal;
  if (name == "laplace" || name == "Laplace") return ErrorModel::Laplace;
  return std::nullopt;
}

double pdf(ErrorModel model, double x) {
  require_finite(x, "pdf");
  if (model == ErrorModel::Normal) return kInvSqrt2Pi * std::exp(-0.5 * x * x);
  return kInvSqrt2 * std::exp(-kSqrt2 * std::abs(x));
}

double cdf(ErrorModel model, double x) {
  require_finite(x, "cdf");
  if (model == ErrorModel::Normal) return special::normal_cdf(x);
  const double half_tail = 0.5 * std::exp(-kSqrt2 * std::abs(x));
  return x < 0.0 ? half_tail : 1.0 - half_tail;
}

double quantile(ErrorModel model, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: probability must lie in (0, 1)");
  if (model == ErrorModel::Normal) return special::normal_quantile(p);
  return laplace_quantile(p);
}

double diff_tail(ErrorModel model, double r) {
  require_finite(r, "diff_tail");
  if (r < 0.0) throw DomainError("diff_tail: threshold must be nonnegative");
  if (model == ErrorModel::Normal) return special::erfc(0.5 * r);
  return (1.0 + kInvSqrt2 * r) * std::exp(-kSqrt2 * r);
}

double diff_tail_derivative(ErrorModel model, double r) {
  require_finite(r, "diff_tail_derivative");
  if (r < 0.0) throw DomainError("diff_tail_derivative: threshold must be nonnegative");
  if (model == ErrorModel::Normal) return -std::exp(-0.25 * r * r) / std::sqrt(std::numbers::pi);
  return -(kInvSqrt2 + r) * std::exp(-kSqrt2 * r);
}

double diff_cdf(ErrorModel model, double z) {
  require_finite(z, "diff_cdf");
  if (model == ErrorModel::Normal) return special::normal_cdf(z * kInvSqrt2);
  const double half_tail = 0.5 * diff_tail(model, std::abs(z));
  return z < 0.0 ? half_tail : 1.0 - half_tail;
}

double draw(ErrorModel model, RandomStream& stream) {
  const double u = stream.uniform();
  return model == ErrorModel::Normal ? special::normal_quantile_as241(u) : laplace_quantile(u);
}

std::vector<double> sample(ErrorModel model, RandomStream& stream, std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = draw(model, stream);
  return out;
}

}  // namespace thirdassay
