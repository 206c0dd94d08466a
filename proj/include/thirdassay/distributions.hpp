#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "thirdassay/random_stream.hpp"

namespace thirdassay {

/// Standardized (mean 0, variance 1) measurement-error laws.
/// Laplace uses scale b = 1/sqrt(2), i.e. f(x) = exp(-sqrt(2)|x|)/sqrt(2).
enum class ErrorModel { Normal, Laplace };

inline constexpr std::array<ErrorModel, 2> kAllModels = {ErrorModel::Normal, ErrorModel::Laplace};

std::string_view to_string(ErrorModel model);
std::optional<ErrorModel> parse_model(std::string_view name);

// Pure functions. Non-finite arguments throw InputError; domain violations throw DomainError.

double pdf(ErrorModel model, double x);
double cdf(ErrorModel model, double x);

/// Inverse of cdf. Requires 0 < p < 1.
double quantile(ErrorModel model, double p);

/// P(|X1 - X2| > r) for independent X1, X2 from the model. Requires r >= 0.
///   Normal:  erfc(r / 2)
///   Laplace: (1 + r/sqrt(2)) * exp(-sqrt(2) r)
double diff_tail(ErrorModel model, double r);

/// d/dr diff_tail(model, r).
double diff_tail_derivative(ErrorModel model, double r);

/// P(X1 - X2 <= z): the law of a difference of two independent unit-variance errors
/// (variance 2).
double diff_cdf(ErrorModel model, double z);

/// One draw by inverse-CDF transform of stream.uniform().
double draw(ErrorModel model, RandomStream& stream);

std::vector<double> sample(ErrorModel model, RandomStream& stream, std::size_t n);

}  // namespace thirdassay
