#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "thirdassay/distributions.hpp"

namespace thirdassay {

/// Z_j = (X1_j - X2_j) / sigma for paired assays whose common standard deviation is sigma.
/// Under the null, Z is the difference of two unit-variance errors, so Var(Z) = 2.
struct StandardizedSample {
  std::vector<double> z;
  double sigma = 1.0;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  ///< n - 1 denominator; 0 when n == 1
};

StandardizedSample standardize(std::span<const double> differences, double sigma);

/// Weighted Kolmogorov-Smirnov statistic
///   T_n = max_j |F(Z_j) - F_n(Z_j)| / sqrt(F(Z_j) (1 - F(Z_j))),
/// with F = diff_cdf(model, .) clamped to [1e-12, 1 - 1e-12] and F_n(z) = #{Z_i <= z} / n.
double t_n(std::span<const double> z, ErrorModel model);
double t_n(const StandardizedSample& sample, ErrorModel model);

/// Sorted Monte Carlo replicates of T_n for n-point samples drawn from the null law of Z.
/// Replicates are produced in blocks, block k drawing from RandomStream(seed).split(k).
class NullDistribution {
 public:
  NullDistribution(ErrorModel model, std::size_t n, std::size_t reps, std::uint64_t seed);

  /// (1 + #{T >= observed}) / (reps + 1).
  double p_value(double observed) const;

  std::span<const double> statistics() const { return sorted_; }
  std::size_t reps() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

double mc_pvalue(ErrorModel model, std::size_t n, double observed, std::size_t reps, std::uint64_t seed);

struct GofReport {
  ErrorModel model = ErrorModel::Normal;
  double t_n = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  double sample_mean = 0.0;
  double sample_sd = 0.0;

  bool operator==(const GofReport&) const = default;
};

/// standardize -> t_n -> mc_pvalue under both models. Index 0 is Normal, index 1 Laplace.
std::array<GofReport, 2> gof_report(std::span<const double> differences, double sigma, std::size_t reps,
                                    std::uint64_t seed);

/// sup_x |F_n(x) - F(x)| for a sorted sample and a continuous F (classical KS distance).
double sup_distance(std::span<const double> sorted_sample, const std::function<double(double)>& cdf);

}  // namespace thirdassay
