#include "thirdassay/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thirdassay/errors.hpp"
#include "thirdassay/parallel.hpp"
#include "thirdassay/random_stream.hpp"

namespace thirdassay {

namespace {

constexpr double kWeightClamp = 1e-12;
constexpr std::size_t kRepsPerBlock = 256;

double t_n_sorted(std::span<const double> sorted, ErrorModel model) {
  const std::size_t n = sorted.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double best = 0.0;
  std::size_t i = 0;
  while (i < n) {
    // F_n counts every point <= Z_j, so a run of ties shares the count at its end.
    std::size_t j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    const double fn = static_cast<double>(j + 1) * inv_n;
    const double f = std::clamp(diff_cdf(model, sorted[i]), kWeightClamp, 1.0 - kWeightClamp);
    best = std::max(best, std::abs(f - fn) / std::sqrt(f * (1.0 - f)));
    i = j + 1;
  }
  return best;
}

}  // namespace

StandardizedSample standardize(std::span<const double> differences, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("standardize: sigma must be positive");
  if (differences.empty()) throw DomainError("standardize: no observations");
  StandardizedSample s;
  s.sigma = sigma;
  s.n = differences.size();
  s.z.reserve(s.n);
  for (double d : differences) {
    if (!std::isfinite(d)) throw InputError("standardize: observations must be finite");
    s.z.push_back(d / sigma);
  }
  const double m = static_cast<double>(s.n);
  s.mean = std::accumulate(s.z.begin(), s.z.end(), 0.0) / m;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : s.z) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (m - 1.0));
  }
  return s;
}

double t_n(std::span<const double> z, ErrorModel model) {
  if (z.empty()) throw DomainError("t_n: empty sample");
  std::vector<double> sorted(z.begin(), z.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw InputError("t_n: observations must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  return t_n_sorted(sorted, model);
}

double t_n(const StandardizedSample& sample, ErrorModel model) { return t_n(sample.z, model); }

NullDistribution::NullDistribution(ErrorModel model, std::size_t n, std::size_t reps, std::uint64_t seed) {
  if (n == 0) throw DomainError("null distribution: n must be at least 1");
  if (reps == 0) throw DomainError("null distribution: reps must be at least 1");
  sorted_.resize(reps);
  const std::size_t blocks = (reps + kRepsPerBlock - 1) / kRepsPerBlock;
  const RandomStream root(seed);
  parallel_for(blocks, [&](std::size_t k) {
    RandomStream stream = root.split(k);
    std::vector<double> z(n);
    const std::size_t end = std::min(reps, (k + 1) * kRepsPerBlock);
    for (std::size_t rep = k * kRepsPerBlock; rep < end; ++rep) {
      for (auto& v : z) {
        const double x1 = draw(model, stream);
        const double x2 = draw(model, stream);
        v = x1 - x2;
      }
      std::sort(z.begin(), z.end());
      sorted_[rep] = t_n_sorted(z, model);
    }
  });
  std::sort(sorted_.begin(), sorted_.end());
}

double NullDistribution::p_value(double observed) const {
  if (!(observed >= 0.0)) throw DomainError("p_value: observed statistic must be nonnegative");
  const auto at_least = static_cast<double>(sorted_.end() - std::lower_bound(sorted_.begin(), sorted_.end(), observed));
  return (1.0 + at_least) / (static_cast<double>(sorted_.size()) + 1.0);
}

double mc_pvalue(ErrorModel model, std::size_t n, double observed, std::size_t reps, std::uint64_t seed) {
  if (!(observed >= 0.0)) throw DomainError("mc_pvalue: observed statistic must be nonnegative");
  return NullDistribution(model, n, reps, seed).p_value(observed);
}

std::array<GofReport, 2> gof_report(std::span<const double> differences, double sigma, std::size_t reps,
                                    std::uint64_t seed) {
  const StandardizedSample sample = standardize(differences, sigma);
  std::array<GofReport, 2> reports;
  for (std::size_t i = 0; i < kAllModels.size(); ++i) {
    GofReport& r = reports[i];
    r.model = kAllModels[i];
    r.t_n = t_n(sample, r.model);
    r.p_value = mc_pvalue(r.model, sample.n, r.t_n, reps, seed);
    r.n = sample.n;
    r.reps = reps;
    r.seed = seed;
    r.sigma = sigma;
    r.sample_mean = sample.mean;
    r.sample_sd = sample.sd;
  }
  return reports;
}

double sup_distance(std::span<const double> sorted_sample, const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_sample.size();
  if (n == 0) throw DomainError("sup_distance: empty sample");
  const double inv_n = 1.0 / static_cast<double>(n);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_sample[i]);
    best = std::max({best, static_cast<double>(i + 1) * inv_n - f, f - static_cast<double>(i) * inv_n});
  }
  return best;
}

}  // namespace thirdassay
