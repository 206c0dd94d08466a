#include "thirdassay/estimator.hpp"

#include <algorithm>
#include <numeric>

#include "thirdassay/parallel.hpp"
#include "thirdassay/random_stream.hpp"
#include "thirdassay/threshold.hpp"

namespace thirdassay {

namespace {

constexpr std::uint64_t kSimulationBlock = 1u << 16;
constexpr std::uint64_t kConditionalBlock = 1u << 12;

void summarize(SimulationSummary& s) {
  const auto& v = s.conditional_samples;
  if (v.empty()) return;
  const double m = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / m;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / (m - 1.0);
  }
}

}  // namespace

SimulationSummary simulate(ErrorModel model, double alpha, std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("simulate: n must be at least 1");
  const double r = r_of_alpha(model, alpha).r;

  const std::uint64_t blocks = (n + kSimulationBlock - 1) / kSimulationBlock;
  struct Block {
    std::vector<double> samples;
    std::uint64_t third_draws = 0;
  };
  std::vector<Block> results(blocks);
  const RandomStream root(seed);

  parallel_for(blocks, [&](std::size_t k) {
    RandomStream stream = root.split(k);
    const std::uint64_t begin = k * kSimulationBlock;
    const std::uint64_t end = std::min(n, begin + kSimulationBlock);
    Block& out = results[k];
    for (std::uint64_t i = begin; i < end; ++i) {
      const double x1 = draw(model, stream);
      const double x2 = draw(model, stream);
      const auto third = [&] {
        ++out.third_draws;
        return draw(model, stream);
      };
      const EstimatorOutcome o = estimate(x1, x2, third, r);
      if (o.rejected) out.samples.push_back(o.mu_hat);
    }
  });

  SimulationSummary s;
  s.model = model;
  s.alpha = alpha;
  s.r = r;
  s.n = n;
  s.seed = seed;
  for (auto& b : results) {
    s.third_draws += b.third_draws;
    s.conditional_samples.insert(s.conditional_samples.end(), b.samples.begin(), b.samples.end());
  }
  s.rejections = s.conditional_samples.size();
  s.rejection_rate = static_cast<double>(s.rejections) / static_cast<double>(n);
  summarize(s);
  return s;
}

ConditionalSamples conditional_sample(ErrorModel model, double alpha, std::uint64_t m, std::uint64_t seed) {
  if (m == 0) throw DomainError("conditional_sample: m must be at least 1");
  const double r = r_of_alpha(model, alpha).r;

  const std::uint64_t blocks = (m + kConditionalBlock - 1) / kConditionalBlock;
  std::vector<std::uint64_t> pairs(blocks, 0);
  ConditionalSamples out;
  out.values.resize(m);
  const RandomStream root(seed);

  parallel_for(blocks, [&](std::size_t k) {
    RandomStream stream = root.split(k);
    const std::uint64_t begin = k * kConditionalBlock;
    const std::uint64_t end = std::min(m, begin + kConditionalBlock);
    for (std::uint64_t i = begin; i < end; ++i) {
      for (;;) {
        ++pairs[k];
        const double x1 = draw(model, stream);
        const double x2 = draw(model, stream);
        if (std::abs(x1 - x2) <= r) continue;
        out.values[i] = estimate(x1, x2, [&] { return draw(model, stream); }, r).mu_hat;
        break;
      }
    }
  });
  out.pair_draws = std::accumulate(pairs.begin(), pairs.end(), std::uint64_t{0});
  return out;
}

std::vector<HistogramBin> centered_histogram(std::span<const double> values, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("histogram: width must be positive");
  if (values.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  if (!std::isfinite(*lo_it) || !std::isfinite(*hi_it)) throw InputError("histogram: values must be finite");
  const auto index = [width](double v) { return static_cast<long long>(std::floor(v / width + 0.5)); };
  const long long first = index(*lo_it);
  const long long last = index(*hi_it);

  std::vector<HistogramBin> bins;
  bins.reserve(static_cast<std::size_t>(last - first + 1));
  for (long long k = first; k <= last; ++k) bins.push_back({static_cast<double>(k) * width, 0, 0.0});
  for (double v : values) ++bins[static_cast<std::size_t>(index(v) - first)].count;
  const double scale = 1.0 / (static_cast<double>(values.size()) * width);
  for (auto& b : bins) b.density = static_cast<double>(b.count) * scale;
  return bins;
}

}  // namespace thirdassay
