#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "thirdassay/conditional.hpp"
#include "thirdassay/errors.hpp"
#include "thirdassay/quadrature.hpp"

using namespace thirdassay;

namespace {

double oracle_draw(ErrorModel m, std::mt19937_64& gen) {
  if (m == ErrorModel::Normal) return std::normal_distribution<double>()(gen);
  std::exponential_distribution<double> e(1.0);
  return (e(gen) - e(gen)) / std::sqrt(2.0);
}

// Fraction of triples with X1 - X2 > r, X3 nearer X1 than X2, and (X1 + X3)/2 <= x.
double mc_g_mass(ErrorModel m, double r, double x, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = oracle_draw(m, gen);
    const double x2 = oracle_draw(m, gen);
    const double x3 = oracle_draw(m, gen);
    hits += x1 - x2 > r && std::abs(x3 - x1) < std::abs(x3 - x2) && 0.5 * (x1 + x3) <= x;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double integral_of_g(const ConditionalSpec& spec, double to) {
  return quadrature::integrate_1d([&](double x) { return g_1d(spec, x); }, -spec.truncation, to, 1e-11).value;
}

}  // namespace

TEST_CASE("spec construction") {
  const auto spec = make_conditional_spec(ErrorModel::Laplace, 0.05);
  CHECK(spec.r == doctest::Approx(2.908332510839374).epsilon(1e-12));
  CHECK(spec.truncation == 16.0);
  CHECK(make_conditional_spec(ErrorModel::Normal, 0.05).truncation == 10.0);
  CHECK(make_conditional_spec(ErrorModel::Normal, 0.05, {1e-10, 1e-8, 7.0}).truncation == 7.0);
  CHECK_THROWS_AS(make_conditional_spec(ErrorModel::Normal, 0.0), DomainError);
  CHECK_THROWS_AS(make_conditional_spec(ErrorModel::Normal, 0.05, {1e-10, 1e-8, -1.0}), DomainError);
}

TEST_CASE("g is nonnegative and vanishes at the truncation edge") {
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    for (double x = -6.0; x <= 6.0; x += 0.125) CHECK(g_1d(spec, x) >= 0.0);
    CHECK(g_2d(spec, -spec.truncation) <= 1e-12);
    CHECK(g_1d(spec, -spec.truncation) <= 1e-12);
  }
}

TEST_CASE("closed inner integral agrees with the literal double integral") {
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    for (double x : {-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0}) {
      CAPTURE(x);
      CHECK(std::abs(g_1d(spec, x) - g_2d(spec, x)) <= 1e-8);
    }
  }
}

TEST_CASE("g is continuous") {
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    double previous = g_1d(spec, -4.0);
    double largest_step = 0.0;
    for (double x = -4.0 + 1e-3; x <= 4.0; x += 1e-3) {
      const double value = g_1d(spec, x);
      largest_step = std::max(largest_step, std::abs(value - previous));
      previous = value;
    }
    CAPTURE(to_string(m));
    CHECK(largest_step < 1e-4);
  }
}

TEST_CASE("mass of g") {
  for (ErrorModel m : kAllModels) {
    for (double alpha : {0.01, 0.05, 0.10}) {
      const auto spec = make_conditional_spec(m, alpha);
      CAPTURE(alpha);
      CHECK(std::abs(total_g(spec) - alpha / 4.0) <= 1e-9);
    }
  }
}

TEST_CASE("mass of the literal double integral") {
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05, {1e-9, 1e-7, 0.0});
    const double mass = quadrature::integrate_1d([&](double x) { return g_2d(spec, x); }, -spec.truncation,
                                                 spec.truncation, 1e-8)
                            .value;
    CHECK(std::abs(mass - 0.0125) <= 1e-6);
  }
}

TEST_CASE("partial mass of g against a counting oracle") {
  const std::size_t n = 10'000'000;
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    for (double x : {0.0, 0.75, 2.0}) {
      const double exact = integral_of_g(spec, x);
      const double estimate = mc_g_mass(m, spec.r, x, n, 31 + static_cast<std::uint64_t>(x * 4));
      const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(n));
      CAPTURE(to_string(m));
      CAPTURE(x);
      CHECK(std::abs(estimate - exact) <= 3.0 * se);
    }
  }
}

TEST_CASE("h is a symmetric probability density") {
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    for (double x : {0.1, 0.7, 1.3, 2.9}) CHECK(h(spec, x) == doctest::Approx(h(spec, -x)).epsilon(1e-14));
    CHECK(std::abs(total_h(spec) - 1.0) <= 1e-9);
    CHECK(std::abs(4.0 / spec.alpha * total_g(spec) - 1.0) <= 1e-9);
    CHECK(h(spec, 0.4) == doctest::Approx(2.0 / spec.alpha * (g_1d(spec, 0.4) + g_1d(spec, -0.4))));
  }
}

TEST_CASE("shape") {
  const auto normal = make_conditional_spec(ErrorModel::Normal, 0.05);
  const auto laplace = make_conditional_spec(ErrorModel::Laplace, 0.05);
  // Normal: a dip at zero with modes on either side.
  CHECK(h(normal, 0.0) < h(normal, 0.25));
  CHECK(h(normal, 0.25) < h(normal, 0.5));
  CHECK(h(normal, 2.5) < h(normal, 0.5));
  // Laplace: peaked at zero.
  double best_x = 1.0;
  double best = -1.0;
  for (double x = -3.0; x <= 3.0; x += 0.01) {
    const double v = h(laplace, x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  CHECK(std::abs(best_x) < 0.011);
}

TEST_CASE("exceedance") {
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    CHECK(std::abs(exceedance(spec, 0.0) - 0.5) <= 1e-9);
    double previous = 1.0;
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double value = exceedance(spec, x);
      CHECK(value <= previous + 1e-12);
      CHECK(value >= 0.0);
      CHECK(value <= 1.0);
      previous = value;
    }
    CHECK(exceedance(spec, 0.8) + exceedance(spec, -0.8) == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto normal = make_conditional_spec(ErrorModel::Normal, 0.05);
  const auto laplace = make_conditional_spec(ErrorModel::Laplace, 0.05);
  for (double x = 0.3; x <= 1.2 + 1e-9; x += 0.1) {
    CAPTURE(x);
    CHECK(exceedance(normal, x) > exceedance(laplace, x));
  }
}

TEST_CASE("curve") {
  const auto grid = make_grid(-4.0, 4.0, 0.01);
  REQUIRE(grid.size() == 801);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i] == -grid[grid.size() - 1 - i]);

  double separation[2] = {0.0, 0.0};
  for (ErrorModel m : kAllModels) {
    const auto spec = make_conditional_spec(m, 0.05);
    const DensityCurve c = curve(spec, grid);
    REQUIRE(c.xs.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(c.g_plus[i] == c.g_minus[grid.size() - 1 - i]);
      CHECK(c.h[i] == doctest::Approx(h(spec, grid[i])).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < grid.size(); i += 50) {
      CHECK(std::abs(c.exceedance[i] - exceedance(spec, grid[i])) <= 1e-9);
    }
    // Distance of the positive mode from zero.
    const auto top = std::max_element(c.h.begin() + 400, c.h.end());
    separation[static_cast<int>(m)] = c.xs[static_cast<std::size_t>(top - c.h.begin())];
  }
  CHECK(separation[0] > 0.3);
  CHECK(separation[1] < 0.01);
}

TEST_CASE("make_grid") {
  const auto g = make_grid(0.0, 1.0, 0.25);
  CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(make_grid(1.0, 1.0, 0.1).size() == 1);
  CHECK_THROWS_AS(make_grid(1.0, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("shape across alpha") {
  for (double alpha : {0.005, 0.01, 0.025, 0.05, 0.075, 0.10}) {
    const auto spec = make_conditional_spec(ErrorModel::Normal, alpha);
    MESSAGE("normal alpha=" << alpha << " h(0)=" << h(spec, 0.0) << " h(0.5)=" << h(spec, 0.5)
                            << " h(1)=" << h(spec, 1.0));
  }
}
