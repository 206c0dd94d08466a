#include "thirdassay/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "thirdassay/errors.hpp"

namespace thirdassay::quadrature {

namespace {

// Kronrod 15-point abscissae (nonnegative half) and weights; Gauss 7-point weights at the
// odd-indexed Kronrod nodes.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr std::size_t kRuleEvaluations = 15;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a, b;
  double fa, fb;  // endpoint values; fed to the children so bisection costs no extra calls
  double fc;      // value at the center, which becomes an endpoint of both children
  double value;
  double error;
  double abs_value;
};

struct ByError {
  bool operator()(const Segment& lhs, const Segment& rhs) const { return lhs.error < rhs.error; }
};

// A jump or kink lying between an endpoint and the outermost node leaves all 15 samples on
// one smooth piece, and K15 and G7 then agree. A jump shows up as an endpoint slope far steeper
// than any interior slope, a kink as an endpoint curvature far above the interior one. The
// unresolved sliver mass is bounded by the endpoint misfit times the gap.
double sliver_error(const std::array<double, 15>& nodes, const std::array<double, 15>& values, double a, double fa,
                    double b, double fb, double scale) {
  const auto divided = [](double x0, double f0, double x1, double f1, double x2, double f2) {
    return ((f2 - f1) / (x2 - x1) - (f1 - f0) / (x1 - x0)) / (x2 - x0);
  };
  double interior_slope = 0.0;
  double interior_curvature = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    interior_slope = std::max(interior_slope, std::abs(values[i + 1] - values[i]) / (nodes[i + 1] - nodes[i]));
    if (i + 2 < nodes.size()) {
      interior_curvature = std::max(interior_curvature, std::abs(divided(nodes[i], values[i], nodes[i + 1],
                                                                         values[i + 1], nodes[i + 2], values[i + 2])));
    }
  }
  const double floor = 50.0 * kEps * scale;
  double error = 0.0;
  const auto check = [&](double endpoint, double f_end, double node, double f_node, double next, double f_next) {
    const double gap = std::abs(node - endpoint);
    const double jump = std::abs(f_end - f_node);
    if (jump > floor && jump > 8.0 * interior_slope * gap) {
      error += jump * gap;
      return;
    }
    // Misfit of the endpoint against the line through the two outermost nodes.
    const double curvature = divided(endpoint, f_end, node, f_node, next, f_next);
    const double misfit = std::abs(curvature * (endpoint - node) * (endpoint - next));
    if (misfit > floor && std::abs(curvature) > 8.0 * interior_curvature) error += misfit * gap;
  };
  if (a < nodes.front()) check(a, fa, nodes[0], values[0], nodes[1], values[1]);
  if (nodes.back() < b) check(b, fb, nodes[14], values[14], nodes[13], values[13]);
  return error;
}

Segment gauss_kronrod(const Integrand1d& f, double a, double b, double fa, double fb) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  // Nodes in increasing order: index 7 is the center, 7 -/+ (7 - j) mirror kXgk[j].
  std::array<double, 15> nodes{};
  std::array<double, 15> values{};
  nodes[7] = center;
  values[7] = f(center);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    nodes[j] = center - dx;
    nodes[14 - j] = center + dx;
    values[j] = f(nodes[j]);
    values[14 - j] = f(nodes[14 - j]);
  }

  const double fc = values[7];
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double abs_sum = kWgk[7] * std::abs(fc);
  for (std::size_t j = 0; j < 7; ++j) {
    const double pair = values[j] + values[14 - j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(values[j]) + std::abs(values[14 - j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }

  // QUADPACK error scaling: resasc approximates the integral of |f - mean f|.
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(values[j] - mean) + std::abs(values[14 - j] - mean));

  kronrod *= half;
  gauss *= half;
  abs_sum *= half;
  asc *= half;
  double error = std::abs(kronrod - gauss);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEps)) error = std::max(50.0 * kEps * abs_sum, error);

  double scale = std::max(std::abs(fa), std::abs(fb));
  for (double v : values) scale = std::max(scale, std::abs(v));
  error += sliver_error(nodes, values, a, fa, b, fb, scale);
  return {a, b, fa, fb, fc, kronrod, error, abs_sum};
}

void require_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("integrate: tolerance must be positive");
}

bool splittable(const Segment& s) {
  const double mid = 0.5 * (s.a + s.b);
  const double scale = std::max({1.0, std::abs(s.a), std::abs(s.b)});
  return mid > s.a && mid < s.b && (s.b - s.a) > 64.0 * kEps * scale;
}

template <class Heap>
void accumulate(const Heap& heap, const std::vector<Segment>& frozen, double& value, double& error, double& abs) {
  value = error = abs = 0.0;
  for (auto q = heap; !q.empty(); q.pop()) {
    value += q.top().value;
    error += q.top().error;
    abs += q.top().abs_value;
  }
  for (const auto& s : frozen) {
    value += s.value;
    error += s.error;
    abs += s.abs_value;
  }
}

IntegrationResult adapt(const Integrand1d& f, std::span<const double> points, double tol, std::size_t budget) {
  std::priority_queue<Segment, std::vector<Segment>, ByError> active;
  std::vector<Segment> frozen;
  IntegrationResult result;

  std::vector<double> ends(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) ends[i] = f(points[i]);
  result.evaluations += points.size();

  double total_error = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] <= points[i]) continue;
    Segment s = gauss_kronrod(f, points[i], points[i + 1], ends[i], ends[i + 1]);
    result.evaluations += kRuleEvaluations;
    total_error += s.error;
    total_abs += s.abs_value;
    active.push(s);
  }

  // Twice the per-segment roundoff floor, so a fully resolved integral always terminates.
  const auto target = [&] { return std::max(tol, 100.0 * kEps * total_abs); };

  while (!active.empty() && total_error > target()) {
    Segment worst = active.top();
    active.pop();
    if (!splittable(worst)) {
      frozen.push_back(worst);
      continue;
    }
    if (result.evaluations + 2 * kRuleEvaluations > budget) {
      active.push(worst);
      double value = 0.0;
      double error = 0.0;
      double abs = 0.0;
      accumulate(active, frozen, value, error, abs);
      throw ConvergenceError("integrate: evaluation budget exhausted", value, error);
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid, worst.fa, worst.fc);
    Segment right = gauss_kronrod(f, mid, worst.b, worst.fc, worst.fb);
    result.evaluations += 2 * kRuleEvaluations;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    active.push(left);
    active.push(right);

    // Running sums drift; refresh them now and then.
    if (active.size() % 256 == 0) {
      double ignored = 0.0;
      accumulate(active, frozen, ignored, total_error, total_abs);
    }
  }

  // Sum from left to right so the result does not depend on heap layout.
  std::vector<Segment> all = std::move(frozen);
  for (; !active.empty(); active.pop()) all.push_back(active.top());
  std::sort(all.begin(), all.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const auto& s : all) {
    result.value += s.value;
    result.error_estimate += s.error;
  }
  return result;
}

}  // namespace

IntegrationResult integrate_1d(const Integrand1d& f, double a, double b, double tol, std::size_t budget) {
  const std::array<double, 2> points = {a, b};
  return integrate_1d(f, points, tol, budget);
}

IntegrationResult integrate_1d(const Integrand1d& f, std::span<const double> points, double tol,
                               std::size_t budget) {
  require_tolerance(tol);
  if (points.size() < 2) throw DomainError("integrate: need at least two points");
  for (double p : points) {
    if (!std::isfinite(p)) throw DomainError("integrate: limits must be finite");
  }
  if (!std::is_sorted(points.begin(), points.end())) throw DomainError("integrate: limits must be ordered");
  return adapt(f, points, tol, budget);
}

IntegrationResult integrate_2d(const Integrand2d& f, const Rectangle& region, double tol, std::size_t budget) {
  require_tolerance(tol);
  const double width = region.x_max - region.x_min;
  if (!(width >= 0.0) || !(region.y_max >= region.y_min)) throw DomainError("integrate_2d: empty rectangle");
  if (width == 0.0) return {};

  const double inner_tol = tol / (2.0 * width);
  std::size_t inner_evaluations = 0;
  double inner_error = 0.0;
  const Integrand1d outer = [&](double x) {
    const auto inner = integrate_1d([&](double y) { return f(x, y); }, region.y_min, region.y_max, inner_tol, budget);
    inner_evaluations += inner.evaluations;
    inner_error = std::max(inner_error, inner.error_estimate);
    return inner.value;
  };
  auto result = integrate_1d(outer, region.x_min, region.x_max, 0.5 * tol, budget);
  result.evaluations = inner_evaluations;
  result.error_estimate += width * inner_error;
  return result;
}

}  // namespace thirdassay::quadrature
