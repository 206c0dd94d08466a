#include "thirdassay/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace thirdassay::special {

namespace {

// Coefficients from W. J. Cody, "Rational Chebyshev approximations for the
// error function", Math. Comp. 23 (1969), as distributed in netlib specfun/erf.
constexpr std::array<double, 5> kA = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                                      3209.37758913846947, 0.185777706184603153};
constexpr std::array<double, 4> kB = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                                      2844.23683343917062};
constexpr std::array<double, 9> kC = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                                      298.635138197400131,  881.95222124176909,  1712.04761263407058,
                                      2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr std::array<double, 8> kD = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                                      1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                                      3439.36767414372164, 1230.33935480374942};
constexpr std::array<double, 6> kP = {0.305326634961232344, 0.360344899949804439, 0.125781726111229246,
                                      0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr std::array<double, 5> kQ = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                                      0.0605183413124413191, 0.00233520497626869185};

constexpr double kThresh = 0.46875;
constexpr double kXSmall = 1.11e-16;
constexpr double kXBig = 26.543;
constexpr double kInvSqrtPi = 0.56418958354775628695;

// erf(y) for |y| <= kThresh.
double erf_small(double y) {
  double ysq = std::abs(y) > kXSmall ? y * y : 0.0;
  double num = kA[4] * ysq;
  double den = ysq;
  for (int i = 0; i < 3; ++i) {
    num = (num + kA[i]) * ysq;
    den = (den + kB[i]) * ysq;
  }
  return y * (num + kA[3]) / (den + kB[3]);
}

// exp(-y*y) split as exp(-ysq^2)*exp(-del) keeps the relative accuracy of the product.
double exp_neg_square(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

// erfc(y) for y > kThresh.
double erfc_positive(double y) {
  if (y >= kXBig) return 0.0;
  double result;
  if (y <= 4.0) {
    double num = kC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kC[i]) * y;
      den = (den + kD[i]) * y;
    }
    result = (num + kC[7]) / (den + kD[7]);
  } else {
    const double ysq = 1.0 / (y * y);
    double num = kP[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + kP[i]) * ysq;
      den = (den + kQ[i]) * ysq;
    }
    result = ysq * (num + kP[4]) / (den + kQ[4]);
    result = (kInvSqrtPi - result) / y;
  }
  return exp_neg_square(y) * result;
}

double horner(const double* c, int degree, double x) {
  double acc = c[degree];
  for (int i = degree - 1; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

// AS241 (PPND16), Wichura 1988. Coefficients in ascending order.
constexpr double kQa[] = {3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
                          1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                          3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kQb[] = {1.0,
                          4.2313330701600911252e+1,
                          6.8718700749205790830e+2,
                          5.3941960214247511077e+3,
                          2.1213794301586595867e+4,
                          3.9307895800092710610e+4,
                          2.8729085735721942674e+4,
                          5.2264952788528545610e+3};
constexpr double kQc[] = {1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
                          3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
                          2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kQd[] = {1.0,
                          2.05319162663775882187e0,
                          1.67638483018380384940e0,
                          6.89767334985100004550e-1,
                          1.48103976427480074590e-1,
                          1.51986665636164571966e-2,
                          5.47593808499534494600e-4,
                          1.05075007164441684324e-9};
constexpr double kQe[] = {6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
                          2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                          2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kQf[] = {1.0,
                          5.99832206555887937690e-1,
                          1.36929880922735805310e-1,
                          1.48753612908506148525e-2,
                          7.86869131145613259100e-4,
                          1.84631831751005468180e-5,
                          1.42151175831644588870e-7,
                          2.04426310338993978564e-15};

double as241(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(kQa, 7, r) / horner(kQb, 7, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = horner(kQc, 7, r) / horner(kQd, 7, r);
  } else {
    r -= 5.0;
    x = horner(kQe, 7, r) / horner(kQf, 7, r);
  }
  return q < 0.0 ? -x : x;
}

}  // namespace

double erf(double x) {
  const double y = std::abs(x);
  if (y <= kThresh) return erf_small(x);
  const double result = (0.5 - erfc_positive(y)) + 0.5;
  return x < 0.0 ? -result : result;
}

double erfc(double x) {
  const double y = std::abs(x);
  if (y <= kThresh) return 1.0 - erf_small(x);
  const double tail = erfc_positive(y);
  return x < 0.0 ? (1.0 - tail) + 1.0 : tail;
}

double normal_cdf(double x) { return 0.5 * erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_quantile_as241(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return as241(p);
}

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  double x = as241(p);
  // Residual taken on the smaller tail so that 1 - p is never formed inexactly.
  const double resid = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - 0.5 * erfc(x * std::numbers::sqrt2 / 2.0);
  const double u = resid * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  if (std::isfinite(u)) x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace thirdassay::special
