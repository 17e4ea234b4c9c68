#include "glmcorr/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "glmcorr/errors.hpp"

namespace glmcorr {
namespace {

// B_2, B_4, ..., B_18.
constexpr std::array<double, 9> kBernoulliEven = {
    1.0 / 6.0,      -1.0 / 30.0,     1.0 / 42.0,  -1.0 / 30.0,     5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,      -3617.0 / 510.0, 43867.0 / 798.0};

constexpr double kAsymptoticThreshold = 10.0;

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Asymptotic (Bernoulli) expansion, valid for x >= kAsymptoticThreshold.
double polygamma_asymptotic(int order, double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  if (order == 0) {
    double sum = 0.0;
    double pw = inv2;
    for (std::size_t j = 0; j < kBernoulliEven.size(); ++j) {
      const int two_j = 2 * static_cast<int>(j + 1);
      sum += kBernoulliEven[j] / two_j * pw;
      pw *= inv2;
    }
    return std::log(x) - 0.5 * inv - sum;
  }
  // (-1)^(k+1) [ (k-1)!/x^k + k!/(2 x^(k+1)) + sum_j B_2j (2j+k-1)!/(2j)! / x^(2j+k) ]
  const double xk = std::pow(x, order);
  double sum = factorial(order - 1) / xk + factorial(order) / (2.0 * xk * x);
  double pw = inv2 / xk;
  for (std::size_t j = 0; j < kBernoulliEven.size(); ++j) {
    const int two_j = 2 * static_cast<int>(j + 1);
    // (2j+k-1)!/(2j)! = (2j+1)(2j+2)...(2j+k-1)
    double ratio = 1.0;
    for (int i = two_j + 1; i <= two_j + order - 1; ++i) ratio *= i;
    sum += kBernoulliEven[j] * ratio * pw;
    pw *= inv2;
  }
  return (order % 2 == 1) ? sum : -sum;
}

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

void check_incomplete_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma: shape must be positive");
  if (!(x >= 0.0) || std::isnan(x)) throw DomainError("incomplete gamma: argument must be >= 0");
}

void check_df(ChiSquared ref) {
  if (ref.df < 1) throw DomainError("chi-squared: degrees of freedom must be >= 1");
}

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) return -normal_quantile(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return boost::math::lgamma(x);
}

double polygamma(int order, double x) {
  if (order < 0 || order > 3) throw DomainError("polygamma: order must be in 0..3");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("polygamma: argument must be positive and finite, got " + std::to_string(x));
  }
  // psi^(k)(x) = psi^(k)(x + 1) - (-1)^k k! / x^(k+1)
  const double sign_fact = ((order % 2 == 0) ? 1.0 : -1.0) * factorial(order);
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += sign_fact / std::pow(x, order + 1);
    x += 1.0;
  }
  return polygamma_asymptotic(order, x) - shift;
}

double gamma_p(double a, double x) {
  check_incomplete_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_incomplete_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chisq_cdf(double x, ChiSquared ref) {
  check_df(ref);
  if (std::isnan(x) || x < 0.0) throw DomainError("chisq_cdf: argument must be >= 0");
  return gamma_p(0.5 * ref.df, 0.5 * x);
}

double chisq_sf(double x, ChiSquared ref) {
  check_df(ref);
  if (std::isnan(x) || x < 0.0) throw DomainError("chisq_sf: argument must be >= 0");
  return gamma_q(0.5 * ref.df, 0.5 * x);
}

double chisq_pdf(double x, ChiSquared ref) {
  check_df(ref);
  if (std::isnan(x) || x < 0.0) throw DomainError("chisq_pdf: argument must be >= 0");
  const double k = 0.5 * ref.df;
  if (x == 0.0) {
    if (ref.df == 1) return std::numeric_limits<double>::infinity();
    return ref.df == 2 ? 0.5 : 0.0;
  }
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - log_gamma(k));
}

double chisq_quantile(double p, ChiSquared ref) {
  check_df(ref);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chisq_quantile: probability must lie in (0, 1)");
  const double k = ref.df;

  // Wilson-Hilferty start.
  const double z = normal_quantile(1.0 - p);
  const double h = 2.0 / (9.0 * k);
  double x = k * std::pow(std::max(1.0 - h + z * std::sqrt(h), 1e-3), 3);

  // Residual in whichever tail is better conditioned; both decrease in x
  // after the sign flip below.
  const bool use_lower = p > 0.5;
  const double target = use_lower ? 1.0 - p : p;
  auto residual = [&](double v) {
    return use_lower ? target - chisq_cdf(v, ref) : chisq_sf(v, ref) - target;
  };

  double lo = 0.0;
  double hi = std::max(2.0 * x, k + 10.0);
  while (residual(hi) > 0.0) hi *= 2.0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 300; ++iter) {
    const double r = residual(x);
    if (r == 0.0) return x;
    if (r > 0.0) lo = x; else hi = x;
    const double dens = chisq_pdf(x, ref);
    double next = (std::isfinite(dens) && dens > 0.0) ? x + r / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * std::max(x, 1e-300)) return next;
    x = next;
  }
  return x;
}

}  // namespace glmcorr
