#pragma once

// Scalar special functions: log-gamma, polygamma of orders 0..3 and the
// chi-squared distribution. All functions are pure and thread-safe.

namespace glmcorr {

// Degrees of freedom of a central chi-squared reference distribution.
struct ChiSquared {
  int df = 1;
};

double log_gamma(double x);

// psi^(order)(x) for order in 0..3 (digamma, trigamma, tetragamma, pentagamma).
double polygamma(int order, double x);

inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }

// Regularized lower/upper incomplete gamma functions P(a, x) and Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chisq_cdf(double x, ChiSquared ref);
// Upper-tail probability P(X > x).
double chisq_sf(double x, ChiSquared ref);
double chisq_pdf(double x, ChiSquared ref);

// Inverse of chisq_sf: returns x with chisq_sf(x, ref) == p, so that
// chisq_quantile(alpha, ref) is the upper-alpha critical value.
double chisq_quantile(double p, ChiSquared ref);

}  // namespace glmcorr
