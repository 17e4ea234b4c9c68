#pragma once

#include <span>
#include <string>
#include <string_view>

#include "glmcorr/random.hpp"

namespace glmcorr {

enum class FamilyKind { Normal, Gamma, InverseNormal };

std::string_view to_string(FamilyKind kind);
// Accepts "normal", "gamma", "inverse-normal" (also "inverse_normal",
// "inverse-gaussian", "ig").
FamilyKind parse_family(std::string_view name);

// Variance function and its first two derivatives with respect to mu.
struct VarianceTriple {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};

// a1(phi), its first four derivatives, and the scaled quantities
// d_(k) = phi^k a1^(k)(phi) that enter every correction factor.
struct PhiDerivs {
  double a1 = 0.0;
  double a1_1 = 0.0;
  double a1_2 = 0.0;
  double a1_3 = 0.0;
  double a1_4 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
};

// One-parameter exponential dispersion family
//
//   pi(y; theta, phi) = exp{ phi [y theta - b(theta) + c(y)] + a(y, phi) },
//   a(y, phi) = phi a0(y) + a1(phi) + a2(y),
//
// with mean mu = b'(theta) and var(Y) = V(mu) / phi. The kind fully
// determines every callback; a Family is a trivially copyable value.
class Family {
 public:
  constexpr explicit Family(FamilyKind kind) : kind_(kind) {}

  constexpr FamilyKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

  // True when mu (or y) lies in the mean domain: all reals for Normal,
  // strictly positive otherwise.
  bool in_domain(double mu) const noexcept;
  void check_domain(double mu, std::string_view what = "mean") const;

  VarianceTriple variance(double mu) const;

  // theta = q(mu) = integral of 1/V(mu).
  double theta(double mu) const;
  // Cumulant function b(theta), db/dtheta = mu.
  double b(double theta) const;
  // v(z) = z q(z) - b(q(z)).
  double v(double z) const;
  // t(y) = v(y) + a0(y).
  double t(double y) const;
  // a2(y): the phi-free part of a(y, phi).
  double a2(double y) const;

  PhiDerivs phi_derivs(double phi) const;

  // Deviance D = 2 sum[v(y) - v(mu) + (mu - y) q(mu)].
  double deviance(std::span<const double> y, std::span<const double> mu) const;
  double unit_deviance(double y, double mu) const;

  // Solves a1'(phi) = (D/2 - sum t(y)) / n for the precision MLE.
  double solve_precision(double deviance, int n, double t_sum) const;

  // Log-likelihood of the sample at (mu, phi) expressed through the deviance:
  //   l = phi [sum t(y) - D/2] + n a1(phi) + sum a2(y).
  double log_likelihood(double deviance, double phi, double t_sum, double a2_sum, int n) const;

  // Draw with mean mu and variance V(mu)/phi.
  double sample(double mu, double phi, Rng& rng) const;

 private:
  FamilyKind kind_;
};

}  // namespace glmcorr
