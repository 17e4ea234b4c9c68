#include "glmcorr/family.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "glmcorr/errors.hpp"
#include "glmcorr/special_functions.hpp"

namespace glmcorr {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

void check_phi(double phi) {
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw DomainError("precision parameter must be positive and finite, got " + std::to_string(phi));
  }
}

constexpr double kPrecisionRelTol = 1e-10;
constexpr int kPrecisionMaxIter = 50;

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Normal: return "normal";
    case FamilyKind::Gamma: return "gamma";
    case FamilyKind::InverseNormal: return "inverse-normal";
  }
  return "unknown";
}

FamilyKind parse_family(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "normal" || s == "gaussian") return FamilyKind::Normal;
  if (s == "gamma") return FamilyKind::Gamma;
  if (s == "inverse-normal" || s == "inverse-gaussian" || s == "ig") return FamilyKind::InverseNormal;
  throw DomainError("unknown family '" + std::string(name) + "'");
}

bool Family::in_domain(double mu) const noexcept {
  if (!std::isfinite(mu)) return false;
  return kind_ == FamilyKind::Normal || mu > 0.0;
}

void Family::check_domain(double mu, std::string_view what) const {
  if (!in_domain(mu)) {
    throw DomainError(std::string(what) + " " + std::to_string(mu) + " outside the " +
                      std::string(name()) + " domain");
  }
}

VarianceTriple Family::variance(double mu) const {
  check_domain(mu);
  switch (kind_) {
    case FamilyKind::Normal: return {1.0, 0.0, 0.0};
    case FamilyKind::Gamma: return {mu * mu, 2.0 * mu, 2.0};
    case FamilyKind::InverseNormal: return {mu * mu * mu, 3.0 * mu * mu, 6.0 * mu};
  }
  return {};
}

double Family::theta(double mu) const {
  check_domain(mu);
  switch (kind_) {
    case FamilyKind::Normal: return mu;
    case FamilyKind::Gamma: return -1.0 / mu;
    case FamilyKind::InverseNormal: return -1.0 / (2.0 * mu * mu);
  }
  return 0.0;
}

double Family::b(double theta) const {
  switch (kind_) {
    case FamilyKind::Normal: return 0.5 * theta * theta;
    case FamilyKind::Gamma:
      if (!(theta < 0.0)) throw DomainError("gamma cumulant requires theta < 0");
      return -std::log(-theta);
    case FamilyKind::InverseNormal:
      if (!(theta < 0.0)) throw DomainError("inverse-normal cumulant requires theta < 0");
      return -std::sqrt(-2.0 * theta);
  }
  return 0.0;
}

double Family::v(double z) const {
  const double th = theta(z);
  return z * th - b(th);
}

double Family::t(double y) const {
  check_domain(y, "response");
  return kind_ == FamilyKind::Gamma ? -1.0 : 0.0;
}

double Family::a2(double y) const {
  check_domain(y, "response");
  constexpr double log_2pi = 1.8378770664093454836;
  switch (kind_) {
    case FamilyKind::Normal: return -0.5 * log_2pi;
    case FamilyKind::Gamma: return -std::log(y);
    case FamilyKind::InverseNormal: return -0.5 * (log_2pi + 3.0 * std::log(y));
  }
  return 0.0;
}

PhiDerivs Family::phi_derivs(double phi) const {
  check_phi(phi);
  PhiDerivs r;
  if (kind_ == FamilyKind::Gamma) {
    r.a1 = phi * std::log(phi) - log_gamma(phi);
    r.a1_1 = std::log(phi) + 1.0 - polygamma(0, phi);
    r.a1_2 = 1.0 / phi - polygamma(1, phi);
    r.a1_3 = -1.0 / (phi * phi) - polygamma(2, phi);
    r.a1_4 = 2.0 / (phi * phi * phi) - polygamma(3, phi);
  } else {
    // a1 = log(phi) / 2
    r.a1 = 0.5 * std::log(phi);
    r.a1_1 = 0.5 / phi;
    r.a1_2 = -0.5 / (phi * phi);
    r.a1_3 = 1.0 / (phi * phi * phi);
    r.a1_4 = -3.0 / (phi * phi * phi * phi);
  }
  const double phi2 = phi * phi;
  r.d2 = phi2 * r.a1_2;
  r.d3 = phi2 * phi * r.a1_3;
  r.d4 = phi2 * phi2 * r.a1_4;
  return r;
}

double Family::unit_deviance(double y, double mu) const {
  check_domain(y, "response");
  check_domain(mu);
  switch (kind_) {
    case FamilyKind::Normal: return (y - mu) * (y - mu);
    case FamilyKind::Gamma: {
      const double r = (y - mu) / mu;
      return 2.0 * (r - std::log1p(r));
    }
    case FamilyKind::InverseNormal: return (y - mu) * (y - mu) / (mu * mu * y);
  }
  return 0.0;
}

double Family::deviance(std::span<const double> y, std::span<const double> mu) const {
  if (y.size() != mu.size()) throw DataError("deviance: response and mean lengths differ");
  double d = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) d += unit_deviance(y[i], mu[i]);
  return d;
}

double Family::solve_precision(double deviance, int n, double t_sum) const {
  if (n < 1) throw DomainError("solve_precision: n must be >= 1");
  if (!(deviance >= 0.0)) throw DomainError("solve_precision: deviance must be >= 0");
  if (deviance == 0.0) throw DegenerateError("zero deviance: precision estimate is unbounded");
  const double rhs = (0.5 * deviance - t_sum) / n;

  if (kind_ != FamilyKind::Gamma) {
    // 1 / (2 phi) = rhs
    if (!(rhs > 0.0)) throw DomainError("solve_precision: right-hand side must be positive");
    return 0.5 / rhs;
  }

  // log(phi) - psi(phi) = s, with s > 0; t_sum = -n cancels before the division.
  const double s = (0.5 * deviance - (t_sum + n)) / n;
  if (!(s > 0.0)) throw DomainError("solve_precision: gamma equation requires D/(2n) > 0");
  double phi = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kPrecisionMaxIter; ++iter) {
    const double f = std::log(phi) - polygamma(0, phi) - s;
    // f is decreasing in phi.
    if (f > 0.0) lo = phi; else hi = phi;
    const double df = 1.0 / phi - polygamma(1, phi);
    double next = phi - f / df;
    if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * phi;
    if (std::fabs(next - phi) <= kPrecisionRelTol * phi) return next;
    phi = next;
  }
  throw NonConvergenceError("gamma precision equation did not converge", Eigen::VectorXd::Constant(1, phi),
                            kPrecisionMaxIter);
}

double Family::log_likelihood(double deviance, double phi, double t_sum, double a2_sum, int n) const {
  const PhiDerivs pd = phi_derivs(phi);
  return phi * (t_sum - 0.5 * deviance) + n * pd.a1 + a2_sum;
}

double Family::sample(double mu, double phi, Rng& rng) const {
  check_domain(mu);
  check_phi(phi);
  switch (kind_) {
    case FamilyKind::Normal: return mu + rng.normal() / std::sqrt(phi);
    case FamilyKind::Gamma: return rng.gamma(phi) * mu / phi;
    case FamilyKind::InverseNormal: return rng.inverse_gaussian(mu, phi);
  }
  return mu;
}

}  // namespace glmcorr
