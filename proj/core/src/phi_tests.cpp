#include "glmcorr/phi_tests.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glmcorr/errors.hpp"
#include "glmcorr/special_functions.hpp"

namespace glmcorr {
namespace {

void check_phi(double phi, const char* what) {
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw DomainError(std::string(what) + " must be a finite positive number");
  }
}

void check_d2(const PhiDerivs& pd) {
  if (pd.d2 == 0.0 || !std::isfinite(pd.d2)) throw DegenerateError("phi correction: d2 is zero");
}

}  // namespace

void PhiHypothesis::validate() const { check_phi(phi0, "phi0"); }

PhiClassical phi_classical(Family family, double phi_hat, double phi0, int n) {
  check_phi(phi_hat, "phi_hat");
  check_phi(phi0, "phi0");
  if (n <= 0) throw DomainError("phi_classical: n must be positive");
  const PhiDerivs h = family.phi_derivs(phi_hat);
  const PhiDerivs z = family.phi_derivs(phi0);
  const double dphi = phi_hat - phi0;
  const double dscore = h.a1_1 - z.a1_1;
  PhiClassical s;
  s.lr = 2.0 * n * (h.a1 - z.a1 - dphi * h.a1_1);
  s.wald = -n * dphi * dphi * h.a1_2;
  s.score = -n * dscore * dscore / z.a1_2;
  s.gradient = -n * dscore * dphi;
  return s;
}

double phi_epsilon(const PhiDerivs& pd, int p, int n) {
  check_d2(pd);
  const double d2 = pd.d2, d3 = pd.d3, d4 = pd.d4, nd = n, pd_ = p;
  return -pd_ * (pd_ - 2.0) / (4.0 * nd * d2) + (2.0 * pd_ * d3 + d4) / (4.0 * nd * d2 * d2) -
         5.0 * d3 * d3 / (12.0 * nd * d2 * d2 * d2);
}

CorrectionTerms phi_score_terms(const PhiDerivs& pd, int p, int n) {
  check_d2(pd);
  const double d2 = pd.d2, d3 = pd.d3, d4 = pd.d4, nd = n, pd_ = p;
  CorrectionTerms t;
  t.kind = CorrectionKind::Score;
  t.A1 = -3.0 * pd_ * (pd_ - 2.0) / (nd * d2 * d2);
  t.A2 = -3.0 * (2.0 * pd_ * d3 + d4) / (nd * d2 * d2);
  t.A3 = -5.0 * d3 * d3 / (nd * d2 * d2 * d2);
  t.a = t.A3 / 180.0;
  t.b = (t.A2 - 2.0 * t.A3) / 36.0;
  t.c = (t.A1 - t.A2 + t.A3) / 12.0;
  return t;
}

CorrectionTerms phi_gradient_terms(const PhiDerivs& pd, int p, int n) {
  check_d2(pd);
  const double d2 = pd.d2, d3 = pd.d3, d4 = pd.d4, nd = n, pd_ = p;
  const double d2sq = d2 * d2, d2cu = d2sq * d2;
  CorrectionTerms t;
  t.kind = CorrectionKind::Gradient;
  t.A1 = -3.0 * pd_ * (pd_ + 2.0) / (nd * d2) - 3.0 * (3.0 * pd_ * d3 - 4.0 * d4) / (nd * d2sq) -
         18.0 * d3 * d3 / (nd * d2cu);
  t.A2 = -3.0 * (pd_ * d3 - d4) / (nd * d2sq) - 33.0 * d3 * d3 / (4.0 * nd * d2cu);
  t.A3 = -5.0 * d3 * d3 / (4.0 * nd * d2cu);
  t.a = t.A3 / 180.0;
  t.b = (t.A2 - 2.0 * t.A3) / 36.0;
  t.c = (t.A1 - t.A2 + t.A3) / 12.0;
  return t;
}

PhiCorrected phi_corrected(Family family, double phi0, int p, int n, const PhiClassical& s) {
  check_phi(phi0, "phi0");
  if (n <= 0) throw DomainError("phi_corrected: n must be positive");
  const PhiDerivs pd = family.phi_derivs(phi0);
  PhiCorrected c;
  c.epsilon = phi_epsilon(pd, p, n);
  c.lr_terms.kind = CorrectionKind::LR;
  c.lr_terms.A1 = 12.0 * c.epsilon;
  c.lr_terms.a = c.epsilon;
  c.score_terms = phi_score_terms(pd, p, n);
  c.gradient_terms = phi_gradient_terms(pd, p, n);
  c.lr = c.lr_terms.apply(s.lr);
  c.score = c.score_terms.apply(s.score);
  c.gradient = c.gradient_terms.apply(s.gradient);
  return c;
}

TestReport phi_test_report(const PhiClassical& s, const PhiCorrected& c, int n, int p) {
  TestReport rep = assemble_report(ClassicalStatistics{s.wald, s.lr, s.score, s.gradient}, c.lr_terms,
                                   c.score_terms, c.gradient_terms, n, p, 1);
  return rep;
}

TestReport full_phi_test_report(const DesignMatrix& X, const Eigen::VectorXd& y, Family family, Link link,
                                const PhiHypothesis& hyp, const FitOptions& opts) {
  hyp.validate();
  FitOptions o = opts;
  o.phi_known.reset();
  const FittedModel fit = fit_irls(X, y, family, link, o);
  const PhiClassical s = phi_classical(family, fit.phi, hyp.phi0, fit.n());
  const PhiCorrected c = phi_corrected(family, hyp.phi0, X.cols(), fit.n(), s);
  return phi_test_report(s, c, fit.n(), X.cols());
}

}  // namespace glmcorr
