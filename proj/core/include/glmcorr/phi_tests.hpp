#pragma once

#include <Eigen/Dense>

#include "glmcorr/beta_tests.hpp"
#include "glmcorr/family.hpp"
#include "glmcorr/fit.hpp"
#include "glmcorr/link.hpp"

namespace glmcorr {

// H0: phi = phi0 with all of beta as nuisance.
struct PhiHypothesis {
  double phi0 = 1.0;

  void validate() const;
};

struct PhiClassical {
  double lr = 0.0;
  double wald = 0.0;
  double score = 0.0;
  double gradient = 0.0;
};

// Corrected statistics and the terms behind them, all evaluated at phi0.
struct PhiCorrected {
  double lr = 0.0;
  double score = 0.0;
  double gradient = 0.0;
  double epsilon = 0.0;
  CorrectionTerms lr_terms;
  CorrectionTerms score_terms;
  CorrectionTerms gradient_terms;
};

// General displays in a1 and its derivatives:
//   S_LR = 2n[a1(phi_hat) - a1(phi0) - (phi_hat - phi0) a1'(phi_hat)]
//   S_W  = -n (phi_hat - phi0)^2 a1''(phi_hat)
//   S_R  = -n [a1'(phi_hat) - a1'(phi0)]^2 / a1''(phi0)
//   S_T  = n [a1'(phi0) - a1'(phi_hat)] (phi_hat - phi0)
PhiClassical phi_classical(Family family, double phi_hat, double phi0, int n);

// epsilon(phi0, p), the Bartlett factor of S_LR.
double phi_epsilon(const PhiDerivs& pd, int p, int n);
CorrectionTerms phi_score_terms(const PhiDerivs& pd, int p, int n);
CorrectionTerms phi_gradient_terms(const PhiDerivs& pd, int p, int n);

PhiCorrected phi_corrected(Family family, double phi0, int p, int n, const PhiClassical& s);

// Seven-statistic report with df = 1 for a fitted model.
TestReport phi_test_report(const PhiClassical& s, const PhiCorrected& c, int n, int p);

// Fits the model with phi estimated and tests H0: phi = phi0.
TestReport full_phi_test_report(const DesignMatrix& X, const Eigen::VectorXd& y, Family family, Link link,
                                const PhiHypothesis& hyp, const FitOptions& opts = {});

}  // namespace glmcorr
