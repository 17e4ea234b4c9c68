#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glmcorr/family.hpp"
#include "glmcorr/link.hpp"

namespace glmcorr {

// n x p model matrix with column labels. Must have full column rank, p < n.
struct DesignMatrix {
  Eigen::MatrixXd x;
  std::vector<std::string> column_names;

  DesignMatrix() = default;
  explicit DesignMatrix(Eigen::MatrixXd m, std::vector<std::string> names = {});

  int rows() const noexcept { return static_cast<int>(x.rows()); }
  int cols() const noexcept { return static_cast<int>(x.cols()); }

  // Throws SingularDesignError when p >= n or the columns are dependent.
  void validate() const;
};

// H0: beta_1 = beta_10 on the coefficients listed in `tested` (column
// indices of X, zero-based). The remaining columns are nuisance. When
// phi_known is set the precision is treated as known.
struct Hypothesis {
  std::vector<int> tested;
  Eigen::VectorXd beta10;
  std::optional<double> phi_known;

  int q() const noexcept { return static_cast<int>(tested.size()); }
  // Complement of `tested` in 0..p-1, in increasing order.
  std::vector<int> nuisance(int p) const;
  void validate(int p) const;
};

struct FitOptions {
  int max_iter = 100;
  // |D_new - D_old| / (|D_new| + 0.1)
  double deviance_tol = 1e-12;
  // Sup-norm of X' diag(dmu/deta / V) (y - mu), relative to the scale of y.
  double score_tol = 1e-8;
  int max_halvings = 30;
  std::optional<double> phi_known;
};

struct FittedModel {
  Eigen::VectorXd beta;     // length p, in column order of X; pinned entries hold beta_10
  Eigen::VectorXd eta;      // linear predictor including any offset
  Eigen::VectorXd mu;
  Eigen::VectorXd weights;  // w_l = (dmu/deta)^2 / V_l
  double deviance = 0.0;
  double phi = 0.0;
  bool phi_estimated = true;
  double loglik = 0.0;
  double t_sum = 0.0;
  double a2_sum = 0.0;
  double score_norm = 0.0;
  int iterations = 0;
  bool converged = false;

  int n() const noexcept { return static_cast<int>(mu.size()); }
};

FittedModel fit_irls(const DesignMatrix& X, const Eigen::VectorXd& y, Family family, Link link,
                     const FitOptions& opts = {});

// Maximizes the likelihood with beta_1 pinned at beta_10 through the offset
// X_1 beta_10; the precision is re-estimated from the restricted deviance.
FittedModel fit_restricted(const DesignMatrix& X, const Eigen::VectorXd& y, Family family, Link link,
                           const Hypothesis& hyp, const FitOptions& opts = {});

// sqrt(diag((phi X' W X)^-1)) at the fitted weights.
Eigen::VectorXd standard_errors(const FittedModel& fit, const DesignMatrix& X);

// Asymptotic standard error of the precision MLE, 1/sqrt(-n a1''(phi_hat)).
double se_phi(const FittedModel& fit, Family family);

// Score vector without the phi factor: X' diag(dmu/deta / V) (y - mu).
Eigen::VectorXd score_direction(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& eta,
                                Family family, Link link);

// Columns of X selected by `idx`.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<int>& idx);

}  // namespace glmcorr
