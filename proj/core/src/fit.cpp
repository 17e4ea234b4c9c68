#include "glmcorr/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "glmcorr/errors.hpp"

namespace glmcorr {
namespace {

// Fisher-scoring iterations before switching to Newton steps.
constexpr int kFisherWarmup = 3;

struct WorkingState {
  Eigen::VectorXd eta;
  Eigen::VectorXd mu;
  double deviance = 0.0;
};

// Returns false when eta maps outside the link or family domain.
bool evaluate(const Eigen::VectorXd& eta, const Eigen::VectorXd& y, Family family, Link link, WorkingState& out) {
  const Eigen::Index n = eta.size();
  out.eta = eta;
  out.mu.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(eta[i])) return false;
    if ((link.kind() == LinkKind::Reciprocal && eta[i] == 0.0) ||
        (link.kind() == LinkKind::ReciprocalSquared && !(eta[i] > 0.0))) {
      return false;
    }
    const double m = link.mu(eta[i]);
    if (!family.in_domain(m)) return false;
    out.mu[i] = m;
  }
  out.deviance = family.deviance({y.data(), static_cast<std::size_t>(n)},
                                 {out.mu.data(), static_cast<std::size_t>(n)});
  return std::isfinite(out.deviance);
}

double initial_mean(double yi, double ybar, Family family, Link link) {
  double m = yi;
  if (family.kind() != FamilyKind::Normal) m = std::max(yi, 0.1 * ybar);
  const bool needs_positive = link.kind() == LinkKind::Log || link.kind() == LinkKind::ReciprocalSquared;
  if (needs_positive && !(m > 0.0)) m = std::max(0.1 * std::fabs(ybar), 1e-8);
  if (link.kind() == LinkKind::Reciprocal && m == 0.0) m = ybar != 0.0 ? ybar : 1.0;
  return m;
}

double score_scale(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& eta,
                   Family family, Link link) {
  if (X.cols() == 0) return 1.0;
  Eigen::VectorXd a(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const LinkChain c = link.chain(eta[i]);
    a[i] = std::fabs(c.d1 / family.variance(c.mu).v * y[i]);
  }
  return std::max(1.0, (X.cwiseAbs().transpose() * a).lpNorm<Eigen::Infinity>());
}

// IRLS for the coefficients of X_free with a fixed offset.
FittedModel irls(const Eigen::MatrixXd& X, const Eigen::VectorXd& offset, const Eigen::VectorXd& y,
                 Family family, Link link, const FitOptions& opts, Eigen::VectorXd& beta_out) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n || offset.size() != n) throw DataError("irls: dimension mismatch between X, y and offset");
  for (Eigen::Index i = 0; i < n; ++i) family.check_domain(y[i], "response");

  FittedModel fit;
  WorkingState state;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);

  if (k == 0) {
    if (!evaluate(offset, y, family, link, state)) {
      throw DomainError("restricted linear predictor maps outside the mean domain");
    }
    fit.iterations = 0;
    fit.converged = true;
  } else {
    const double ybar = y.mean();
    Eigen::VectorXd mu0(n);
    for (Eigen::Index i = 0; i < n; ++i) mu0[i] = initial_mean(y[i], ybar, family, link);
    state.mu = mu0;
    state.eta.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) state.eta[i] = link.eta(mu0[i]);
    state.deviance = family.deviance({y.data(), static_cast<std::size_t>(n)},
                                     {mu0.data(), static_cast<std::size_t>(n)});

    bool have_beta = false;
    bool converged = false;
    int iter = 0;
    Eigen::VectorXd z(n);
    Eigen::VectorXd sw(n);
    Eigen::VectorXd u(n);
    Eigen::VectorXd w_obs(n);
    while (iter < opts.max_iter) {
      ++iter;
      for (Eigen::Index i = 0; i < n; ++i) {
        const LinkChain c = link.chain(state.eta[i]);
        const VarianceTriple v = family.variance(c.mu);
        const double r = y[i] - c.mu;
        sw[i] = std::fabs(c.d1) / std::sqrt(v.v);
        z[i] = state.eta[i] - offset[i] + r / c.d1;
        u[i] = c.d1 / v.v * r;
        w_obs[i] = c.d1 * c.d1 / v.v - r * (c.d2 / v.v - c.d1 * c.d1 * v.dv / (v.v * v.v));
      }

      // Walks beta_new back toward beta until it is inside the domain and,
      // when required, does not increase the deviance.
      auto settle = [&](Eigen::VectorXd& beta_new, bool require_descent, WorkingState& next) {
        const double slack = 1e-12 * (std::fabs(state.deviance) + 0.1);
        for (int halvings = 0;; ++halvings) {
          const bool ok = evaluate(X * beta_new + offset, y, family, link, next);
          if (ok && (!require_descent || next.deviance <= state.deviance + slack)) return true;
          if (!have_beta || halvings >= opts.max_halvings) return false;
          beta_new = 0.5 * (beta_new + beta);
        }
      };

      WorkingState next;
      Eigen::VectorXd beta_new;
      bool stepped = false;
      if (have_beta && iter > kFisherWarmup) {
        // Newton step on the observed information.
        Eigen::LLT<Eigen::MatrixXd> llt(X.transpose() * w_obs.asDiagonal() * X);
        if (llt.info() == Eigen::Success) {
          beta_new = beta + llt.solve(X.transpose() * u);
          stepped = beta_new.allFinite() && settle(beta_new, true, next);
        }
      }
      if (!stepped) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sw.asDiagonal() * X);
        if (qr.rank() < k) throw SingularDesignError("weighted design matrix is rank deficient");
        beta_new = qr.solve(sw.cwiseProduct(z));
        if (!settle(beta_new, have_beta, next)) {
          if (!have_beta) {
            throw NonConvergenceError("first IRLS step left the mean domain; no valid coefficients", beta_new, iter);
          }
          throw NonConvergenceError("IRLS step halving exhausted", beta, iter);
        }
      }

      const double dev_change = std::fabs(next.deviance - state.deviance) / (std::fabs(next.deviance) + 0.1);
      beta = beta_new;
      have_beta = true;
      state = std::move(next);

      const double score = score_direction(X, y, state.eta, family, link).lpNorm<Eigen::Infinity>();
      fit.score_norm = score;
      if (dev_change <= opts.deviance_tol &&
          score <= opts.score_tol * score_scale(X, y, state.eta, family, link)) {
        converged = true;
        break;
      }
    }
    fit.iterations = iter;
    if (!converged) throw NonConvergenceError("IRLS did not converge", beta, iter);
    fit.converged = true;
  }

  fit.eta = state.eta;
  fit.mu = state.mu;
  fit.deviance = state.deviance;
  fit.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const LinkChain c = link.chain(fit.eta[i]);
    fit.weights[i] = c.d1 * c.d1 / family.variance(c.mu).v;
  }
  fit.t_sum = 0.0;
  fit.a2_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    fit.t_sum += family.t(y[i]);
    fit.a2_sum += family.a2(y[i]);
  }
  if (opts.phi_known) {
    fit.phi = *opts.phi_known;
    fit.phi_estimated = false;
  } else {
    fit.phi = family.solve_precision(fit.deviance, static_cast<int>(n), fit.t_sum);
    fit.phi_estimated = true;
  }
  fit.loglik = family.log_likelihood(fit.deviance, fit.phi, fit.t_sum, fit.a2_sum, static_cast<int>(n));
  beta_out = beta;
  return fit;
}

}  // namespace

DesignMatrix::DesignMatrix(Eigen::MatrixXd m, std::vector<std::string> names)
    : x(std::move(m)), column_names(std::move(names)) {
  if (column_names.empty()) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) column_names.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Eigen::Index>(column_names.size()) != x.cols()) {
    throw DataError("design matrix: number of column names does not match columns");
  }
}

void DesignMatrix::validate() const {
  if (x.cols() < 1) throw SingularDesignError("design matrix has no columns");
  if (x.cols() >= x.rows()) throw SingularDesignError("design matrix needs p < n");
  if (!x.allFinite()) throw DataError("design matrix contains non-finite values");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) throw SingularDesignError("design matrix is rank deficient");
}

std::vector<int> Hypothesis::nuisance(int p) const {
  std::vector<int> out;
  for (int j = 0; j < p; ++j) {
    if (std::find(tested.begin(), tested.end(), j) == tested.end()) out.push_back(j);
  }
  return out;
}

void Hypothesis::validate(int p) const {
  if (tested.empty() || q() > p) throw DomainError("hypothesis must test between 1 and p coefficients");
  std::set<int> seen;
  for (int j : tested) {
    if (j < 0 || j >= p) throw DomainError("hypothesis column index out of range");
    if (!seen.insert(j).second) throw DomainError("hypothesis column indices must be distinct");
  }
  if (beta10.size() != q()) throw DomainError("hypothesis: beta10 length must equal the number of tested columns");
  if (phi_known && !(*phi_known > 0.0)) throw DomainError("hypothesis: known precision must be positive");
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(idx[j]);
  return out;
}

Eigen::VectorXd score_direction(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& eta,
                                Family family, Link link) {
  Eigen::VectorXd r(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const LinkChain c = link.chain(eta[i]);
    r[i] = c.d1 / family.variance(c.mu).v * (y[i] - c.mu);
  }
  return X.transpose() * r;
}

FittedModel fit_irls(const DesignMatrix& X, const Eigen::VectorXd& y, Family family, Link link,
                     const FitOptions& opts) {
  X.validate();
  if (y.size() != X.rows()) throw DataError("response length does not match design rows");
  Eigen::VectorXd beta;
  FittedModel fit = irls(X.x, Eigen::VectorXd::Zero(X.rows()), y, family, link, opts, beta);
  fit.beta = beta;
  return fit;
}

FittedModel fit_restricted(const DesignMatrix& X, const Eigen::VectorXd& y, Family family, Link link,
                           const Hypothesis& hyp, const FitOptions& opts) {
  X.validate();
  hyp.validate(X.cols());
  if (y.size() != X.rows()) throw DataError("response length does not match design rows");
  const std::vector<int> free_cols = hyp.nuisance(X.cols());
  const Eigen::MatrixXd X1 = select_columns(X.x, hyp.tested);
  const Eigen::MatrixXd X2 = select_columns(X.x, free_cols);
  const Eigen::VectorXd offset = X1 * hyp.beta10;

  FitOptions o = opts;
  if (hyp.phi_known) o.phi_known = hyp.phi_known;
  Eigen::VectorXd beta2;
  FittedModel fit = irls(X2, offset, y, family, link, o, beta2);
  fit.beta.resize(X.cols());
  for (int j = 0; j < hyp.q(); ++j) fit.beta[hyp.tested[j]] = hyp.beta10[j];
  for (std::size_t j = 0; j < free_cols.size(); ++j) fit.beta[free_cols[j]] = beta2[static_cast<Eigen::Index>(j)];
  return fit;
}

Eigen::VectorXd standard_errors(const FittedModel& fit, const DesignMatrix& X) {
  if (fit.weights.size() != X.rows()) throw DataError("standard_errors: fit does not match design");
  const Eigen::VectorXd sw = fit.weights.cwiseSqrt();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sw.asDiagonal() * X.x);
  if (qr.rank() < X.cols()) throw SingularDesignError("information matrix is singular");
  // (X'WX)^-1 = P R^-1 R^-T P'
  const Eigen::Index p = X.cols();
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd diag_perm = Rinv.rowwise().squaredNorm();
  Eigen::VectorXd diag(p);
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index j = 0; j < p; ++j) diag[perm[j]] = diag_perm[j];
  return (diag / fit.phi).cwiseSqrt();
}

double se_phi(const FittedModel& fit, Family family) {
  if (!fit.phi_estimated) throw DomainError("se_phi: precision is known, no standard error applies");
  const PhiDerivs pd = family.phi_derivs(fit.phi);
  const double info = -fit.n() * pd.a1_2;
  if (!(info > 0.0)) throw DegenerateError("se_phi: non-positive precision information");
  return 1.0 / std::sqrt(info);
}

}  // namespace glmcorr
