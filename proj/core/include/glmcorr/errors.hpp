#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace glmcorr {

// Argument outside the mathematical domain of a function (non-positive
// precision, mean outside the family's support, invalid probability, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Rank-deficient design or singular information block.
class SingularDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver ran out of iterations (or step halvings). Carries the
// last iterate so callers can inspect how far the fit got.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, Eigen::VectorXd last_beta, int iterations)
      : std::runtime_error(what), last_beta_(std::move(last_beta)), iterations_(iterations) {}

  const Eigen::VectorXd& last_beta() const noexcept { return last_beta_; }
  int iterations() const noexcept { return iterations_; }

 private:
  Eigen::VectorXd last_beta_;
  int iterations_ = 0;
};

// Precision estimate is unbounded (zero deviance) or a correction factor
// degenerates (d2 == 0).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CSV, configuration, mismatched fits).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too many Monte Carlo replications failed for the rates to be trusted.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace glmcorr
