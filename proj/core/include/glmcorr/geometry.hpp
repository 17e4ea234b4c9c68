#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "glmcorr/family.hpp"
#include "glmcorr/link.hpp"

namespace glmcorr {

// Per-observation quantities built from V, dV/dmu, d2V/dmu2 and the link
// derivatives dmu/deta, d2mu/deta2, d3mu/deta3:
//
//   f = (1/V) mu' mu''               g = f - (1/V^2) V' mu'^3
//   lambda1 = (1/V^2) V' mu'^2 mu''   lambda2 = (1/V) mu''^2
//   lambda3 = (1/V) mu' mu'''         lambda4 = (1/V^3) V'^2 mu'^4
//   lambda5 = (1/V^2) V'' mu'^4
//
// and the combinations t, d, e, b, h, m of the lambdas.
struct LambdaDiagonals {
  Eigen::VectorXd f, g, t, d, e, m, b, h;
  Eigen::VectorXd lambda1, lambda2, lambda3, lambda4, lambda5;
};

// Throws DomainError naming the offending observation index.
LambdaDiagonals lambda_diagonals(Family family, Link link, const Eigen::VectorXd& eta);

// Which of the three projection-type matrices a Hadamard power refers to.
enum class ZKind { Full, Nuisance, Difference };

// W-geometry of a partitioned design X = [X1 X2] at weights W:
//
//   Z  = X (X'WX)^-1 X'       Z2 = X2 (X2'WX2)^-1 X2'
//   A  = (X2'WX2)^-1 X2'WX1   R  = X1 - X2 A
//
// Hadamard powers are computed on first use and cached; the cache is
// shared between copies and filled under std::call_once.
class ZBundle {
 public:
  static ZBundle build(const Eigen::MatrixXd& X, const std::vector<int>& tested, const Eigen::VectorXd& w);

  int n() const noexcept { return static_cast<int>(z_.rows()); }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }

  const Eigen::MatrixXd& z() const noexcept { return z_; }
  const Eigen::MatrixXd& z2() const noexcept { return z2_; }
  const Eigen::MatrixXd& diff() const noexcept { return diff_; }
  // Diagonals of Z, Z2 and Z - Z2 as vectors.
  const Eigen::VectorXd& zd() const noexcept { return zd_; }
  const Eigen::VectorXd& z2d() const noexcept { return z2d_; }
  const Eigen::VectorXd& diffd() const noexcept { return diffd_; }

  const Eigen::MatrixXd& r() const noexcept { return r_; }
  const Eigen::MatrixXd& a() const noexcept { return a_; }
  const Eigen::MatrixXd& x1() const noexcept { return x1_; }
  const Eigen::MatrixXd& x2() const noexcept { return x2_; }
  const Eigen::VectorXd& w() const noexcept { return w_; }

  // Elementwise power 2 or 3 of Z, Z2 or Z - Z2.
  const Eigen::MatrixXd& hadamard(ZKind kind, int power) const;

 private:
  struct Cache;

  int p_ = 0;
  int q_ = 0;
  Eigen::MatrixXd z_, z2_, diff_;
  Eigen::VectorXd zd_, z2d_, diffd_;
  Eigen::MatrixXd r_, a_, x1_, x2_;
  Eigen::VectorXd w_;
  std::shared_ptr<Cache> cache_;
};

// X (X'WX)^-1 X' computed through a QR factorization of W^{1/2} X. An
// empty X gives the zero matrix.
Eigen::MatrixXd weighted_projection_kernel(const Eigen::MatrixXd& X, const Eigen::VectorXd& w);

// R = X1 - X2 (X2'WX2)^-1 X2'WX1, the W-residuals of X1 on X2.
Eigen::MatrixXd weighted_residual_design(const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
                                         const Eigen::VectorXd& w, Eigen::MatrixXd* a_out = nullptr);

}  // namespace glmcorr
