#include "glmcorr/geometry.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include "glmcorr/errors.hpp"
#include "glmcorr/fit.hpp"

namespace glmcorr {

struct ZBundle::Cache {
  std::array<std::once_flag, 6> once;
  std::array<Eigen::MatrixXd, 6> value;
};

Eigen::MatrixXd weighted_projection_kernel(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (k == 0) return Eigen::MatrixXd::Zero(n, n);
  const Eigen::VectorXd sw = w.cwiseSqrt();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sw.asDiagonal() * X);
  if (qr.rank() < k) throw SingularDesignError("X'WX is singular");
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  Eigen::MatrixXd L = X * qr.colsPermutation();
  R.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(L);
  return L * L.transpose();
}

Eigen::MatrixXd weighted_residual_design(const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
                                         const Eigen::VectorXd& w, Eigen::MatrixXd* a_out) {
  if (X2.cols() == 0) {
    if (a_out) *a_out = Eigen::MatrixXd::Zero(0, X1.cols());
    return X1;
  }
  const Eigen::VectorXd sw = w.cwiseSqrt();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sw.asDiagonal() * X2);
  if (qr.rank() < X2.cols()) throw SingularDesignError("X2'WX2 is singular");
  Eigen::MatrixXd A = qr.solve(sw.asDiagonal() * X1);
  Eigen::MatrixXd R = X1 - X2 * A;
  if (a_out) *a_out = std::move(A);
  return R;
}

ZBundle ZBundle::build(const Eigen::MatrixXd& X, const std::vector<int>& tested, const Eigen::VectorXd& w) {
  const Eigen::Index n = X.rows();
  if (w.size() != n) throw DataError("ZBundle: weight vector length does not match design rows");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
      throw DomainError("ZBundle: weight " + std::to_string(i) + " is not strictly positive");
    }
  }
  Hypothesis h;
  h.tested = tested;
  h.beta10 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tested.size()));
  h.validate(static_cast<int>(X.cols()));

  ZBundle b;
  b.p_ = static_cast<int>(X.cols());
  b.q_ = static_cast<int>(tested.size());
  b.x1_ = select_columns(X, tested);
  b.x2_ = select_columns(X, h.nuisance(b.p_));
  b.w_ = w;
  b.z_ = weighted_projection_kernel(X, w);
  b.z2_ = weighted_projection_kernel(b.x2_, w);
  b.diff_ = b.z_ - b.z2_;
  b.zd_ = b.z_.diagonal();
  b.z2d_ = b.z2_.diagonal();
  b.diffd_ = b.diff_.diagonal();
  b.r_ = weighted_residual_design(b.x1_, b.x2_, w, &b.a_);
  b.cache_ = std::make_shared<Cache>();
  return b;
}

const Eigen::MatrixXd& ZBundle::hadamard(ZKind kind, int power) const {
  if (power != 2 && power != 3) throw DomainError("ZBundle::hadamard: power must be 2 or 3");
  const int base = kind == ZKind::Full ? 0 : (kind == ZKind::Nuisance ? 1 : 2);
  const std::size_t slot = static_cast<std::size_t>(base * 2 + (power - 2));
  std::call_once(cache_->once[slot], [&] {
    const Eigen::MatrixXd& m = kind == ZKind::Full ? z_ : (kind == ZKind::Nuisance ? z2_ : diff_);
    Eigen::MatrixXd sq = m.cwiseProduct(m);
    cache_->value[slot] = power == 2 ? std::move(sq) : Eigen::MatrixXd(sq.cwiseProduct(m));
  });
  return cache_->value[slot];
}

LambdaDiagonals lambda_diagonals(Family family, Link link, const Eigen::VectorXd& eta) {
  const Eigen::Index n = eta.size();
  LambdaDiagonals L;
  for (Eigen::VectorXd* v : {&L.f, &L.g, &L.t, &L.d, &L.e, &L.m, &L.b, &L.h, &L.lambda1, &L.lambda2,
                             &L.lambda3, &L.lambda4, &L.lambda5}) {
    v->resize(n);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    LinkChain c;
    VarianceTriple v;
    try {
      c = link.chain(eta[i]);
      v = family.variance(c.mu);
    } catch (const DomainError& err) {
      throw DomainError("observation " + std::to_string(i) + ": " + err.what());
    }
    const double d1 = c.d1;
    const double d1sq = d1 * d1;
    const double inv_v = 1.0 / v.v;
    const double inv_v2 = inv_v * inv_v;

    L.f[i] = inv_v * d1 * c.d2;
    L.g[i] = L.f[i] - inv_v2 * v.dv * d1sq * d1;
    const double l1 = inv_v2 * v.dv * d1sq * c.d2;
    const double l2 = inv_v * c.d2 * c.d2;
    const double l3 = inv_v * d1 * c.d3;
    const double l4 = inv_v2 * inv_v * v.dv * v.dv * d1sq * d1sq;
    const double l5 = inv_v2 * v.d2v * d1sq * d1sq;
    L.lambda1[i] = l1;
    L.lambda2[i] = l2;
    L.lambda3[i] = l3;
    L.lambda4[i] = l4;
    L.lambda5[i] = l5;
    L.t[i] = -9.0 * l1 + 3.0 * l2 + 3.0 * l3 + 4.0 * l4 - 2.0 * l5;
    L.d[i] = -5.0 * l1 + 2.0 * l2 + 2.0 * l3 + 2.0 * l4 - l5;
    L.e[i] = -12.0 * l1 + 3.0 * l2 + 4.0 * l3 + 6.0 * l4 - 3.0 * l5;
    L.b[i] = l3 + l4;
    L.h[i] = l1 + l5;
    L.m[i] = -4.0 * l1 + l2 + 2.0 * l4 - l5;
  }
  return L;
}

}  // namespace glmcorr
