#include <cmath>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "glmcorr/errors.hpp"
#include "glmcorr/geometry.hpp"
#include "instances.hpp"
#include "oracles.hpp"

namespace glmcorr {
namespace {

using oracle::rel_err;

Eigen::VectorXd random_weights(int n, std::uint64_t seed) {
  Rng rng({seed, 0x77});
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.2 + 3.0 * rng.uniform();
  return w;
}

TEST(Geometry, EmptyNuisanceBlock) {
  Eigen::MatrixXd X(4, 2);
  X << 0.5, 0.5, 0.5, -0.5, 0.5, 0.5, 0.5, -0.5;
  const ZBundle zb = ZBundle::build(X, {0, 1}, Eigen::VectorXd::Ones(4));
  EXPECT_LT((zb.z() - X * X.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(zb.z2().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(zb.a().size(), 0);
  EXPECT_LT((zb.r() - X).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Geometry, TraceAndIdempotence) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const testsupport::GeometryInstance g = testsupport::random_geometry(12, 4, 2, seed);
    const Eigen::VectorXd w = random_weights(12, seed);
    const ZBundle zb = ZBundle::build(g.X, g.tested, w);
    const Eigen::MatrixXd W = w.asDiagonal();
    EXPECT_NEAR((W * zb.z()).trace(), 4.0, 1e-10);
    EXPECT_NEAR((W * zb.z2()).trace(), 2.0, 1e-10);
    EXPECT_LT((zb.z() * W * zb.z() - zb.z()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((zb.z2() * W * zb.z2() - zb.z2()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((zb.z() - zb.z().transpose()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((zb.x2().transpose() * W * zb.diff()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(zb.zd(), zb.z().diagonal());
    EXPECT_EQ(zb.diffd(), zb.diff().diagonal());
  }
}

TEST(Geometry, DifferenceIsPositiveSemidefinite) {
  Rng rng({3});
  const testsupport::GeometryInstance g = testsupport::random_geometry(10, 4, 2, 9);
  const Eigen::VectorXd w = random_weights(10, 9);
  const ZBundle zb = ZBundle::build(g.X, g.tested, w);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd u(10);
    for (int i = 0; i < 10; ++i) u[i] = rng.normal();
    const Eigen::VectorXd wu = w.cwiseProduct(u);
    EXPECT_GE(wu.dot(zb.diff() * wu), -1e-12);
  }
}

TEST(Geometry, MatchesScalarLoopProjection) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const testsupport::GeometryInstance g = testsupport::random_geometry(8, 3, 1, seed);
    const Eigen::VectorXd w = random_weights(8, seed);
    const ZBundle zb = ZBundle::build(g.X, g.tested, w);
    const std::vector<double> wv(w.data(), w.data() + 8);
    const oracle::Mat Z = oracle::brute_projection(g.X, {0, 1, 2}, wv);
    for (int l = 0; l < 8; ++l) {
      for (int c = 0; c < 8; ++c) {
        EXPECT_NEAR(zb.z()(l, c), Z[l][c], 1e-12);
        EXPECT_EQ(zb.hadamard(ZKind::Full, 2)(l, c), zb.z()(l, c) * zb.z()(l, c));
        EXPECT_EQ(zb.hadamard(ZKind::Difference, 3)(l, c), zb.diff()(l, c) * zb.diff()(l, c) * zb.diff()(l, c));
      }
    }
  }
}

TEST(Geometry, ResidualDesignIsOrthogonalToNuisance) {
  const testsupport::GeometryInstance g = testsupport::random_geometry(15, 5, 2, 4);
  const Eigen::VectorXd w = random_weights(15, 4);
  const ZBundle zb = ZBundle::build(g.X, g.tested, w);
  EXPECT_LT((zb.x2().transpose() * w.asDiagonal() * zb.r()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((zb.r() - (zb.x1() - zb.x2() * zb.a())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Geometry, InvariantUnderNuisanceReparameterization) {
  const testsupport::GeometryInstance g = testsupport::random_geometry(12, 4, 1, 5);
  const Eigen::VectorXd w = random_weights(12, 5);
  const ZBundle a = ZBundle::build(g.X, g.tested, w);
  const std::vector<int> nuis = [&] {
    Hypothesis h;
    h.tested = g.tested;
    return h.nuisance(4);
  }();
  Eigen::MatrixXd M(3, 3);
  M << 2, 0.3, -1, 0, 1, 0.5, 0.4, 0, 1.5;
  Eigen::MatrixXd X = g.X;
  const Eigen::MatrixXd X2M = select_columns(g.X, nuis) * M;
  for (int j = 0; j < 3; ++j) X.col(nuis[j]) = X2M.col(j);
  const ZBundle b = ZBundle::build(X, g.tested, w);
  EXPECT_LT((a.z() - b.z()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((a.z2() - b.z2()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((a.r() - b.r()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Geometry, ConcurrentHadamardCache) {
  const testsupport::GeometryInstance g = testsupport::random_geometry(30, 4, 2, 6);
  const ZBundle zb = ZBundle::build(g.X, g.tested, random_weights(30, 6));
  std::vector<const Eigen::MatrixXd*> seen(8);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < 8; ++t) {
      pool.emplace_back([&, t] { seen[t] = &zb.hadamard(ZKind::Nuisance, 3); });
    }
  }
  for (int t = 1; t < 8; ++t) EXPECT_EQ(seen[t], seen[0]);
  const double z = zb.z2()(3, 4);
  EXPECT_EQ((*seen[0])(3, 4), z * z * z);
}

TEST(Geometry, RejectsBadInputs) {
  const testsupport::GeometryInstance g = testsupport::random_geometry(8, 3, 1, 7);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(8);
  w[2] = 0.0;
  EXPECT_THROW(ZBundle::build(g.X, g.tested, w), DomainError);
  Eigen::MatrixXd X = g.X;
  X.col(2) = X.col(1);
  EXPECT_THROW(ZBundle::build(X, {0}, Eigen::VectorXd::Ones(8)), SingularDesignError);
  const ZBundle zb = ZBundle::build(g.X, g.tested, Eigen::VectorXd::Ones(8));
  EXPECT_THROW(zb.hadamard(ZKind::Full, 4), DomainError);
}

TEST(Lambdas, NormalIdentityVanishes) {
  const Eigen::VectorXd eta = Eigen::VectorXd::LinSpaced(9, -2.0, 2.0);
  const LambdaDiagonals L = lambda_diagonals(Family(FamilyKind::Normal), Link(LinkKind::Identity), eta);
  for (const Eigen::VectorXd* v : {&L.f, &L.g, &L.t, &L.d, &L.e, &L.m, &L.b, &L.h, &L.lambda1, &L.lambda2,
                                   &L.lambda3, &L.lambda4, &L.lambda5}) {
    EXPECT_EQ(v->cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Lambdas, GammaLogConstants) {
  Rng rng({8});
  Eigen::VectorXd eta(20);
  for (int i = 0; i < 20; ++i) eta[i] = -3.0 + 6.0 * rng.uniform();
  const LambdaDiagonals L = lambda_diagonals(Family(FamilyKind::Gamma), Link(LinkKind::Log), eta);
  const double want[] = {1, -1, 2, 1, 1, 4, 2, 0, 0, 1, 5, 4, -1};
  const Eigen::VectorXd* got[] = {&L.f, &L.g, &L.lambda1, &L.lambda2, &L.lambda3, &L.lambda4, &L.lambda5,
                                  &L.t, &L.d, &L.e, &L.b, &L.h, &L.m};
  for (int k = 0; k < 13; ++k) {
    for (int i = 0; i < 20; ++i) EXPECT_NEAR((*got[k])[i], want[k], 1e-12) << "entry " << k;
  }
}

TEST(Lambdas, MatchFiniteDifferenceReconstruction) {
  // Rebuild every lambda from mu(eta) and V(mu) alone, differentiating
  // numerically.
  Rng rng({9});
  for (FamilyKind fk : {FamilyKind::Normal, FamilyKind::Gamma, FamilyKind::InverseNormal}) {
    for (LinkKind lk : {LinkKind::Log, LinkKind::Reciprocal, LinkKind::ReciprocalSquared}) {
      const Family fam(fk);
      const Link link(lk);
      Eigen::VectorXd eta(10);
      for (int i = 0; i < 10; ++i) eta[i] = 0.3 + 1.7 * rng.uniform();
      const LambdaDiagonals L = lambda_diagonals(fam, link, eta);
      for (int i = 0; i < 10; ++i) {
        const double x = eta[i], h = 1e-3 * x;
        auto mu = [&](double e) { return link.mu(e); };
        auto d1f = [&](double e) { return oracle::fd1(mu, e, h); };
        auto d2f = [&](double e) { return oracle::fd1(d1f, e, h); };
        const double m = mu(x);
        const double a = d1f(x), b = d2f(x), c = oracle::fd1(d2f, x, h);
        auto V = [&](double u) { return fam.variance(u).v; };
        const double hv = 1e-3 * m;
        const double v = V(m);
        const double dv = oracle::fd1(V, m, hv);
        const double d2v = oracle::fd1([&](double u) { return oracle::fd1(V, u, hv); }, m, hv);
        const double l1 = dv * a * a * b / (v * v);
        const double l2 = b * b / v;
        const double l3 = a * c / v;
        const double l4 = dv * dv * a * a * a * a / (v * v * v);
        const double l5 = d2v * a * a * a * a / (v * v);
        const double tol = 1e-5;
        auto close = [&](double got, double want) {
          return std::abs(got - want) <= tol * std::max({std::abs(want), std::abs(l2), std::abs(l3), 1e-12});
        };
        EXPECT_TRUE(close(L.lambda1[i], l1)) << fam.name() << "/" << link.name();
        EXPECT_TRUE(close(L.lambda2[i], l2)) << fam.name() << "/" << link.name();
        EXPECT_TRUE(close(L.lambda3[i], l3)) << fam.name() << "/" << link.name();
        EXPECT_TRUE(close(L.lambda4[i], l4)) << fam.name() << "/" << link.name();
        EXPECT_TRUE(close(L.lambda5[i], l5)) << fam.name() << "/" << link.name();
        EXPECT_TRUE(close(L.f[i], a * b / v));
      }
    }
  }
}

TEST(Lambdas, CombinationIdentities) {
  Rng rng({10});
  Eigen::VectorXd eta(15);
  for (int i = 0; i < 15; ++i) eta[i] = 0.3 + 1.7 * rng.uniform();
  const LambdaDiagonals L = lambda_diagonals(Family(FamilyKind::InverseNormal), Link(LinkKind::Reciprocal), eta);
  const oracle::ScalarLambdas S = oracle::scalar_lambdas({FamilyKind::InverseNormal, LinkKind::Reciprocal},
                                                         std::vector<double>(eta.data(), eta.data() + 15));
  for (int i = 0; i < 15; ++i) {
    const double scale = std::abs(S.l2[i]) + std::abs(S.l3[i]) + std::abs(S.l4[i]);
    EXPECT_NEAR(L.t[i], S.t[i], 1e-12 * scale);
    EXPECT_NEAR(L.d[i], S.d[i], 1e-12 * scale);
    EXPECT_NEAR(L.e[i], S.e[i], 1e-12 * scale);
    EXPECT_NEAR(L.b[i], S.b[i], 1e-12 * scale);
    EXPECT_NEAR(L.h[i], S.h[i], 1e-12 * scale);
    EXPECT_NEAR(L.m[i], S.m[i], 1e-12 * scale);
    EXPECT_NEAR(L.g[i], S.g[i], 1e-12 * scale);
  }
}

TEST(Lambdas, DomainErrorNamesObservation) {
  Eigen::VectorXd eta(3);
  eta << 0.5, 1.0, -2.0;
  try {
    lambda_diagonals(Family(FamilyKind::Gamma), Link(LinkKind::Identity), eta);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("observation 2"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace glmcorr
