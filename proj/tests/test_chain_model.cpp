#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "chainent/chain_model.hpp"
#include "chainent/error.hpp"

using namespace chainent;

namespace {

ChainSpec periodic(int n, double w, double k) { return {n, w, w, k, k, Boundary::periodic}; }

}  // namespace

TEST(CouplingMatrix, OpenPairMatchesSumAndDifferenceModes) {
  const ChainSpec spec{2, 1.5, 1.5, 0.7, 0.7, Boundary::open};
  const Matrix k = build_coupling_matrix(spec, Phase::pre).k;
  EXPECT_DOUBLE_EQ(k(0, 0), 1.5 * 1.5 + 0.7);
  EXPECT_DOUBLE_EQ(k(1, 1), 1.5 * 1.5 + 0.7);
  EXPECT_EQ(k(0, 1), -0.7);
  EXPECT_EQ(k(1, 0), -0.7);
  const NormalModes modes = eigendecompose(k);
  EXPECT_NEAR(modes.lambda(0), 1.5 * 1.5, 1e-12);
  EXPECT_NEAR(modes.lambda(1), 1.5 * 1.5 + 2 * 0.7, 1e-12);
  // (x1 + x2)/sqrt2 and (x1 - x2)/sqrt2 up to sign.
  EXPECT_NEAR(std::abs(modes.u(0, 0)), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(modes.u(0, 0) * modes.u(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(modes.u(1, 0) * modes.u(1, 1), -0.5, 1e-12);
}

TEST(CouplingMatrix, UncoupledIsDiagonal) {
  const Matrix k = build_coupling_matrix({2, 1.0, 1.0, 0.0, 0.0, Boundary::open}, Phase::pre).k;
  EXPECT_TRUE(k.isApprox(Matrix::Identity(2, 2)));
}

TEST(CouplingMatrix, PhaseSelectsParameters) {
  const ChainSpec spec{3, 2.0, 0.5, 1.0, 3.0, Boundary::open};
  EXPECT_DOUBLE_EQ(build_coupling_matrix(spec, Phase::pre).k(1, 1), 4.0 + 2.0);
  EXPECT_DOUBLE_EQ(build_coupling_matrix(spec, Phase::post).k(0, 0), 0.25 + 3.0);
  EXPECT_DOUBLE_EQ(build_coupling_matrix(spec, Phase::post).k(0, 2), 0.0);
}

TEST(CouplingMatrix, TraceCountsBonds) {
  for (int n : {3, 4, 7, 20}) {
    for (Boundary b : {Boundary::open, Boundary::periodic}) {
      const ChainSpec spec{n, 1.3, 1.3, 0.4, 0.4, b};
      const double expected = n * 1.3 * 1.3 + 2.0 * spec.bond_count() * 0.4;
      EXPECT_NEAR(build_coupling_matrix(spec, Phase::pre).k.trace(), expected, 1e-12 * expected);
    }
  }
}

TEST(CouplingMatrix, PeriodicWrapsAround) {
  const Matrix k = build_coupling_matrix(periodic(5, 1.0, 2.0), Phase::pre).k;
  EXPECT_EQ(k(0, 4), -2.0);
  EXPECT_EQ(k(4, 0), -2.0);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(k(i, i), 1.0 + 4.0);
}

TEST(ChainSpec, RejectsInvalidParameters) {
  EXPECT_THROW((ChainSpec{1, 1, 1, 0, 0, Boundary::open}.validate()), InvalidArgument);
  EXPECT_THROW((ChainSpec{2, 0, 1, 0, 0, Boundary::open}.validate()), InvalidArgument);
  EXPECT_THROW((ChainSpec{2, 1, -0.1, 0, 0, Boundary::open}.validate()), InvalidArgument);
  EXPECT_THROW((ChainSpec{2, 1, 1, -1, 0, Boundary::open}.validate()), InvalidArgument);
  EXPECT_THROW((ChainSpec{2, 1, 1, 0, -1, Boundary::open}.validate()), InvalidArgument);
  EXPECT_NO_THROW((ChainSpec{4, 1, 0, 1, 1, Boundary::periodic}.validate()));
}

TEST(PeriodicEigenvalues, FourSiteValues) {
  const std::vector<double> lambda = periodic_eigenvalues(periodic(4, 3.0, 2.0), Phase::pre);
  ASSERT_EQ(lambda.size(), 4u);
  EXPECT_NEAR(lambda[0], 13.0, 1e-12);
  EXPECT_NEAR(lambda[1], 17.0, 1e-12);
  EXPECT_NEAR(lambda[2], 13.0, 1e-12);
  EXPECT_NEAR(lambda[3], 9.0, 1e-12);
  const NormalModes modes = eigendecompose(build_coupling_matrix(periodic(4, 3, 2), Phase::pre).k);
  EXPECT_NEAR(modes.lambda(0), 9.0, 1e-10);
  EXPECT_NEAR(modes.lambda(1), 13.0, 1e-10);
  EXPECT_NEAR(modes.lambda(2), 13.0, 1e-10);
  EXPECT_NEAR(modes.lambda(3), 17.0, 1e-10);
}

TEST(PeriodicEigenvalues, ZeroModeShiftedByOmegaSquared) {
  const ChainSpec spec{20, 3.0, 0.01, 2.0, 2.5, Boundary::periodic};
  const auto lambda = periodic_eigenvalues(spec, Phase::post);
  EXPECT_NEAR(*std::min_element(lambda.begin(), lambda.end()), 1e-4, 1e-15);
  EXPECT_NEAR(lambda.back(), 1e-4, 1e-15);
}

TEST(PeriodicEigenvalues, UncoupledAllEqual) {
  for (double l : periodic_eigenvalues(periodic(6, 1.7, 0.0), Phase::pre)) {
    EXPECT_DOUBLE_EQ(l, 1.7 * 1.7);
  }
}

TEST(PeriodicEigenvalues, OpenBoundaryRejected) {
  EXPECT_THROW(periodic_eigenvalues({4, 1, 1, 1, 1, Boundary::open}, Phase::pre), InvalidArgument);
}

TEST(PeriodicEigenvalues, AgreeWithNumericDiagonalization) {
  for (int n = 3; n <= 24; ++n) {
    for (double k : {0.0, 0.3, 2.5, 12.0}) {
      const ChainSpec spec = periodic(n, 0.8, k);
      std::vector<double> closed = periodic_eigenvalues(spec, Phase::pre);
      std::sort(closed.begin(), closed.end());
      const NormalModes modes = eigendecompose(build_coupling_matrix(spec, Phase::pre).k);
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(modes.lambda(j), closed[j], 1e-10 * std::max(1.0, closed[j]));
      }
    }
  }
}

TEST(Eigendecompose, OrthogonalAndDiagonalizing) {
  for (int n : {2, 4, 9, 20}) {
    for (Boundary b : {Boundary::open, Boundary::periodic}) {
      const Matrix k = build_coupling_matrix({n, 0.7, 0.7, 1.9, 1.9, b}, Phase::pre).k;
      const NormalModes m = eigendecompose(k);
      EXPECT_LT((m.u * m.u.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
      Matrix d = m.u * k * m.u.transpose();
      const double scale = m.lambda.cwiseAbs().maxCoeff();
      d.diagonal().setZero();
      EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-10 * scale);
      for (int j = 1; j < n; ++j) EXPECT_LE(m.lambda(j - 1), m.lambda(j));
      ASSERT_EQ(m.permutation.size(), static_cast<std::size_t>(n));
    }
  }
}

TEST(Eigendecompose, DiagonalInput) {
  Matrix k(2, 2);
  k << 2, 0, 0, 1;
  const NormalModes m = eigendecompose(k);
  EXPECT_DOUBLE_EQ(m.lambda(0), 1.0);
  EXPECT_DOUBLE_EQ(m.lambda(1), 2.0);
  EXPECT_NEAR(std::abs(m.u(0, 1)), 1.0, 1e-15);
  EXPECT_EQ(m.permutation[0], 0);
  EXPECT_EQ(m.permutation[1], 1);
}

TEST(ChainModes, DiagonalizeBothPhases) {
  const ChainSpec spec{10, 3.0, 0.01, 2.0, 2.5, Boundary::periodic};
  const ChainModes modes = chain_modes(spec);
  for (Phase phase : {Phase::pre, Phase::post}) {
    const Matrix k = build_coupling_matrix(spec, phase).k;
    const Matrix d = modes.u * k * modes.u.transpose();
    const Vector& expected = phase == Phase::pre ? modes.lambda_pre : modes.lambda_post;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        EXPECT_NEAR(d(i, j), i == j ? expected(i) : 0.0, 1e-10 * 19.0);
      }
    }
  }
  EXPECT_EQ(modes.laplacian(0), 0.0);
  EXPECT_NEAR(modes.lambda_post(0), 1e-4, 1e-16);
}

TEST(ChainModes, UncoupledPreQuenchStillDiagonalizesPost) {
  const ChainSpec spec{6, 1.0, 1.0, 0.0, 1.5, Boundary::open};
  const ChainModes modes = chain_modes(spec);
  Matrix d = modes.u * build_coupling_matrix(spec, Phase::post).k * modes.u.transpose();
  d.diagonal().setZero();
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12);
  for (int j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(modes.lambda_pre(j), 1.0);
}
