#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/airy.hpp>
#include <gtest/gtest.h>

#include "chainent/ermakov.hpp"
#include "chainent/error.hpp"

using namespace chainent;

namespace {

// Independent reference: b^2 = u1^2 + lambda_i u2^2 where u1, u2 solve
// u'' + lambda(t) u = 0 with (u1, u1') = (1, 0) and (u2, u2') = (0, 1).
// Piecewise-constant lambda is chained through the cos/sin transfer matrix.
struct Fundamental {
  double u1 = 1, v1 = 0, u2 = 0, v2 = 1;

  void evolve(double lambda, double dt) {
    const double w = std::sqrt(lambda);
    const double c = std::cos(w * dt);
    const double s = w > 0 ? std::sin(w * dt) / w : dt;
    const double ws = w * std::sin(w * dt);
    auto step = [&](double& u, double& v) {
      const double nu = c * u + s * v;
      const double nv = -ws * u + c * v;
      u = nu;
      v = nv;
    };
    step(u1, v1);
    step(u2, v2);
  }

  ErmakovPoint point(double lambda_i) const {
    const double b = std::sqrt(u1 * u1 + lambda_i * u2 * u2);
    return {b, (u1 * v1 + lambda_i * u2 * v2) / b};
  }
};

ErmakovPoint chained(double lambda_i, const std::vector<double>& times,
                     const std::vector<double>& lambdas, double t) {
  Fundamental f;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double end = k + 1 < times.size() ? std::min(times[k + 1], t) : t;
    if (end > times[k]) f.evolve(lambdas[k], end - times[k]);
  }
  return f.point(lambda_i);
}

}  // namespace

TEST(SolveSudden, NoQuenchIsConstant) {
  const ModeSolution m = solve_sudden(2.3, 2.3);
  for (double t : {0.0, 0.7, 13.0, 150.0}) {
    EXPECT_EQ(m.at(t).b, 1.0);
    EXPECT_EQ(m.at(t).b_dot, 0.0);
  }
  const auto c = m.coefficients();
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->n, 0.0);
  EXPECT_EQ(c->m, 1.0);
}

TEST(SolveSudden, BoundaryConditions) {
  for (double lf : {0.0, 1e-4, 0.0225, 1.0, 17.2}) {
    const ModeSolution m = solve_sudden(1.0, lf);
    EXPECT_EQ(m.at(0.0).b, 1.0);
    EXPECT_EQ(m.at(0.0).b_dot, 0.0);
  }
}

TEST(SolveSudden, SlowModeCoefficients) {
  const ModeSolution m = solve_sudden(1.0, 0.0225);
  const auto c = m.coefficients();
  ASSERT_TRUE(c.has_value());
  EXPECT_NEAR(c->n, -21.722222222222, 1e-10);
  EXPECT_NEAR(c->m, 22.722222222222, 1e-10);
  // b^2 = n cos(2 sqrt(lambda_f) t) + m.
  for (double t : {0.3, 5.0, 11.0, 40.0}) {
    const double b2 = c->n * std::cos(0.3 * t) + c->m;
    EXPECT_NEAR(m.at(t).b * m.at(t).b, b2, 1e-11 * b2);
  }
  const double period = std::numbers::pi / 0.15;
  EXPECT_NEAR(period, 20.944, 1e-3);
  EXPECT_NEAR(m.at(3.0 + period).b, m.at(3.0).b, 1e-10);
}

TEST(SolveSudden, FreeExpansion) {
  const ModeSolution m = solve_sudden(1.0, 0.0);
  EXPECT_FALSE(m.coefficients().has_value());
  EXPECT_NEAR(m.at(10.0).b, std::sqrt(101.0), 1e-12);
  EXPECT_NEAR(m.at(10.0).b, 10.0499, 1e-4);
  EXPECT_NEAR(m.at(10.0).b_dot, 10.0 / std::sqrt(101.0), 1e-12);
  for (double t = 0; t <= 50; t += 0.5) EXPECT_NEAR(m.residual(t), 0.0, 1e-12);
}

TEST(SolveSudden, RejectsMissingGroundState) {
  EXPECT_THROW(solve_sudden(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(solve_sudden(-1.0, 1.0), InvalidArgument);
  EXPECT_THROW(solve_sudden(1.0, -0.1), InvalidArgument);
}

TEST(SolveSudden, ResidualInvariantAndPeriodicity) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lam(1e-4, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double li = lam(rng);
    const double lf = lam(rng);
    const ModeSolution m = solve_sudden(li, lf);
    const double period = std::numbers::pi / std::sqrt(lf);
    for (double t = 0; t <= 200; t += 0.37) {
      const double b = m.at(t).b;
      const double scale = std::max({1.0, lf * b, li / (b * b * b)});
      ASSERT_LT(std::abs(m.residual(t)), 1e-9 * scale) << li << " " << lf << " " << t;
      ASSERT_NEAR(sudden_invariant(m, t), li + lf, 1e-9 * std::max(1.0, li + lf));
      ASSERT_GT(b, 0.0);
    }
    for (double t : {0.0, 1.3, 9.1}) {
      EXPECT_NEAR(m.at(t + period).b, m.at(t).b, 1e-10 * std::max(1.0, m.at(t).b));
    }
  }
}

TEST(SolveSudden, DerivativeMatchesFiniteDifference) {
  const ModeSolution m = solve_sudden(9.0, 0.01);
  const double h = 1e-5;
  for (double t : {0.5, 3.0, 17.0, 60.0}) {
    const double fd = (m.at(t + h).b - m.at(t - h).b) / (2 * h);
    EXPECT_NEAR(m.at(t).b_dot, fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(IntegrateGeneral, ConstantProtocolStaysAtRest) {
  ModeProtocol p;
  p.lambda_initial = 3.0;
  p.lambdas = {3.0};
  const TimeGrid grid{0.1, 201};
  const ModeSolution m = integrate_general(p, grid, 1e-10);
  EXPECT_FALSE(m.closed_form());
  for (std::size_t i = 0; i < grid.count; ++i) {
    EXPECT_NEAR(m.at(grid.at(i)).b, 1.0, 1e-10);
  }
}

TEST(IntegrateGeneral, SuddenAsStepMatchesClosedForm) {
  for (auto [li, lf] : {std::pair{1.0, 0.0225}, {25.0, 17.2225}, {9.0, 0.0001}, {13.0, 10.0}}) {
    const TimeGrid grid{0.1, 1000};
    const ModeSolution numeric = integrate_general(ModeProtocol::sudden(li, lf), grid, 1e-10);
    const ModeSolution exact = solve_sudden(li, lf);
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double t = grid.at(i);
      ASSERT_NEAR(numeric.at(t).b, exact.at(t).b, 1e-8) << li << " " << lf << " t=" << t;
      ASSERT_NEAR(numeric.at(t).b_dot, exact.at(t).b_dot, 1e-8);
    }
    EXPECT_LT(numeric.max_invariant_residual(), 1e-10);
    EXPECT_GT(numeric.step(), 0.0);
  }
}

TEST(IntegrateGeneral, TwoStepProtocolMatchesChainedSolutions) {
  ModeProtocol p;
  p.lambda_initial = 1.0;
  p.times = {0.0, 1.0};
  p.lambdas = {4.0, 1.0};
  p.interpolation = Interpolation::step;
  const TimeGrid grid{0.01, 501};
  const ModeSolution m = integrate_general(p, grid, 1e-10);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double t = grid.at(i);
    const ErmakovPoint ref = chained(1.0, p.times, p.lambdas, t);
    ASSERT_NEAR(m.at(t).b, ref.b, 1e-7) << t;
    ASSERT_NEAR(m.at(t).b_dot, ref.b_dot, 1e-7) << t;
  }
}

TEST(IntegrateGeneral, OffGridEvaluation) {
  ModeProtocol p;
  p.lambda_initial = 2.0;
  p.times = {0.0, 0.55, 2.0};
  p.lambdas = {0.5, 3.0, 1.0};
  p.interpolation = Interpolation::step;
  const ModeSolution m = integrate_general(p, TimeGrid{0.1, 41}, 1e-10);
  for (double t : {0.05, 0.55, 0.731, 2.333, 3.99}) {
    const ErmakovPoint ref = chained(2.0, p.times, p.lambdas, t);
    EXPECT_NEAR(m.at(t).b, ref.b, 1e-8) << t;
  }
}

TEST(IntegrateGeneral, LinearRampConvergesAndIsSmooth) {
  ModeProtocol p;
  p.lambda_initial = 4.0;
  p.times = {0.0, 5.0};
  p.lambdas = {4.0, 0.25};
  p.interpolation = Interpolation::linear;
  const TimeGrid grid{0.05, 301};
  const ModeSolution m = integrate_general(p, grid, 1e-10);
  EXPECT_LT(m.max_invariant_residual(), 1e-10);
  EXPECT_NEAR(m.lambda_at(2.5), 4.0 - 3.75 / 2, 1e-12);
  // x'' + (4 - 0.75 t) x = 0 is Airy's equation in z = kappa (t - 16/3);
  // b^2 = u^2 + lambda_i v^2 for the solutions u(0) = 1, u'(0) = 0 and v(0) = 0, v'(0) = 1.
  const double kappa = std::cbrt(0.75);
  auto z = [&](double t) { return kappa * (t - 16.0 / 3.0); };
  const double a0 = boost::math::airy_ai(z(0)), b0 = boost::math::airy_bi(z(0));
  const double da0 = kappa * boost::math::airy_ai_prime(z(0)), db0 = kappa * boost::math::airy_bi_prime(z(0));
  const double det = a0 * db0 - b0 * da0;
  for (double t : {1.0, 3.3, 5.0}) {
    const double ai = boost::math::airy_ai(z(t)), bi = boost::math::airy_bi(z(t));
    const double dai = kappa * boost::math::airy_ai_prime(z(t)), dbi = kappa * boost::math::airy_bi_prime(z(t));
    const double u = (db0 * ai - da0 * bi) / det, du = (db0 * dai - da0 * dbi) / det;
    const double v = (a0 * bi - b0 * ai) / det, dv = (a0 * dbi - b0 * dai) / det;
    const double b = std::sqrt(u * u + 4.0 * v * v);
    EXPECT_NEAR(m.at(t).b, b, 1e-8) << t;
    EXPECT_NEAR(m.at(t).b_dot, (u * du + 4.0 * v * dv) / b, 1e-8) << t;
  }
  const ModeSolution tight = integrate_general(p, grid, 1e-11);
  for (std::size_t i = 0; i < grid.count; i += 20) {
    EXPECT_NEAR(m.at(grid.at(i)).b, tight.at(grid.at(i)).b, 1e-9);
  }
}

TEST(IntegrateGeneral, InvalidProtocols) {
  ModeProtocol p;
  p.lambda_initial = 0.0;
  EXPECT_THROW(integrate_general(p, TimeGrid{0.1, 10}, 1e-10), InvalidArgument);
  p.lambda_initial = 1.0;
  p.times = {0.5};
  EXPECT_THROW(integrate_general(p, TimeGrid{0.1, 10}, 1e-10), InvalidArgument);
  p.times = {0.0, 1.0, 1.0};
  p.lambdas = {1, 2, 3};
  EXPECT_THROW(integrate_general(p, TimeGrid{0.1, 10}, 1e-10), InvalidArgument);
  p.times = {0.0};
  p.lambdas = {1.0};
  EXPECT_THROW(integrate_general(p, TimeGrid{0.1, 10}, 0.0), InvalidArgument);
}

TEST(IntegrateGeneral, UnreachableToleranceReportsTime) {
  try {
    integrate_general(ModeProtocol::sudden(1.0, 2.0), TimeGrid{0.5, 200}, 1e-300);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("at t ="), std::string::npos);
  }
}

TEST(ComputeTau, UnitScaleFactor) {
  const ModeSolution m = solve_sudden(1.5, 1.5);
  EXPECT_NEAR(compute_tau(m, 3.7), 3.7, 1e-12);
  EXPECT_EQ(compute_tau(m, 0.0), 0.0);
}

TEST(ComputeTau, FreeExpansionArctan) {
  const ModeSolution m = solve_sudden(1.0, 0.0);
  EXPECT_NEAR(compute_tau(m, 1.0), std::numbers::pi / 4, 1e-10);
  EXPECT_NEAR(compute_tau(m, 20.0), std::atan(20.0), 1e-10);
}

TEST(ComputeTau, DerivativeIsInverseSquare) {
  const ModeSolution m = solve_sudden(1.0, 0.0225);
  const double h = 1e-4;
  for (double t : {0.5, 4.0, 12.0}) {
    const double fd = (compute_tau(m, t + h) - compute_tau(m, t - h)) / (2 * h);
    const double b = m.at(t).b;
    EXPECT_NEAR(fd, 1.0 / (b * b), 1e-7);
  }
  EXPECT_THROW(compute_tau(m, -1.0), InvalidArgument);
}
