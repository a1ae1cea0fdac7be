#include "chainent/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainent/error.hpp"

namespace chainent {

GaussianState assemble_state(const Matrix& u, const Vector& lambda_pre,
                             std::span<const ErmakovPoint> points, double t) {
  const auto n = static_cast<std::size_t>(lambda_pre.size());
  if (points.size() != n || u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != n) {
    throw InvalidArgument("assemble_state: expected one Ermakov solution per normal mode (" +
                          std::to_string(n) + "), got " + std::to_string(points.size()));
  }
  Vector width(n);
  Vector chirp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double b = points[j].b;
    width(j) = std::sqrt(lambda_pre(j)) / (b * b);
    chirp(j) = points[j].b_dot / (2.0 * b);
  }
  GaussianState s;
  s.omega = u.transpose() * width.asDiagonal() * u;
  s.btilde = u.transpose() * chirp.asDiagonal() * u;
  // Remove the rounding asymmetry of the triple product.
  s.omega = 0.5 * (s.omega + s.omega.transpose()).eval();
  s.btilde = 0.5 * (s.btilde + s.btilde.transpose()).eval();
  s.energies = 0.5 * lambda_pre.cwiseSqrt();
  s.taus = Vector::Zero(n);
  s.t = t;
  return s;
}

GaussianState assemble_state(const NormalModes& pre_quench, std::span<const ModeSolution> modes,
                             double t, Phases phases) {
  std::vector<ErmakovPoint> points;
  points.reserve(modes.size());
  for (const ModeSolution& m : modes) points.push_back(m.at(t));
  GaussianState s = assemble_state(pre_quench.u, pre_quench.lambda, points, t);
  if (phases == Phases::compute) {
    for (std::size_t j = 0; j < modes.size(); ++j) s.taus(j) = compute_tau(modes[j], t);
  }
  return s;
}

Matrix to_covariance(const GaussianState& state) {
  const int n = state.size();
  Eigen::LLT<Matrix> llt(state.omega);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Omega is not positive-definite at t = " + std::to_string(state.t));
  }
  const Matrix inv = llt.solve(Matrix::Identity(n, n));
  Matrix sigma(2 * n, 2 * n);
  sigma.topLeftCorner(n, n) = 0.5 * inv;
  sigma.topRightCorner(n, n) = inv * state.btilde;
  sigma.bottomLeftCorner(n, n) = sigma.topRightCorner(n, n).transpose();
  sigma.bottomRightCorner(n, n) = 0.5 * state.omega + 2.0 * state.btilde * inv * state.btilde;
  return 0.5 * (sigma + sigma.transpose());
}

std::vector<double> symplectic_eigenvalues(const Matrix& sigma) {
  const Eigen::Index dim = sigma.rows();
  if (dim % 2 != 0 || sigma.cols() != dim) {
    throw InvalidArgument("covariance matrix must be square with even dimension");
  }
  const Eigen::Index n = dim / 2;
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("covariance matrix is not positive-definite");
  }
  const Matrix l = llt.matrixL();
  Matrix j = Matrix::Zero(dim, dim);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  // L^T J L is antisymmetric with eigenvalues +-i nu; (L^T J L)^T (L^T J L)
  // is symmetric with each nu^2 appearing twice.
  const Matrix a = l.transpose() * j * l;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.transpose() * a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Williamson eigensolver failed");
  std::vector<double> nu(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lo = std::max(0.0, solver.eigenvalues()(2 * k));
    const double hi = std::max(0.0, solver.eigenvalues()(2 * k + 1));
    nu[k] = std::sqrt(0.5 * (lo + hi));
  }
  return nu;
}

}  // namespace chainent
