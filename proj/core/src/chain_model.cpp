#include "chainent/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "chainent/error.hpp"

namespace chainent {

void ChainSpec::validate() const {
  if (n_sites < 2) {
    throw InvalidArgument("chain needs at least 2 sites, got " + std::to_string(n_sites));
  }
  if (!(omega_i > 0.0)) throw InvalidArgument("pre-quench omega must be positive");
  if (!(omega_f >= 0.0)) throw InvalidArgument("post-quench omega must be non-negative");
  if (!(k_i >= 0.0) || !(k_f >= 0.0)) throw InvalidArgument("couplings must be non-negative");
  if (!std::isfinite(omega_i) || !std::isfinite(omega_f) || !std::isfinite(k_i) ||
      !std::isfinite(k_f)) {
    throw InvalidArgument("chain parameters must be finite");
  }
  // With omega_i > 0 and k_i >= 0 every pre-quench eigenvalue is >= omega_i^2,
  // so the initial ground state always exists once the checks above pass.
}

Matrix coupling_matrix(int n_sites, Boundary boundary, double omega, double k) {
  Matrix m = Matrix::Zero(n_sites, n_sites);
  m.diagonal().setConstant(omega * omega);
  auto add_bond = [&](int a, int b) {
    m(a, a) += k;
    m(b, b) += k;
    m(a, b) -= k;
    m(b, a) -= k;
  };
  for (int j = 0; j + 1 < n_sites; ++j) add_bond(j, j + 1);
  if (boundary == Boundary::periodic) add_bond(n_sites - 1, 0);
  return m;
}

CouplingMatrix build_coupling_matrix(const ChainSpec& spec, Phase phase) {
  spec.validate();
  return {coupling_matrix(spec.n_sites, spec.boundary, spec.omega(phase), spec.coupling(phase))};
}

NormalModes eigendecompose(const Matrix& k) {
  if (k.rows() != k.cols()) throw InvalidArgument("coupling matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed to converge for a " +
                         std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                         " coupling matrix");
  }
  const Vector& values = solver.eigenvalues();
  const int n = static_cast<int>(values.size());

  NormalModes modes;
  modes.permutation.resize(n);
  std::iota(modes.permutation.begin(), modes.permutation.end(), 0);
  std::stable_sort(modes.permutation.begin(), modes.permutation.end(),
                   [&](int a, int b) { return values(a) < values(b); });

  modes.u.resize(n, n);
  modes.lambda.resize(n);
  for (int j = 0; j < n; ++j) {
    const int src = modes.permutation[j];
    modes.u.row(j) = solver.eigenvectors().col(src).transpose();
    modes.lambda(j) = values(src);
  }
  return modes;
}

std::vector<double> periodic_eigenvalues(const ChainSpec& spec, Phase phase) {
  if (spec.boundary != Boundary::periodic) {
    throw InvalidArgument("periodic_eigenvalues requires a periodic chain");
  }
  spec.validate();
  const double omega = spec.omega(phase);
  const double k = spec.coupling(phase);
  const int n = spec.n_sites;
  std::vector<double> out(n);
  for (int j = 1; j <= n; ++j) {
    out[j - 1] = omega * omega + 2.0 * k * (1.0 - std::cos(2.0 * std::numbers::pi * j / n));
  }
  return out;
}

ChainModes chain_modes(const ChainSpec& spec) {
  spec.validate();
  const NormalModes lap = eigendecompose(coupling_matrix(spec.n_sites, spec.boundary, 0.0, 1.0));
  ChainModes out;
  out.u = lap.u;
  // L is positive semi-definite; snap solver noise around the zero mode so a
  // periodic chain's uniform mode has lambda = omega^2 exactly.
  const double scale = std::max(1.0, lap.lambda.cwiseAbs().maxCoeff());
  out.laplacian = lap.lambda.unaryExpr([&](double mu) { return mu < 1e-12 * scale ? 0.0 : mu; });
  out.lambda_pre = (spec.k_i * out.laplacian.array() + spec.omega_i * spec.omega_i).matrix();
  out.lambda_post = (spec.k_f * out.laplacian.array() + spec.omega_f * spec.omega_f).matrix();
  return out;
}

}  // namespace chainent
