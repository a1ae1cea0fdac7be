#pragma once

#include <span>
#include <vector>

#include "chainent/chain_model.hpp"
#include "chainent/ermakov.hpp"

namespace chainent {

/// psi(X, t) = (det Omega / pi)^(1/4) exp[i (X^T Btilde X - sum E_j tau_j)]
///             * exp[-X^T Omega X / 2]
///
/// with Omega = U^T diag(sqrt(lambda_j(0)) / b_j^2) U and
/// Btilde = U^T diag(b_j' / (2 b_j)) U.
struct GaussianState {
  Matrix omega;
  Matrix btilde;
  Vector energies;  // E_j = sqrt(lambda_j(0)) / 2
  Vector taus;      // zero unless phases were requested
  double t = 0.0;

  int size() const { return static_cast<int>(omega.rows()); }
};

enum class Phases { zero, compute };

/// Builds the state from normal modes (rows of `u`, pre-quench eigenvalues
/// `lambda_pre`) and one Ermakov point per mode in the same order.
GaussianState assemble_state(const Matrix& u, const Vector& lambda_pre,
                             std::span<const ErmakovPoint> points, double t);

GaussianState assemble_state(const NormalModes& pre_quench, std::span<const ModeSolution> modes,
                             double t, Phases phases = Phases::zero);

/// Symmetrized second moments, ordered (x_1..x_N, p_1..p_N), hbar = 1:
///   <x x^T> = Omega^-1 / 2
///   <(x p^T + p x^T)> / 2 = Omega^-1 Btilde
///   <p p^T> = Omega / 2 + 2 Btilde Omega^-1 Btilde
/// Throws NumericalError when Omega is not positive-definite.
Matrix to_covariance(const GaussianState& state);

/// Symplectic eigenvalues (ascending, one per mode) of a covariance matrix in
/// (x..., p...) ordering, via the Cholesky form of Williamson's theorem.
std::vector<double> symplectic_eigenvalues(const Matrix& sigma);

}  // namespace chainent
