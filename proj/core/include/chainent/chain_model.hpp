#pragma once

#include <vector>

#include <Eigen/Dense>

namespace chainent {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Boundary { open, periodic };
enum class Phase { pre, post };

/// A uniform chain of unit-mass oscillators quenched from (omega_i, k_i) to
/// (omega_f, k_f) at t = 0.
struct ChainSpec {
  int n_sites = 2;
  double omega_i = 1.0;
  double omega_f = 1.0;
  double k_i = 0.0;
  double k_f = 0.0;
  Boundary boundary = Boundary::periodic;

  double omega(Phase phase) const { return phase == Phase::pre ? omega_i : omega_f; }
  double coupling(Phase phase) const { return phase == Phase::pre ? k_i : k_f; }

  /// Number of (x_j - x_{j+1})^2 bonds. A periodic chain of two sites is
  /// treated as having both bonds, i.e. the pair is coupled twice.
  int bond_count() const { return boundary == Boundary::periodic ? n_sites : n_sites - 1; }

  /// Throws InvalidArgument when any chain invariant is violated.
  void validate() const;
};

/// The N x N matrix K of the potential term X^T K X / 2.
struct CouplingMatrix {
  Matrix k;
};

/// Orthogonal decomposition K^D = U K U^T. Rows of `u` are the normal-mode
/// vectors, `lambda` ascending. `permutation[j]` is the solver's original
/// index of sorted mode j.
struct NormalModes {
  Matrix u;
  Vector lambda;
  std::vector<int> permutation;

  int size() const { return static_cast<int>(lambda.size()); }
};

/// Normal modes shared by the pre- and post-quench Hamiltonians together with
/// both eigenvalue sets. Every uniform chain has K = omega^2 I + k L with the
/// bond Laplacian L, so one orthogonal U decouples both phases.
struct ChainModes {
  Matrix u;
  Vector laplacian;    // eigenvalues mu_j of L, ascending
  Vector lambda_pre;   // omega_i^2 + k_i mu_j
  Vector lambda_post;  // omega_f^2 + k_f mu_j

  int size() const { return static_cast<int>(laplacian.size()); }
};

CouplingMatrix build_coupling_matrix(const ChainSpec& spec, Phase phase);
Matrix coupling_matrix(int n_sites, Boundary boundary, double omega, double k);

/// Symmetric eigendecomposition with ascending eigenvalues. Throws
/// NumericalError if the solver does not converge.
NormalModes eigendecompose(const Matrix& k);

/// Closed-form lambda_j = omega^2 + 2k(1 - cos(2 pi j / N)), j = 1..N, in
/// that order. Throws InvalidArgument for an open chain.
std::vector<double> periodic_eigenvalues(const ChainSpec& spec, Phase phase);

ChainModes chain_modes(const ChainSpec& spec);

}  // namespace chainent
