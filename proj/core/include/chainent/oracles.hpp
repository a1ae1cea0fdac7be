#pragma once

#include <vector>

#include "chainent/chain_model.hpp"
#include "chainent/entanglement.hpp"
#include "chainent/time_grid.hpp"

// Independent verification paths. Nothing here evaluates an Ermakov scale
// factor: the covariance oracle propagates second moments with the post-quench
// Heisenberg solution, and the kernel oracle diagonalizes the discretized
// one-site reduced density matrix directly.

namespace chainent {

/// The standard symplectic form [[0, I], [-I, 0]] of dimension 2n.
Matrix symplectic_form(int n);

/// max |S J S^T - J| <= tolerance.
bool is_symplectic(const Matrix& s, double tolerance = 1e-10);

/// Heisenberg-picture solution of H = P^T P / 2 + X^T K_f X / 2 in the site
/// basis: (x(t), p(t)) = S(t) (x(0), p(0)).
class SymplecticPropagator {
 public:
  explicit SymplecticPropagator(const Matrix& k_post);

  Matrix at(double t) const;
  int size() const { return static_cast<int>(lambda_.size()); }

 private:
  Matrix u_;  // rows are post-quench modes
  Vector lambda_;
};

/// Ground-state covariance diag(K^-1/2 / 2, K^1/2 / 2) in (x..., p...) order.
Matrix initial_covariance(const Matrix& k_pre);

/// sigma(t) = S(t) sigma(0) S(t)^T for a sudden quench of `spec`.
Matrix propagate_covariance(const ChainSpec& spec, double t);

/// (x, p) block of the kept sites.
Matrix restrict_covariance(const Matrix& sigma, const std::vector<int>& sites);

/// Symplectic eigenvalues as moduli of the eigenvalues of J sigma (general
/// nonsymmetric eigensolver), ascending.
std::vector<double> oracle_symplectic_eigenvalues(const Matrix& sigma);

/// xi = (2 nu - 1) / (2 nu + 1); nu in [1/2 - 1e-8, 1/2) is clamped to 1/2,
/// anything smaller throws NumericalError.
double xi_from_nu(double nu);

struct OracleEntropies {
  std::vector<double> nu;      // kept-block symplectic eigenvalues
  std::vector<double> values;  // one per requested alpha
};

/// Entropies of the kept block of `sigma`. S_1 uses the nu form directly;
/// S_alpha for alpha >= 2 goes through xi.
OracleEntropies entropies_from_covariance(const Matrix& sigma, const Partition& partition,
                                          const std::vector<int>& alphas);

OracleEntropies covariance_entropy(const ChainSpec& spec, const Partition& partition, double t,
                                   const std::vector<int>& alphas);

/// Covariance-oracle counterpart of entropy_series. Sudden quenches use the
/// closed-form propagator; general protocols integrate
/// d sigma / dt = A sigma + sigma A^T, A = [[0, I], [-K(t), 0]], with RK4 and
/// global step halving until successive halvings agree within
/// quench.tolerance on every grid point.
EntropySeries covariance_entropy_series(const ChainSpec& spec, const ChainQuench& quench,
                                        const Partition& partition, const TimeGrid& grid,
                                        std::vector<int> alphas,
                                        const PipelineOptions& options = {});

/// Full-chain covariance on `grid` for a general protocol (see above).
std::vector<Matrix> integrate_covariance(const ChainSpec& spec, const ChainQuench& quench,
                                         const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Kernel oracle (one kept oscillator)

struct KernelGrid {
  double extent = 0.0;  // L: samples cover [-L, L]
  int points = 801;     // M

  double spacing() const { return 2.0 * extent / (points - 1); }
  /// L = 8 / sqrt(gamma - beta), M = 801.
  static KernelGrid defaults(double gamma, double beta);
};

/// Leading `count` eigenvalues (descending) of the discretized kernel
///   rho(x, x') = sqrt((gamma - beta) / pi) exp[-gamma (x^2 + x'^2) / 2 + beta x x']
///                * exp[i z (x^2 - x'^2)]
/// with the phase factor dropped when with_phase is false. Throws
/// NumericalError when the discrete trace deviates from 1 by more than 1e-4.
std::vector<double> kernel_spectrum(double gamma, double beta, double z, const KernelGrid& grid,
                                    int count, bool with_phase = true);

}  // namespace chainent
