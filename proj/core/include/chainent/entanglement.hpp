#pragma once

#include <span>
#include <vector>

#include "chainent/chain_model.hpp"
#include "chainent/ermakov.hpp"
#include "chainent/gaussian_state.hpp"
#include "chainent/time_grid.hpp"

namespace chainent {

/// Sites traced out (subsystem A) and kept (subsystem B), zero-based and
/// sorted.
struct Partition {
  std::vector<int> traced;
  std::vector<int> kept;

  /// Throws InvalidArgument for out-of-range, duplicate, empty or full sets.
  static Partition tracing(int n_sites, std::vector<int> traced_sites);
  /// Traces sites N/2 .. N-1 (the last N - N/2 sites).
  static Partition second_half(int n_sites);
  /// The same cut with the roles of A and B exchanged.
  Partition complement() const;

  int n_sites() const { return static_cast<int>(traced.size() + kept.size()); }
};

/// rho_red(a, a') ~ exp[i(a^T Z a - a'^T Z a') - (a^T gamma a + a'^T gamma a') / 2
///                      + a^T (beta + i twist) a']
///
/// `twist` is the antisymmetric imaginary part of the cross term. It vanishes
/// with a single kept site and whenever Btilde_AB^T Omega_AA^-1 Omega_AB is
/// symmetric, but not in general.
struct ReducedState {
  Matrix gamma;
  Matrix beta;
  Matrix z;
  Matrix twist;
  double t = 0.0;
};

/// Spectrum parameters of the reduced density matrix: its eigenvalues are
/// prod_j (1 - xi_j) xi_j^{l_j}. Sorted descending.
struct XiSpectrum {
  std::vector<double> xi;
  std::vector<double> beta_tilde;
  bool twisted = false;  // true when the cross-term twist entered the spectrum
};

ReducedState reduce(const GaussianState& state, const Partition& partition);

/// gamma = V^T gamma_D V, beta_tilde = gamma_D^-1/2 V beta V^T gamma_D^-1/2,
/// xi_j = beta_tilde_j / (1 + sqrt(1 - beta_tilde_j^2)). A non-vanishing twist
/// is handled through the reduced kernel's covariance matrix instead.
/// Throws NumericalError for beta_tilde_j <= -1e-8 or >= 1.
XiSpectrum xi_spectrum(const ReducedState& reduced);

/// S_alpha = sum_j ln[(1 - xi_j)^alpha / (1 - xi_j^alpha)] / (1 - alpha), in
/// nats. alpha = 1 is the von Neumann entropy.
double renyi_entropy(std::span<const double> xi, int alpha);
double renyi_entropy(const XiSpectrum& spectrum, int alpha);

/// S_1 = sum_j [-ln(1 - xi_j) - xi_j / (1 - xi_j) ln xi_j], 0 at xi_j = 0.
double von_neumann_entropy(std::span<const double> xi);
double von_neumann_entropy(const XiSpectrum& spectrum);

struct ReducedSpectrum {
  /// (1 - xi_j) xi_j^n for n = 0 .. n_max, one row per mode.
  std::vector<std::vector<double>> per_mode;
  /// Tensor product of the per-mode ladders, sorted descending.
  std::vector<double> joint;
  /// Sum of `joint`; 1 - prod_j (1 - xi_j^(n_max + 1)).
  double partial_sum = 0.0;
};

ReducedSpectrum reduced_spectrum(std::span<const double> xi, int n_max);

/// Closed-form two-oscillator reduction (trace x_2, keep x_1) in terms of the
/// normal-mode frequencies omega_+(0), omega_-(0) and the Ermakov points of
/// the (x_1 + x_2) and (x_1 - x_2) modes.
struct TwoSiteReduction {
  double gamma, beta, z;
};
TwoSiteReduction two_site_reduction(double omega_plus0, double omega_minus0,
                                    const ErmakovPoint& plus, const ErmakovPoint& minus);

/// xi = beta / (gamma + sqrt(gamma^2 - beta^2)).
double two_site_xi(double gamma, double beta);

// ---------------------------------------------------------------------------
// End-to-end pipeline

struct ParameterSample {
  double t = 0.0;
  double omega = 0.0;
  double k = 0.0;
};

/// Post-quench schedule of a uniform chain. `sudden` jumps to the chain's
/// post-quench parameters at t = 0; `general` follows a (t, omega, k) table
/// with lambda_j(t) = omega(t)^2 + k(t) mu_j interpolated linearly or stepwise.
struct ChainQuench {
  enum class Kind { sudden, general };
  Kind kind = Kind::sudden;
  std::vector<ParameterSample> table;
  Interpolation interpolation = Interpolation::linear;
  double tolerance = 1e-10;

  static ChainQuench sudden() { return {}; }
  void validate() const;
  ModeProtocol mode_protocol(double lambda_initial, double laplacian_eigenvalue) const;
};

/// Per-mode Ermakov solutions on `grid`; closed forms for sudden quenches.
std::vector<ModeSolution> solve_modes(const ChainSpec& spec, const ChainModes& modes,
                                      const ChainQuench& quench, const TimeGrid& grid);

struct EntropySeries {
  TimeGrid grid;
  std::vector<int> alphas;                  // ascending, 1 = von Neumann
  std::vector<std::vector<double>> xi;      // xi[i] at grid.at(i)
  std::vector<std::vector<double>> values;  // values[a][i] = S_{alphas[a]}(t_i)

  const std::vector<double>& entropy(int alpha) const;
  const std::vector<double>& von_neumann() const { return entropy(1); }
};

struct PipelineOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
};

EntropySeries entropy_series(const ChainSpec& spec, const ChainQuench& quench,
                             const Partition& partition, const TimeGrid& grid,
                             std::vector<int> alphas, const PipelineOptions& options = {});

/// Same pipeline on caller-provided normal modes (e.g. a rotated basis inside
/// degenerate subspaces).
EntropySeries entropy_series(const ChainSpec& spec, const ChainModes& modes,
                             const ChainQuench& quench, const Partition& partition,
                             const TimeGrid& grid, std::vector<int> alphas,
                             const PipelineOptions& options = {});

}  // namespace chainent
