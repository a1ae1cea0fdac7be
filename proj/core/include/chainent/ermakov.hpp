#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "chainent/time_grid.hpp"

namespace chainent {

/// Scale factor of one normal mode and its time derivative.
struct ErmakovPoint {
  double b = 1.0;
  double b_dot = 0.0;
};

enum class Interpolation { linear, step };

/// Frequency-squared schedule lambda(t) of one mode. Before t = 0 the mode sits
/// in the ground state of `lambda_initial`; for t >= 0 it follows the samples.
/// Linear interpolation joins consecutive samples; step holds each sample until
/// the next one. Past the last sample the final value is held.
struct ModeProtocol {
  double lambda_initial = 1.0;
  std::vector<double> times{0.0};
  std::vector<double> lambdas{1.0};
  Interpolation interpolation = Interpolation::step;

  static ModeProtocol sudden(double lambda_i, double lambda_f);

  void validate() const;

  /// Right-continuous at step breakpoints.
  double lambda_at(double t) const;
  double final_lambda() const { return lambdas.back(); }
};

/// b(t) = sqrt(n cos(2 sqrt(lambda_f) t) + m) for a sudden quench with
/// lambda_f > 0.
struct SuddenCoefficients {
  double n = 0.0;
  double m = 1.0;
};

class NumericTrajectory;

/// Solution of b'' + lambda(t) b = lambda_initial / b^3 with b(0) = 1,
/// b'(0) = 0. Either an analytic sudden-quench form or a numerically
/// integrated trajectory; both are immutable and cheap to copy.
class ModeSolution {
 public:
  ErmakovPoint at(double t) const;

  bool closed_form() const { return trajectory_ == nullptr; }
  double lambda_initial() const { return lambda_i_; }
  double lambda_final() const { return lambda_f_; }
  double lambda_at(double t) const;

  /// Empty for lambda_f = 0, where b = sqrt(1 + lambda_i t^2).
  std::optional<SuddenCoefficients> coefficients() const;

  /// Analytic b''(t); closed form only.
  double second_derivative(double t) const;

  /// b'' + lambda(t) b - lambda_i / b^3 evaluated from the analytic b''.
  /// Closed form only.
  double residual(double t) const;

  /// Energy-balance residual of a numeric trajectory on its output grid;
  /// zero for closed forms.
  double max_invariant_residual() const;

  /// Step size accepted by the numeric integrator; zero for closed forms.
  double step() const;

 private:
  friend ModeSolution solve_sudden(double lambda_i, double lambda_f);
  friend ModeSolution integrate_general(const ModeProtocol& protocol, const TimeGrid& grid,
                                        double tolerance);

  double lambda_i_ = 1.0;
  double lambda_f_ = 1.0;
  std::shared_ptr<const NumericTrajectory> trajectory_;
};

/// Closed form for a sudden quench lambda_i -> lambda_f. Throws
/// InvalidArgument for lambda_i <= 0 or lambda_f < 0.
ModeSolution solve_sudden(double lambda_i, double lambda_f);

/// Integrates a general protocol with classical RK4, halving the global step
/// until both the energy-balance residual and the change between successive
/// halvings are below `tolerance` on every grid point. Throws NumericalError
/// (naming the worst time) once further halving stops converging.
ModeSolution integrate_general(const ModeProtocol& protocol, const TimeGrid& grid,
                               double tolerance);

/// Scaled time tau(t) = integral_0^t dt' / b(t')^2 by adaptive Gauss-Kronrod
/// quadrature. Only used for wavefunction phase bookkeeping.
double compute_tau(const ModeSolution& mode, double t);

/// b'^2 + lambda_f b^2 + lambda_i / b^2, conserved after a sudden quench and
/// equal to lambda_i + lambda_f.
double sudden_invariant(const ModeSolution& mode, double t);

}  // namespace chainent
