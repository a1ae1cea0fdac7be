#pragma once

#include "chainent/chain_model.hpp"

namespace chainent {

/// Two-site Bose-Hubbard model in the tunneling regime. The quench changes
/// the on-site frequency and keeps the hopping J fixed.
struct BoseHubbardSpec {
  double omega_bh_i = 3.0;
  double omega_bh_f = 3.0;
  double j = 0.0;

  void validate() const;
  /// Open two-site chain with (omega, k) from to_oscillator for both phases.
  ChainSpec chain() const;
};

struct OscillatorParameters {
  double omega;        // omega_+ = omega_BH - J
  double k;            // 2 omega_BH J
  double omega_minus;  // omega_BH + J
};

struct BoseHubbardParameters {
  double omega_bh;
  double j;
};

/// Throws InvalidArgument unless omega_bh > j >= 0 (omega_bh == j is accepted
/// with allow_critical, for post-quench parameters).
OscillatorParameters to_oscillator(double omega_bh, double j, bool allow_critical = false);

/// Inverse of to_oscillator for omega > 0, k >= 0.
BoseHubbardParameters from_oscillator(double omega, double k);

}  // namespace chainent
