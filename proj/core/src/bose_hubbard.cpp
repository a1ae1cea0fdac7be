#include "chainent/bose_hubbard.hpp"

#include <cmath>
#include <string>

#include "chainent/error.hpp"

namespace chainent {

OscillatorParameters to_oscillator(double omega_bh, double j, bool allow_critical) {
  if (!std::isfinite(omega_bh) || !std::isfinite(j) || j < 0.0) {
    throw InvalidArgument("Bose-Hubbard parameters need finite omega_BH and J >= 0");
  }
  const bool ok = allow_critical ? omega_bh >= j : omega_bh > j;
  if (!ok) {
    throw InvalidArgument("omega_BH = " + std::to_string(omega_bh) +
                          (allow_critical ? " must be >= J = " : " must exceed J = ") +
                          std::to_string(j));
  }
  return {omega_bh - j, 2.0 * omega_bh * j, omega_bh + j};
}

BoseHubbardParameters from_oscillator(double omega, double k) {
  if (!(omega > 0.0) || !(k >= 0.0)) {
    throw InvalidArgument("from_oscillator needs omega > 0 and k >= 0");
  }
  const double omega_minus = std::sqrt(omega * omega + 2.0 * k);
  return {0.5 * (omega + omega_minus), 0.5 * (omega_minus - omega)};
}

void BoseHubbardSpec::validate() const {
  to_oscillator(omega_bh_i, j);
  to_oscillator(omega_bh_f, j, true);
}

ChainSpec BoseHubbardSpec::chain() const {
  const OscillatorParameters pre = to_oscillator(omega_bh_i, j);
  const OscillatorParameters post = to_oscillator(omega_bh_f, j, true);
  ChainSpec spec;
  spec.n_sites = 2;
  spec.omega_i = pre.omega;
  spec.k_i = pre.k;
  spec.omega_f = post.omega;
  spec.k_f = post.k;
  spec.boundary = Boundary::open;
  return spec;
}

}  // namespace chainent
