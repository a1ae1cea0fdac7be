#pragma once

#include <cmath>
#include <cstddef>

#include "chainent/error.hpp"

namespace chainent {

/// Uniform grid t_i = i * dt, i = 0 .. count - 1. Every consumer that compares
/// two computations (entropy series, oracles, analysis) shares one of these.
struct TimeGrid {
  double dt = 0.01;
  std::size_t count = 1;

  double at(std::size_t i) const { return dt * static_cast<double>(i); }
  double t_max() const { return at(count - 1); }

  /// floor(t_max / dt) + 1 points starting at 0.
  static TimeGrid span(double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
    if (!(t_max >= dt) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be >= dt");
    const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    return {dt, steps + 1};
  }
};

}  // namespace chainent
