#pragma once

#include <span>
#include <vector>

#include "chainent/entanglement.hpp"

namespace chainent {

struct PeriodComponent {
  double period = 0.0;
  double frequency = 0.0;  // cycles per unit time
  double weight = 0.0;     // spectral magnitude relative to the strongest peak
};

/// Independent oscillation components, weights descending.
struct PeriodEstimate {
  std::vector<PeriodComponent> components;

  std::vector<double> periods() const;
};

struct PeriodOptions {
  double significance = 0.05;  // peaks below this fraction of the strongest are ignored
  int max_harmonic = 16;
  int max_order = 4;           // largest |c_1| + |c_2| + ... for combination tones
};

/// Magnitude spectrum of the mean-subtracted, Hann-windowed signal. Peaks are
/// taken in descending magnitude (parabolic interpolation in log magnitude);
/// a peak is dropped when it is a harmonic or a low-order combination tone of
/// peaks already accepted, so each accepted component is an independent time
/// scale. Returns at most `count` components.
///
/// Throws InvalidArgument when the series is too short for `count`, and
/// NumericalError when an accepted period has fewer than 4 samples.
PeriodEstimate extract_periods(std::span<const double> values, double dt, int count,
                               const PeriodOptions& options = {});
PeriodEstimate extract_periods(const EntropySeries& series, int count, int alpha = 1,
                               const PeriodOptions& options = {});

/// Number of independent time scales among the significant peaks.
int count_time_scales(std::span<const double> values, double dt,
                      const PeriodOptions& options = {});

/// Period of the slowest independent component (the revival envelope).
/// Throws NumericalError for a flat series or when the window holds fewer
/// than two revival periods.
double revival_period(std::span<const double> values, double dt,
                      const PeriodOptions& options = {});
double revival_period(const EntropySeries& series, const PeriodOptions& options = {});

/// Per-time OLS of S_1 against ln N: S_1(t, N) ~ slope(t) ln N + intercept(t).
struct ScalingFit {
  std::vector<int> sizes;
  std::vector<double> slope;
  std::vector<double> intercept;
  std::vector<double> residual;         // l2 norm of the fit residuals
  std::vector<double> spread;           // max_N |S_1 / ln N - mean_N(S_1 / ln N)|
  std::vector<double> relative_spread;  // spread / mean_N(S_1 / ln N)
};

/// `values[s][i]` is S_1 at time index i for chain size sizes[s]. Needs at
/// least 3 distinct sizes >= 2 and equally long series.
ScalingFit fit_scaling(std::span<const int> sizes,
                       const std::vector<std::vector<double>>& values);

}  // namespace chainent
