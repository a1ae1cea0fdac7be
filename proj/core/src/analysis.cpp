#include "chainent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include <fftw3.h>

#include "chainent/error.hpp"

namespace chainent {

std::vector<double> PeriodEstimate::periods() const {
  std::vector<double> out;
  for (const auto& c : components) out.push_back(c.period);
  return out;
}

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> magnitude_spectrum(std::span<const double> values) {
  const std::size_t n = values.size();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(n - 1));
    in[i] = w * (values[i] - mean);
  }
  fftw_execute(plan);
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return mag;
}

struct Peak {
  double frequency;
  double magnitude;
};

std::vector<Peak> spectral_peaks(std::span<const double> values, double dt) {
  const std::vector<double> mag = magnitude_spectrum(values);
  const double resolution = 1.0 / (static_cast<double>(values.size()) * dt);
  std::vector<Peak> peaks;
  for (std::size_t k = 1; k + 1 < mag.size(); ++k) {
    if (!(mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])) continue;
    // Parabola through the log magnitudes (exact for a Gaussian-like main lobe).
    double offset = 0.0;
    if (mag[k - 1] > 0.0 && mag[k + 1] > 0.0) {
      const double a = std::log(mag[k - 1]);
      const double b = std::log(mag[k]);
      const double c = std::log(mag[k + 1]);
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    }
    peaks.push_back({(static_cast<double>(k) + offset) * resolution, mag[k]});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& p, const Peak& q) { return p.magnitude > q.magnitude; });
  return peaks;
}

// |sum_a c_a f_a| for every integer vector with 2 <= sum |c_a| <= max_order and
// at least two nonzero entries.
bool is_combination(double f, const std::vector<double>& basis, int max_order,
                    double resolution) {
  const int n = static_cast<int>(basis.size());
  if (n < 2) return false;
  std::vector<int> c(n, -max_order);
  for (;;) {
    int l1 = 0;
    int nonzero = 0;
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      l1 += std::abs(c[a]);
      nonzero += c[a] != 0;
      sum += c[a] * basis[a];
    }
    if (l1 >= 2 && l1 <= max_order && nonzero >= 2 &&
        std::abs(f - std::abs(sum)) <= resolution * (1.0 + 0.5 * l1)) {
      return true;
    }
    int a = 0;
    while (a < n && ++c[a] > max_order) c[a++] = -max_order;
    if (a == n) return false;
  }
}

std::vector<PeriodComponent> independent_components(std::span<const double> values, double dt,
                                                    const PeriodOptions& options) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (values.size() < 16) throw InvalidArgument("period analysis needs at least 16 samples");
  const std::vector<Peak> peaks = spectral_peaks(values, dt);
  std::vector<PeriodComponent> out;
  if (peaks.empty() || !(peaks.front().magnitude > 0.0)) return out;

  const double resolution = 1.0 / (static_cast<double>(values.size()) * dt);
  const double strongest = peaks.front().magnitude;
  std::vector<double> accepted;
  for (const Peak& p : peaks) {
    if (p.magnitude < options.significance * strongest) break;
    bool derived = false;
    for (double f : accepted) {
      for (int h = 2; h <= options.max_harmonic && !derived; ++h) {
        derived = std::abs(p.frequency - h * f) <= resolution * (1.0 + 0.15 * h);
      }
      if (derived) break;
    }
    if (!derived) derived = is_combination(p.frequency, accepted, options.max_order, resolution);
    if (derived) continue;
    accepted.push_back(p.frequency);
    out.push_back({1.0 / p.frequency, p.frequency, p.magnitude / strongest});
  }
  return out;
}

bool is_flat(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return !(*hi - *lo > 1e-12 * std::max(1.0, std::abs(*hi)));
}

}  // namespace

PeriodEstimate extract_periods(std::span<const double> values, double dt, int count,
                               const PeriodOptions& options) {
  if (count < 1) throw InvalidArgument("period count must be positive");
  // Each component needs >= 4 samples per period and a few cycles per window.
  if (values.size() < static_cast<std::size_t>(8 * count) + 16) {
    throw InvalidArgument("series of " + std::to_string(values.size()) +
                          " samples is too short to resolve " + std::to_string(count) +
                          " periods");
  }
  PeriodEstimate estimate;
  std::vector<PeriodComponent> all = independent_components(values, dt, options);
  if (all.size() > static_cast<std::size_t>(count)) all.resize(count);
  for (const auto& c : all) {
    if (c.period < 4.0 * dt) {
      throw NumericalError("period " + std::to_string(c.period) + " is resolved by fewer than 4 "
                           "samples; reduce dt");
    }
  }
  estimate.components = std::move(all);
  return estimate;
}

PeriodEstimate extract_periods(const EntropySeries& series, int count, int alpha,
                               const PeriodOptions& options) {
  return extract_periods(series.entropy(alpha), series.grid.dt, count, options);
}

int count_time_scales(std::span<const double> values, double dt, const PeriodOptions& options) {
  if (is_flat(values)) return 0;
  return static_cast<int>(independent_components(values, dt, options).size());
}

double revival_period(std::span<const double> values, double dt, const PeriodOptions& options) {
  if (values.size() < 16 || is_flat(values)) {
    throw NumericalError("series is flat: no revival structure");
  }
  const std::vector<PeriodComponent> components = independent_components(values, dt, options);
  if (components.empty()) throw NumericalError("no significant oscillation found");
  double slowest = 0.0;
  for (const auto& c : components) slowest = std::max(slowest, c.period);
  const double window = dt * static_cast<double>(values.size() - 1);
  if (window < 2.0 * slowest) {
    throw NumericalError("window of " + std::to_string(window) +
                         " holds fewer than two revivals of period " + std::to_string(slowest) +
                         "; increase t_max");
  }
  return slowest;
}

double revival_period(const EntropySeries& series, const PeriodOptions& options) {
  return revival_period(series.von_neumann(), series.grid.dt, options);
}

ScalingFit fit_scaling(std::span<const int> sizes, const std::vector<std::vector<double>>& values) {
  if (sizes.size() != values.size()) throw InvalidArgument("one series per chain size required");
  const std::set<int> distinct(sizes.begin(), sizes.end());
  if (distinct.size() < 3) throw InvalidArgument("scaling fit needs at least 3 distinct N");
  for (int n : sizes) {
    if (n < 2) throw InvalidArgument("chain sizes must be >= 2");
  }
  const std::size_t count = values.front().size();
  for (const auto& v : values) {
    if (v.size() != count) throw InvalidArgument("series lengths differ across N");
  }

  const std::size_t m = sizes.size();
  std::vector<double> x(m);
  for (std::size_t s = 0; s < m; ++s) x[s] = std::log(static_cast<double>(sizes[s]));
  const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0;
  for (double v : x) sxx += (v - x_mean) * (v - x_mean);

  ScalingFit fit;
  fit.sizes.assign(sizes.begin(), sizes.end());
  for (std::size_t i = 0; i < count; ++i) {
    double y_mean = 0.0;
    for (std::size_t s = 0; s < m; ++s) y_mean += values[s][i];
    y_mean /= static_cast<double>(m);
    double sxy = 0.0;
    for (std::size_t s = 0; s < m; ++s) sxy += (x[s] - x_mean) * (values[s][i] - y_mean);
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;
    double rss = 0.0;
    double ratio_mean = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      const double r = values[s][i] - (slope * x[s] + intercept);
      rss += r * r;
      ratio_mean += values[s][i] / x[s];
    }
    ratio_mean /= static_cast<double>(m);
    double spread = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      spread = std::max(spread, std::abs(values[s][i] / x[s] - ratio_mean));
    }
    fit.slope.push_back(slope);
    fit.intercept.push_back(intercept);
    fit.residual.push_back(std::sqrt(rss));
    fit.spread.push_back(spread);
    fit.relative_spread.push_back(ratio_mean != 0.0 ? spread / std::abs(ratio_mean) : 0.0);
  }
  return fit;
}

}  // namespace chainent
