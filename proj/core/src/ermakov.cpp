#include "chainent/ermakov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chainent/error.hpp"

namespace chainent {

// ---------------------------------------------------------------------------
// ModeProtocol

ModeProtocol ModeProtocol::sudden(double lambda_i, double lambda_f) {
  ModeProtocol p;
  p.lambda_initial = lambda_i;
  p.times = {0.0};
  p.lambdas = {lambda_f};
  p.interpolation = Interpolation::step;
  return p;
}

void ModeProtocol::validate() const {
  if (!(lambda_initial > 0.0) || !std::isfinite(lambda_initial)) {
    throw InvalidArgument("initial lambda must be positive (no ground state otherwise)");
  }
  if (times.empty() || times.size() != lambdas.size()) {
    throw InvalidArgument("protocol needs matching, non-empty time and lambda tables");
  }
  if (times.front() != 0.0) throw InvalidArgument("protocol samples must start at t = 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(lambdas[i])) {
      throw InvalidArgument("protocol samples must be finite");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw InvalidArgument("protocol sample times must be strictly increasing");
    }
  }
}

namespace {

// Index k of the sample interval [times[k], times[k+1]) containing t.
std::size_t segment_of(const ModeProtocol& p, double t) {
  const auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
  return it == p.times.begin() ? 0 : static_cast<std::size_t>(it - p.times.begin()) - 1;
}

// lambda(t) = value + slope * (t - origin) on one smooth piece.
struct Piece {
  double origin = 0.0;
  double value = 0.0;
  double slope = 0.0;

  double at(double t) const { return value + slope * (t - origin); }
};

Piece piece_containing(const ModeProtocol& p, double t) {
  const std::size_t k = segment_of(p, t);
  if (p.interpolation == Interpolation::step || k + 1 >= p.times.size()) {
    return {p.times[k], p.lambdas[k], 0.0};
  }
  const double slope = (p.lambdas[k + 1] - p.lambdas[k]) / (p.times[k + 1] - p.times[k]);
  return {p.times[k], p.lambdas[k], slope};
}

// Value approaching t from the left (t > 0), or lambda(0+) at t = 0.
double lambda_left(const ModeProtocol& p, double t) {
  if (t <= 0.0) return p.lambdas.front();
  const auto it = std::lower_bound(p.times.begin(), p.times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - p.times.begin()) - 1;
  if (p.interpolation == Interpolation::step || k + 1 >= p.times.size()) return p.lambdas[k];
  const double slope = (p.lambdas[k + 1] - p.lambdas[k]) / (p.times[k + 1] - p.times[k]);
  return p.lambdas[k] + slope * (t - p.times[k]);
}

// b, b', and the accumulated energy input w = int lambda' b^2 dt + jumps.
struct State {
  double b = 1.0;
  double v = 0.0;
  double w = 0.0;
  double lambda = 0.0;  // lambda in effect just before the current time
};

struct Derivative {
  double b, v, w;
};

Derivative rhs(double lambda0, const Piece& piece, double t, double b, double v) {
  const double lam = piece.at(t);
  return {v, -lam * b + lambda0 / (b * b * b), piece.slope * b * b};
}

void rk4_piece(State& s, double lambda0, const Piece& piece, double t0, double t1, double h) {
  const double len = t1 - t0;
  if (len <= 0.0) return;
  const auto steps = static_cast<long>(std::ceil(len / h - 1e-12));
  const double dt = len / static_cast<double>(std::max(1L, steps));
  double t = t0;
  for (long i = 0; i < std::max(1L, steps); ++i) {
    const Derivative k1 = rhs(lambda0, piece, t, s.b, s.v);
    const Derivative k2 = rhs(lambda0, piece, t + 0.5 * dt, s.b + 0.5 * dt * k1.b, s.v + 0.5 * dt * k1.v);
    const Derivative k3 = rhs(lambda0, piece, t + 0.5 * dt, s.b + 0.5 * dt * k2.b, s.v + 0.5 * dt * k2.v);
    const Derivative k4 = rhs(lambda0, piece, t + dt, s.b + dt * k3.b, s.v + dt * k3.v);
    s.b += dt / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
    s.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    s.w += dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    t = t0 + static_cast<double>(i + 1) * dt;
  }
  s.lambda = piece.at(t1);
}

// Advance from t0 to t1, splitting at protocol breakpoints so RK4 only ever
// sees a smooth lambda(t).
void advance(State& s, const ModeProtocol& p, double t0, double t1, double h) {
  double a = t0;
  while (a < t1) {
    const auto next = std::upper_bound(p.times.begin(), p.times.end(), a);
    const double c = (next == p.times.end()) ? t1 : std::min(t1, *next);
    const Piece piece = piece_containing(p, a);
    const double entering = piece.at(a);
    if (entering != s.lambda) {
      s.w += (entering - s.lambda) * s.b * s.b;
      s.lambda = entering;
    }
    rk4_piece(s, p.lambda_initial, piece, a, c, h);
    a = c;
  }
}

double energy(const State& s, double lambda0) {
  return s.v * s.v + s.lambda * s.b * s.b + lambda0 / (s.b * s.b);
}

}  // namespace

// ---------------------------------------------------------------------------
// Numeric trajectory

class NumericTrajectory {
 public:
  ModeProtocol protocol;
  TimeGrid grid;
  double h = 0.0;
  double max_residual = 0.0;
  std::vector<ErmakovPoint> points;

  ErmakovPoint at(double t) const {
    const double x = t / grid.dt;
    auto i = static_cast<std::size_t>(std::floor(x + 1e-9));
    if (i >= grid.count) i = grid.count - 1;
    const double ti = grid.at(i);
    if (std::abs(t - ti) <= 1e-12 * std::max(1.0, t)) return points[i];
    State s{points[i].b, points[i].b_dot, 0.0, lambda_left(protocol, ti)};
    advance(s, protocol, ti, t, h);
    return {s.b, s.v};
  }
};

namespace {

struct Run {
  std::vector<ErmakovPoint> points;
  double max_residual = 0.0;
  double worst_time = 0.0;
};

Run run_grid(const ModeProtocol& p, const TimeGrid& grid, double h) {
  Run run;
  run.points.reserve(grid.count);
  State s{1.0, 0.0, 0.0, p.lambdas.front()};
  const double e0 = energy(s, p.lambda_initial);
  run.points.push_back({1.0, 0.0});
  for (std::size_t i = 1; i < grid.count; ++i) {
    advance(s, p, grid.at(i - 1), grid.at(i), h);
    const double r = std::abs(energy(s, p.lambda_initial) - e0 - s.w);
    if (!(r <= run.max_residual)) {
      run.max_residual = std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
      run.worst_time = grid.at(i);
    }
    run.points.push_back({s.b, s.v});
  }
  return run;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeSolution

ModeSolution solve_sudden(double lambda_i, double lambda_f) {
  if (!(lambda_i > 0.0) || !std::isfinite(lambda_i)) {
    throw InvalidArgument("lambda_i must be positive (no initial ground state otherwise)");
  }
  if (!(lambda_f >= 0.0) || !std::isfinite(lambda_f)) {
    throw InvalidArgument("lambda_f must be non-negative for a closed-form sudden quench");
  }
  ModeSolution out;
  out.lambda_i_ = lambda_i;
  out.lambda_f_ = lambda_f;
  return out;
}

ModeSolution integrate_general(const ModeProtocol& protocol, const TimeGrid& grid,
                               double tolerance) {
  protocol.validate();
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (grid.count < 1 || !(grid.dt > 0.0)) throw InvalidArgument("invalid time grid");

  double lambda_max = protocol.lambda_initial;
  for (double l : protocol.lambdas) lambda_max = std::max(lambda_max, std::abs(l));
  double h = std::min(grid.dt, 0.25 / std::sqrt(lambda_max));

  constexpr int kMaxHalvings = 24;
  Run previous = run_grid(protocol, grid, h);
  double last_change = std::numeric_limits<double>::infinity();
  for (int halving = 1; halving <= kMaxHalvings; ++halving) {
    h *= 0.5;
    Run current = run_grid(protocol, grid, h);
    double change = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) {
      change = std::max({change, std::abs(current.points[i].b - previous.points[i].b),
                         std::abs(current.points[i].b_dot - previous.points[i].b_dot)});
    }
    if (current.max_residual < tolerance && change < tolerance) {
      auto traj = std::make_shared<NumericTrajectory>();
      traj->protocol = protocol;
      traj->grid = grid;
      traj->h = h;
      traj->max_residual = current.max_residual;
      traj->points = std::move(current.points);

      ModeSolution out;
      out.lambda_i_ = protocol.lambda_initial;
      out.lambda_f_ = protocol.final_lambda();
      out.trajectory_ = std::move(traj);
      return out;
    }
    previous = std::move(current);
    // RK4 gains ~16x per halving; once that stalls, rounding dominates.
    if (halving >= 4 && change > 0.5 * last_change) break;
    last_change = change;
  }
  std::ostringstream msg;
  msg << "Ermakov integration failed: tolerance unreachable (h = " << h
      << ") with residual " << previous.max_residual << " at t = " << previous.worst_time;
  throw NumericalError(msg.str());
}

double ModeSolution::lambda_at(double t) const {
  return trajectory_ ? trajectory_->protocol.lambda_at(t) : lambda_f_;
}

double ModeProtocol::lambda_at(double t) const { return piece_containing(*this, t).at(t); }

std::optional<SuddenCoefficients> ModeSolution::coefficients() const {
  if (trajectory_ || lambda_f_ == 0.0) return std::nullopt;
  return SuddenCoefficients{(lambda_f_ - lambda_i_) / (2.0 * lambda_f_),
                            (lambda_f_ + lambda_i_) / (2.0 * lambda_f_)};
}

namespace {

// b^2 = 1 + (lambda_i - lambda_f) s^2 with s = sin(w t) / w, the same curve
// as n cos(2 w t) + m but without cancellation when lambda_f << lambda_i.
struct Closed {
  double u, du, ddu;
};

Closed evaluate_closed(double lambda_i, double lambda_f, double t) {
  const double w = std::sqrt(lambda_f);
  const double s = w > 0.0 ? std::sin(w * t) / w : t;
  const double c = w > 0.0 ? std::cos(w * t) : 1.0;
  const double d = lambda_i - lambda_f;
  return {1.0 + d * s * s, 2.0 * d * s * c, 2.0 * d * (w > 0.0 ? std::cos(2.0 * w * t) : 1.0)};
}

}  // namespace

ErmakovPoint ModeSolution::at(double t) const {
  if (t < 0.0) throw InvalidArgument("Ermakov solutions are defined for t >= 0");
  if (trajectory_) return trajectory_->at(t);
  const Closed f = evaluate_closed(lambda_i_, lambda_f_, t);
  const double b = std::sqrt(f.u);
  return {b, f.du / (2.0 * b)};
}

double ModeSolution::second_derivative(double t) const {
  if (trajectory_) throw InvalidArgument("analytic second derivative needs a closed form");
  const Closed f = evaluate_closed(lambda_i_, lambda_f_, t);
  const double b = std::sqrt(f.u);
  return f.ddu / (2.0 * b) - f.du * f.du / (4.0 * f.u * b);
}

double ModeSolution::residual(double t) const {
  const ErmakovPoint p = at(t);
  return second_derivative(t) + lambda_f_ * p.b - lambda_i_ / (p.b * p.b * p.b);
}

double ModeSolution::max_invariant_residual() const {
  return trajectory_ ? trajectory_->max_residual : 0.0;
}

double ModeSolution::step() const { return trajectory_ ? trajectory_->h : 0.0; }

double compute_tau(const ModeSolution& mode, double t) {
  if (t < 0.0) throw InvalidArgument("tau is defined for t >= 0");
  if (t == 0.0) return 0.0;
  const double fastest = std::sqrt(std::max({1.0, mode.lambda_initial(), mode.lambda_final()}));
  const double chunk = 0.5 / fastest;
  const auto pieces = static_cast<long>(std::ceil(t / chunk));
  auto integrand = [&](double s) {
    const double b = mode.at(s).b;
    return 1.0 / (b * b);
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (long i = 0; i < pieces; ++i) {
    const double a = t * static_cast<double>(i) / static_cast<double>(pieces);
    const double c = t * static_cast<double>(i + 1) / static_cast<double>(pieces);
    total += gauss_kronrod<double, 31>::integrate(integrand, a, c, 12, 1e-14);
  }
  return total;
}

double sudden_invariant(const ModeSolution& mode, double t) {
  const ErmakovPoint p = mode.at(t);
  const double b2 = p.b * p.b;
  return p.b_dot * p.b_dot + mode.lambda_final() * b2 + mode.lambda_initial() / b2;
}

}  // namespace chainent
