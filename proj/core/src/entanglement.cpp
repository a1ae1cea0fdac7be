#include "chainent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "chainent/error.hpp"
#include "chainent/parallel.hpp"

namespace chainent {

// ---------------------------------------------------------------------------
// Partition

Partition Partition::tracing(int n_sites, std::vector<int> traced_sites) {
  if (n_sites < 2) throw InvalidArgument("partition needs at least 2 sites");
  std::set<int> seen;
  for (int s : traced_sites) {
    if (s < 0 || s >= n_sites) {
      throw InvalidArgument("traced site " + std::to_string(s + 1) + " outside 1.." +
                            std::to_string(n_sites));
    }
    if (!seen.insert(s).second) {
      throw InvalidArgument("traced site " + std::to_string(s + 1) + " listed twice");
    }
  }
  if (seen.empty()) throw InvalidArgument("partition must trace at least one site");
  if (static_cast<int>(seen.size()) == n_sites) {
    throw InvalidArgument("partition must keep at least one site");
  }
  Partition p;
  p.traced.assign(seen.begin(), seen.end());
  for (int s = 0; s < n_sites; ++s) {
    if (!seen.contains(s)) p.kept.push_back(s);
  }
  return p;
}

Partition Partition::second_half(int n_sites) {
  std::vector<int> traced;
  for (int s = n_sites / 2; s < n_sites; ++s) traced.push_back(s);
  return tracing(n_sites, std::move(traced));
}

Partition Partition::complement() const { return {kept, traced}; }

// ---------------------------------------------------------------------------
// Reduction

ReducedState reduce(const GaussianState& state, const Partition& partition) {
  if (partition.n_sites() != state.size()) {
    throw InvalidArgument("partition covers " + std::to_string(partition.n_sites()) +
                          " sites but the state has " + std::to_string(state.size()));
  }
  const auto& a = partition.traced;
  const auto& b = partition.kept;
  const Matrix omega_aa = state.omega(a, a);
  const Matrix omega_ab = state.omega(a, b);
  const Matrix omega_bb = state.omega(b, b);
  const Matrix chirp_ab = state.btilde(a, b);
  const Matrix chirp_bb = state.btilde(b, b);

  Eigen::LLT<Matrix> llt(omega_aa);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("traced block of Omega is singular at t = " + std::to_string(state.t));
  }
  const Matrix x = llt.solve(omega_ab);  // Omega_AA^-1 Omega_AB
  const Matrix y = llt.solve(chirp_ab);  // Omega_AA^-1 Btilde_AB

  const Matrix real_part = omega_ab.transpose() * x;
  const Matrix chirp_part = chirp_ab.transpose() * y;

  ReducedState r;
  r.gamma = omega_bb - 0.5 * real_part + 2.0 * chirp_part;
  r.beta = 0.5 * real_part + 2.0 * chirp_part;
  r.gamma = 0.5 * (r.gamma + r.gamma.transpose()).eval();
  r.beta = 0.5 * (r.beta + r.beta.transpose()).eval();
  r.z = chirp_bb - chirp_ab.transpose() * x;
  r.twist = omega_ab.transpose() * y - chirp_ab.transpose() * x;
  r.twist = 0.5 * (r.twist - r.twist.transpose()).eval();
  r.t = state.t;
  return r;
}

namespace {

constexpr double kNegativeSlack = 1e-8;
constexpr double kTwistThreshold = 1e-12;

double xi_from_beta_tilde(double bt) { return bt / (1.0 + std::sqrt(1.0 - bt * bt)); }

void check_beta_tilde(double bt, double t) {
  if (bt <= -kNegativeSlack || bt >= 1.0 || !std::isfinite(bt)) {
    throw NumericalError("reduced spectrum parameter beta_tilde = " + std::to_string(bt) +
                         " outside [0, 1) at t = " + std::to_string(t));
  }
}

}  // namespace

XiSpectrum xi_spectrum(const ReducedState& reduced) {
  const Eigen::Index m = reduced.gamma.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> gamma_eig(reduced.gamma);
  if (gamma_eig.info() != Eigen::Success || gamma_eig.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("gamma is not positive-definite at t = " + std::to_string(reduced.t));
  }
  // gamma = V^T gamma_D V with V = eigenvectors^T.
  const Matrix& v_t = gamma_eig.eigenvectors();
  const Vector inv_sqrt = gamma_eig.eigenvalues().cwiseSqrt().cwiseInverse();
  Matrix beta_tilde = inv_sqrt.asDiagonal() * (v_t.transpose() * reduced.beta * v_t) *
                      inv_sqrt.asDiagonal();
  beta_tilde = 0.5 * (beta_tilde + beta_tilde.transpose()).eval();

  Matrix twist = Matrix::Zero(m, m);
  if (reduced.twist.size() == m * m) {
    twist = inv_sqrt.asDiagonal() * (v_t.transpose() * reduced.twist * v_t) *
            inv_sqrt.asDiagonal();
  }

  XiSpectrum out;
  out.xi.resize(m);
  out.beta_tilde.resize(m);
  if (twist.cwiseAbs().maxCoeff() <= kTwistThreshold) {
    Eigen::SelfAdjointEigenSolver<Matrix> bt_eig(beta_tilde, Eigen::EigenvaluesOnly);
    for (Eigen::Index j = 0; j < m; ++j) {
      double bt = bt_eig.eigenvalues()(j);
      check_beta_tilde(bt, reduced.t);
      bt = std::max(bt, 0.0);
      out.beta_tilde[j] = bt;
      out.xi[j] = xi_from_beta_tilde(bt);
    }
  } else {
    // In coordinates where gamma = 1 the kernel is
    //   exp[-(r^2 + r'^2)/2 + r^T (beta_tilde + i twist) r']
    // whose covariance is [[S, -S T], [T S, (1 + beta_tilde)/2 - T S T]] with
    // S = (1 - beta_tilde)^-1 / 2. The local phase Z only shears momenta.
    out.twisted = true;
    const Matrix identity = Matrix::Identity(m, m);
    Eigen::LLT<Matrix> gap(identity - beta_tilde);
    if (gap.info() != Eigen::Success) {
      throw NumericalError("gamma - beta is not positive-definite at t = " +
                           std::to_string(reduced.t));
    }
    const Matrix s = 0.5 * gap.solve(identity);
    Matrix sigma(2 * m, 2 * m);
    sigma.topLeftCorner(m, m) = s;
    sigma.topRightCorner(m, m) = -s * twist;
    sigma.bottomLeftCorner(m, m) = twist * s;
    sigma.bottomRightCorner(m, m) = 0.5 * (identity + beta_tilde) - twist * s * twist;
    sigma = 0.5 * (sigma + sigma.transpose()).eval();
    const std::vector<double> nu = symplectic_eigenvalues(sigma);
    for (Eigen::Index j = 0; j < m; ++j) {
      double xi = (2.0 * nu[j] - 1.0) / (2.0 * nu[j] + 1.0);
      double bt = 2.0 * xi / (1.0 + xi * xi);
      check_beta_tilde(bt, reduced.t);
      xi = std::max(xi, 0.0);
      out.xi[j] = xi;
      out.beta_tilde[j] = std::max(bt, 0.0);
    }
  }
  // Descending order, mode by mode.
  std::vector<std::size_t> order(m);
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t p, std::size_t q) { return out.xi[p] > out.xi[q]; });
  XiSpectrum sorted = out;
  for (std::size_t j = 0; j < order.size(); ++j) {
    sorted.xi[j] = out.xi[order[j]];
    sorted.beta_tilde[j] = out.beta_tilde[order[j]];
  }
  return sorted;
}

// ---------------------------------------------------------------------------
// Entropies

namespace {

void check_xi(double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) {
    throw InvalidArgument("xi = " + std::to_string(xi) + " outside [0, 1)");
  }
}

}  // namespace

double von_neumann_entropy(std::span<const double> xi) {
  double s = 0.0;
  for (double x : xi) {
    check_xi(x);
    if (x == 0.0) continue;
    s += -std::log1p(-x) - x / (1.0 - x) * std::log(x);
  }
  return s;
}

double renyi_entropy(std::span<const double> xi, int alpha) {
  if (alpha < 1) throw InvalidArgument("Renyi order must be a positive integer");
  if (alpha == 1) return von_neumann_entropy(xi);
  double s = 0.0;
  for (double x : xi) {
    check_xi(x);
    s += (alpha * std::log1p(-x) - std::log1p(-std::pow(x, alpha))) / (1.0 - alpha);
  }
  return s;
}

double renyi_entropy(const XiSpectrum& spectrum, int alpha) {
  return renyi_entropy(std::span<const double>(spectrum.xi), alpha);
}

double von_neumann_entropy(const XiSpectrum& spectrum) {
  return von_neumann_entropy(std::span<const double>(spectrum.xi));
}

ReducedSpectrum reduced_spectrum(std::span<const double> xi, int n_max) {
  if (n_max < 1) throw InvalidArgument("reduced_spectrum needs n_max >= 1");
  double joint_size = 1.0;
  for (std::size_t j = 0; j < xi.size(); ++j) joint_size *= static_cast<double>(n_max + 1);
  if (joint_size > 1e7) throw InvalidArgument("joint reduced spectrum too large to enumerate");

  ReducedSpectrum out;
  for (double x : xi) {
    check_xi(x);
    std::vector<double> ladder(n_max + 1);
    double p = 1.0 - x;
    for (int n = 0; n <= n_max; ++n) {
      ladder[n] = p;
      p *= x;
    }
    out.per_mode.push_back(std::move(ladder));
  }
  out.joint = {1.0};
  for (const auto& ladder : out.per_mode) {
    std::vector<double> next;
    next.reserve(out.joint.size() * ladder.size());
    for (double a : out.joint) {
      for (double b : ladder) next.push_back(a * b);
    }
    out.joint = std::move(next);
  }
  std::sort(out.joint.begin(), out.joint.end(), std::greater<>());
  out.partial_sum = 0.0;
  for (double p : out.joint) out.partial_sum += p;
  return out;
}

TwoSiteReduction two_site_reduction(double omega_plus0, double omega_minus0,
                                    const ErmakovPoint& plus, const ErmakovPoint& minus) {
  const double w1 = omega_plus0 / (plus.b * plus.b);
  const double w2 = omega_minus0 / (minus.b * minus.b);
  const double r1 = plus.b_dot / plus.b;
  const double r2 = minus.b_dot / minus.b;
  const double sum = w1 + w2;
  const double diff = w1 - w2;
  const double chirp = r1 - r2;
  TwoSiteReduction out;
  out.gamma = 0.5 * sum - (diff * diff - chirp * chirp) / (4.0 * sum);
  out.beta = (diff * diff + chirp * chirp) / (4.0 * sum);
  out.z = 0.25 * (r1 + r2) - diff / sum * 0.25 * (r1 - r2);
  return out;
}

double two_site_xi(double gamma, double beta) {
  return beta / (gamma + std::sqrt(gamma * gamma - beta * beta));
}

// ---------------------------------------------------------------------------
// Pipeline

void ChainQuench::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("quench tolerance must be positive");
  if (kind == Kind::sudden) return;
  if (table.empty()) throw InvalidArgument("general quench needs a parameter table");
  if (table.front().t != 0.0) throw InvalidArgument("quench table must start at t = 0");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& row = table[i];
    if (!std::isfinite(row.t) || !std::isfinite(row.omega) || !std::isfinite(row.k)) {
      throw InvalidArgument("quench table entries must be finite");
    }
    if (row.omega < 0.0 || row.k < 0.0) {
      throw InvalidArgument("quench table needs omega >= 0 and k >= 0");
    }
    if (i > 0 && !(row.t > table[i - 1].t)) {
      throw InvalidArgument("quench table times must be strictly increasing");
    }
  }
}

ModeProtocol ChainQuench::mode_protocol(double lambda_initial, double laplacian_eigenvalue) const {
  ModeProtocol p;
  p.lambda_initial = lambda_initial;
  p.interpolation = interpolation;
  p.times.clear();
  p.lambdas.clear();
  for (const auto& row : table) {
    p.times.push_back(row.t);
    p.lambdas.push_back(row.omega * row.omega + row.k * laplacian_eigenvalue);
  }
  return p;
}

std::vector<ModeSolution> solve_modes(const ChainSpec& spec, const ChainModes& modes,
                                      const ChainQuench& quench, const TimeGrid& grid) {
  spec.validate();
  quench.validate();
  std::vector<ModeSolution> out;
  out.reserve(modes.size());
  for (int j = 0; j < modes.size(); ++j) {
    if (quench.kind == ChainQuench::Kind::sudden) {
      out.push_back(solve_sudden(modes.lambda_pre(j), modes.lambda_post(j)));
      continue;
    }
    // Degenerate modes share a protocol; integrate each distinct one once.
    bool reused = false;
    for (int i = 0; i < j; ++i) {
      if (modes.lambda_pre(i) == modes.lambda_pre(j) && modes.laplacian(i) == modes.laplacian(j)) {
        out.push_back(out[i]);
        reused = true;
        break;
      }
    }
    if (!reused) {
      out.push_back(integrate_general(quench.mode_protocol(modes.lambda_pre(j), modes.laplacian(j)),
                                      grid, quench.tolerance));
    }
  }
  return out;
}

const std::vector<double>& EntropySeries::entropy(int alpha) const {
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    if (alphas[a] == alpha) return values[a];
  }
  throw InvalidArgument("entropy series has no Renyi order " + std::to_string(alpha));
}

namespace {

std::vector<int> normalize_alphas(std::vector<int> alphas) {
  if (alphas.empty()) alphas = {1};
  for (int a : alphas) {
    if (a < 1) throw InvalidArgument("Renyi orders must be positive integers");
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  return alphas;
}

}  // namespace

EntropySeries entropy_series(const ChainSpec& spec, const ChainModes& modes,
                             const ChainQuench& quench, const Partition& partition,
                             const TimeGrid& grid, std::vector<int> alphas,
                             const PipelineOptions& options) {
  if (partition.n_sites() != spec.n_sites) {
    throw InvalidArgument("partition does not match the chain size");
  }
  const std::vector<ModeSolution> solutions = solve_modes(spec, modes, quench, grid);

  EntropySeries series;
  series.grid = grid;
  series.alphas = normalize_alphas(std::move(alphas));
  series.xi.resize(grid.count);
  series.values.assign(series.alphas.size(), std::vector<double>(grid.count));

  parallel_for(grid.count, options.threads, [&](std::size_t i) {
    const double t = grid.at(i);
    std::vector<ErmakovPoint> points(solutions.size());
    for (std::size_t j = 0; j < solutions.size(); ++j) points[j] = solutions[j].at(t);
    const GaussianState state = assemble_state(modes.u, modes.lambda_pre, points, t);
    const XiSpectrum spectrum = xi_spectrum(reduce(state, partition));
    for (std::size_t a = 0; a < series.alphas.size(); ++a) {
      series.values[a][i] = renyi_entropy(spectrum, series.alphas[a]);
    }
    series.xi[i] = spectrum.xi;
  });
  return series;
}

EntropySeries entropy_series(const ChainSpec& spec, const ChainQuench& quench,
                             const Partition& partition, const TimeGrid& grid,
                             std::vector<int> alphas, const PipelineOptions& options) {
  return entropy_series(spec, chain_modes(spec), quench, partition, grid, std::move(alphas),
                        options);
}

}  // namespace chainent
