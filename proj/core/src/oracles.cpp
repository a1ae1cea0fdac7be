#include "chainent/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "chainent/error.hpp"
#include "chainent/parallel.hpp"

namespace chainent {

Matrix symplectic_form(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

bool is_symplectic(const Matrix& s, double tolerance) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return false;
  const Matrix j = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * j * s.transpose() - j).cwiseAbs().maxCoeff() <= tolerance;
}

SymplecticPropagator::SymplecticPropagator(const Matrix& k_post) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k_post);
  if (eig.info() != Eigen::Success) throw NumericalError("post-quench eigensolver failed");
  u_ = eig.eigenvectors().transpose();
  lambda_ = eig.eigenvalues();
  const double scale = std::max(1.0, lambda_.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < lambda_.size(); ++j) {
    if (lambda_(j) < -1e-12 * scale) {
      throw InvalidArgument("post-quench K has a negative eigenvalue (unbounded Hamiltonian)");
    }
    if (lambda_(j) < 1e-14 * scale) lambda_(j) = 0.0;
  }
}

Matrix SymplecticPropagator::at(double t) const {
  const int n = size();
  Vector c(n), s_over_w(n), minus_ws(n);
  for (int j = 0; j < n; ++j) {
    const double w = std::sqrt(lambda_(j));
    if (w == 0.0) {
      c(j) = 1.0;
      s_over_w(j) = t;
      minus_ws(j) = 0.0;
    } else {
      c(j) = std::cos(w * t);
      s_over_w(j) = std::sin(w * t) / w;
      minus_ws(j) = -w * std::sin(w * t);
    }
  }
  const Matrix ut = u_.transpose();
  Matrix s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = ut * c.asDiagonal() * u_;
  s.topRightCorner(n, n) = ut * s_over_w.asDiagonal() * u_;
  s.bottomLeftCorner(n, n) = ut * minus_ws.asDiagonal() * u_;
  s.bottomRightCorner(n, n) = s.topLeftCorner(n, n);
  return s;
}

Matrix initial_covariance(const Matrix& k_pre) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k_pre);
  if (eig.info() != Eigen::Success) throw NumericalError("pre-quench eigensolver failed");
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidArgument("pre-quench K must be positive-definite");
  }
  const Matrix& v = eig.eigenvectors();
  const Vector root = eig.eigenvalues().cwiseSqrt();
  const auto n = k_pre.rows();
  Matrix sigma = Matrix::Zero(2 * n, 2 * n);
  sigma.topLeftCorner(n, n) = 0.5 * v * root.cwiseInverse().asDiagonal() * v.transpose();
  sigma.bottomRightCorner(n, n) = 0.5 * v * root.asDiagonal() * v.transpose();
  return sigma;
}

Matrix propagate_covariance(const ChainSpec& spec, double t) {
  spec.validate();
  const Matrix sigma0 = initial_covariance(build_coupling_matrix(spec, Phase::pre).k);
  const Matrix s = SymplecticPropagator(build_coupling_matrix(spec, Phase::post).k).at(t);
  const Matrix sigma = s * sigma0 * s.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

Matrix restrict_covariance(const Matrix& sigma, const std::vector<int>& sites) {
  const auto n = static_cast<int>(sigma.rows() / 2);
  std::vector<int> rows;
  rows.reserve(2 * sites.size());
  for (int s : sites) rows.push_back(s);
  for (int s : sites) rows.push_back(s + n);
  return sigma(rows, rows);
}

std::vector<double> oracle_symplectic_eigenvalues(const Matrix& sigma) {
  const auto dim = sigma.rows();
  if (dim % 2 != 0 || sigma.cols() != dim) {
    throw InvalidArgument("covariance matrix must be square with even dimension");
  }
  const int n = static_cast<int>(dim / 2);
  Eigen::EigenSolver<Matrix> solver(symplectic_form(n) * sigma, false);
  if (solver.info() != Eigen::Success) throw NumericalError("oracle eigensolver failed");
  std::vector<double> moduli;
  for (Eigen::Index k = 0; k < dim; ++k) moduli.push_back(std::abs(solver.eigenvalues()(k).imag()));
  std::sort(moduli.begin(), moduli.end());
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) nu[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  return nu;
}

double xi_from_nu(double nu) {
  if (!(nu >= 0.5 - 1e-8)) {
    throw NumericalError("symplectic eigenvalue " + std::to_string(nu) + " below 1/2");
  }
  nu = std::max(nu, 0.5);
  return (2.0 * nu - 1.0) / (2.0 * nu + 1.0);
}

namespace {

double nu_entropy(double nu) {
  const double hi = nu + 0.5;
  const double lo = nu - 0.5;
  return hi * std::log(hi) - (lo > 0.0 ? lo * std::log(lo) : 0.0);
}

}  // namespace

OracleEntropies entropies_from_covariance(const Matrix& sigma, const Partition& partition,
                                          const std::vector<int>& alphas) {
  OracleEntropies out;
  out.nu = oracle_symplectic_eigenvalues(restrict_covariance(sigma, partition.kept));
  std::vector<double> xi;
  for (double nu : out.nu) xi.push_back(xi_from_nu(nu));
  for (int alpha : alphas) {
    if (alpha == 1) {
      double s = 0.0;
      for (double nu : out.nu) s += nu_entropy(std::max(nu, 0.5));
      out.values.push_back(s);
    } else {
      out.values.push_back(renyi_entropy(xi, alpha));
    }
  }
  return out;
}

OracleEntropies covariance_entropy(const ChainSpec& spec, const Partition& partition, double t,
                                   const std::vector<int>& alphas) {
  return entropies_from_covariance(propagate_covariance(spec, t), partition, alphas);
}

// ---------------------------------------------------------------------------
// General protocols

namespace {

struct CouplingPiece {
  double origin, omega2, k, omega2_slope, k_slope;
};

CouplingPiece coupling_piece(const ChainQuench& q, double t) {
  const auto& table = q.table;
  auto it = std::upper_bound(table.begin(), table.end(), t,
                             [](double v, const ParameterSample& s) { return v < s.t; });
  const std::size_t k = it == table.begin() ? 0 : static_cast<std::size_t>(it - table.begin()) - 1;
  const ParameterSample& a = table[k];
  CouplingPiece p{a.t, a.omega * a.omega, a.k, 0.0, 0.0};
  if (q.interpolation == Interpolation::linear && k + 1 < table.size()) {
    const ParameterSample& b = table[k + 1];
    p.omega2_slope = (b.omega * b.omega - p.omega2) / (b.t - a.t);
    p.k_slope = (b.k - a.k) / (b.t - a.t);
  }
  return p;
}

class CovarianceFlow {
 public:
  CovarianceFlow(const ChainQuench& q, const Matrix& laplacian) : q_(q), laplacian_(laplacian) {}

  Matrix rhs(const CouplingPiece& piece, double t, const Matrix& sigma) const {
    const auto n = laplacian_.rows();
    const double dt = t - piece.origin;
    const Matrix k = (piece.omega2 + piece.omega2_slope * dt) * Matrix::Identity(n, n) +
                     (piece.k + piece.k_slope * dt) * laplacian_;
    Matrix a = Matrix::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n) = Matrix::Identity(n, n);
    a.bottomLeftCorner(n, n) = -k;
    const Matrix as = a * sigma;
    return as + as.transpose();
  }

  void advance(Matrix& sigma, double t0, double t1, double h) const {
    double a = t0;
    while (a < t1) {
      auto next = std::upper_bound(q_.table.begin(), q_.table.end(), a,
                                   [](double v, const ParameterSample& s) { return v < s.t; });
      const double c = next == q_.table.end() ? t1 : std::min(t1, next->t);
      const CouplingPiece piece = coupling_piece(q_, a);
      const auto steps = std::max(1L, static_cast<long>(std::ceil((c - a) / h - 1e-12)));
      const double dt = (c - a) / static_cast<double>(steps);
      for (long i = 0; i < steps; ++i) {
        const double t = a + static_cast<double>(i) * dt;
        const Matrix k1 = rhs(piece, t, sigma);
        const Matrix k2 = rhs(piece, t + 0.5 * dt, sigma + 0.5 * dt * k1);
        const Matrix k3 = rhs(piece, t + 0.5 * dt, sigma + 0.5 * dt * k2);
        const Matrix k4 = rhs(piece, t + dt, sigma + dt * k3);
        sigma += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      a = c;
    }
  }

 private:
  const ChainQuench& q_;
  const Matrix& laplacian_;
};

}  // namespace

std::vector<Matrix> integrate_covariance(const ChainSpec& spec, const ChainQuench& quench,
                                         const TimeGrid& grid) {
  spec.validate();
  quench.validate();
  if (quench.kind != ChainQuench::Kind::general) {
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < grid.count; ++i) out.push_back(propagate_covariance(spec, grid.at(i)));
    return out;
  }
  const Matrix laplacian = coupling_matrix(spec.n_sites, spec.boundary, 0.0, 1.0);
  const Matrix sigma0 = initial_covariance(build_coupling_matrix(spec, Phase::pre).k);
  const CovarianceFlow flow(quench, laplacian);

  double fastest = spec.omega_i * spec.omega_i + 4.0 * spec.k_i;
  for (const auto& row : quench.table) {
    fastest = std::max(fastest, row.omega * row.omega + 4.0 * row.k);
  }
  double h = std::min(grid.dt, 0.25 / std::sqrt(std::max(fastest, 1e-12)));

  auto run = [&](double step) {
    std::vector<Matrix> out{sigma0};
    Matrix sigma = sigma0;
    for (std::size_t i = 1; i < grid.count; ++i) {
      flow.advance(sigma, grid.at(i - 1), grid.at(i), step);
      sigma = 0.5 * (sigma + sigma.transpose()).eval();
      out.push_back(sigma);
    }
    return out;
  };

  std::vector<Matrix> previous = run(h);
  constexpr int kMaxHalvings = 20;
  double change = 0.0;
  double last_change = HUGE_VAL;
  double worst = 0.0;
  for (int halving = 1; halving <= kMaxHalvings; ++halving) {
    h *= 0.5;
    std::vector<Matrix> current = run(h);
    change = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double scale = std::max(1.0, current[i].cwiseAbs().maxCoeff());
      const double d = (current[i] - previous[i]).cwiseAbs().maxCoeff() / scale;
      if (!(d <= change)) {
        change = std::isfinite(d) ? d : HUGE_VAL;
        worst = grid.at(i);
      }
    }
    if (change < quench.tolerance) return current;
    previous = std::move(current);
    if (halving >= 4 && change > 0.5 * last_change) break;  // rounding floor
    last_change = change;
  }
  std::ostringstream msg;
  msg << "covariance integration failed: tolerance unreachable (h = " << h << ") with change "
      << change << " at t = " << worst;
  throw NumericalError(msg.str());
}

EntropySeries covariance_entropy_series(const ChainSpec& spec, const ChainQuench& quench,
                                        const Partition& partition, const TimeGrid& grid,
                                        std::vector<int> alphas, const PipelineOptions& options) {
  spec.validate();
  quench.validate();
  if (partition.n_sites() != spec.n_sites) {
    throw InvalidArgument("partition does not match the chain size");
  }
  if (alphas.empty()) alphas = {1};
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  for (int a : alphas) {
    if (a < 1) throw InvalidArgument("Renyi orders must be positive integers");
  }

  EntropySeries series;
  series.grid = grid;
  series.alphas = alphas;
  series.xi.resize(grid.count);
  series.values.assign(alphas.size(), std::vector<double>(grid.count));

  auto store = [&](std::size_t i, const Matrix& sigma) {
    const OracleEntropies e = entropies_from_covariance(sigma, partition, alphas);
    std::vector<double> xi;
    for (double nu : e.nu) xi.push_back(xi_from_nu(nu));
    std::sort(xi.begin(), xi.end(), std::greater<>());
    series.xi[i] = std::move(xi);
    for (std::size_t a = 0; a < alphas.size(); ++a) series.values[a][i] = e.values[a];
  };

  if (quench.kind == ChainQuench::Kind::sudden) {
    const Matrix sigma0 = initial_covariance(build_coupling_matrix(spec, Phase::pre).k);
    const SymplecticPropagator propagator(build_coupling_matrix(spec, Phase::post).k);
    parallel_for(grid.count, options.threads, [&](std::size_t i) {
      const Matrix s = propagator.at(grid.at(i));
      const Matrix sigma = s * sigma0 * s.transpose();
      store(i, 0.5 * (sigma + sigma.transpose()));
    });
  } else {
    const std::vector<Matrix> sigmas = integrate_covariance(spec, quench, grid);
    parallel_for(grid.count, options.threads, [&](std::size_t i) { store(i, sigmas[i]); });
  }
  return series;
}

// ---------------------------------------------------------------------------
// Kernel oracle

KernelGrid KernelGrid::defaults(double gamma, double beta) {
  if (!(gamma > beta)) throw InvalidArgument("kernel needs gamma > beta");
  return {8.0 / std::sqrt(gamma - beta), 801};
}

std::vector<double> kernel_spectrum(double gamma, double beta, double z, const KernelGrid& grid,
                                    int count, bool with_phase) {
  if (!(gamma > beta) || !(gamma > 0.0)) throw InvalidArgument("kernel needs gamma > |beta|");
  if (grid.points < 3 || !(grid.extent > 0.0)) throw InvalidArgument("kernel grid too small");
  if (count < 1 || count > grid.points) throw InvalidArgument("invalid eigenvalue count");

  const int m = grid.points;
  const double h = grid.spacing();
  const double norm = std::sqrt((gamma - beta) / std::numbers::pi);
  Vector x(m);
  for (int a = 0; a < m; ++a) x(a) = -grid.extent + h * a;

  Eigen::MatrixXcd kernel(m, m);
  double trace = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double mag = norm * h *
                         std::exp(-0.5 * gamma * (x(a) * x(a) + x(b) * x(b)) + beta * x(a) * x(b));
      const double phase = with_phase ? z * (x(a) * x(a) - x(b) * x(b)) : 0.0;
      kernel(a, b) = std::polar(mag, phase);
    }
    trace += kernel(a, a).real();
  }
  if (std::abs(trace - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg << "kernel grid inadequate: discrete trace " << trace
        << " deviates from 1; increase the extent L or the point count M";
    throw NumericalError(msg.str());
  }
  kernel = 0.5 * (kernel + kernel.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(kernel, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("kernel eigensolver failed");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(eig.eigenvalues()(m - 1 - k));
  return out;
}

}  // namespace chainent
