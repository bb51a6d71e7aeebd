#include "thermosdp/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "thermosdp/error.hpp"

namespace thermosdp::oracle {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

RealVector real_diagonal(const SpectralHermitian& m, const char* name) {
  const Matrix& a = m.entries();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  Matrix off = a;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError(std::string(name) + " is not diagonal in the computational basis");
  }
  return a.diagonal().real();
}

// Calls visit(subset) for every subset of {0..n-1} of size k.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Vertex enumeration for min cost.x s.t. rows x = rhs, x >= 0.
LpResult enumerate_vertices(const RealVector& cost, const RealMatrix& rows, const RealVector& rhs) {
  const int n = static_cast<int>(cost.size());
  const int m = static_cast<int>(rows.rows());
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  LpResult best;
  best.value = kInfinity;
  for (int k = 1; k <= std::min(m, n); ++k) {
    for_each_subset(n, k, [&](const std::vector<int>& support) {
      RealMatrix sub(m, k);
      for (int j = 0; j < k; ++j) sub.col(j) = rows.col(support[static_cast<std::size_t>(j)]);
      const Eigen::ColPivHouseholderQR<RealMatrix> qr(sub);
      if (qr.rank() < k) return;
      const RealVector x = qr.solve(rhs);
      if ((sub * x - rhs).norm() > 1e-9 * scale) return;
      if (x.minCoeff() < -1e-12) return;
      double value = 0.0;
      for (int j = 0; j < k; ++j) value += cost[support[static_cast<std::size_t>(j)]] * x[j];
      if (value < best.value) {
        best.value = value;
        best.feasible = true;
        best.weights = RealVector::Zero(n);
        for (int j = 0; j < k; ++j) best.weights[support[static_cast<std::size_t>(j)]] = std::max(0.0, x[j]);
      }
    });
  }
  if (!best.feasible) best.value = kInfinity;
  return best;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Grid search followed by golden-section refinement on the bracketing cell.
double maximize_line(const std::function<double(double)>& f, const DualScanOptions& o) {
  const double step = 2.0 * o.bound / (o.grid - 1);
  int best = 0;
  double best_value = -kInfinity;
  for (int k = 0; k < o.grid; ++k) {
    const double value = f(-o.bound + step * k);
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  const double lo = -o.bound + step * std::max(0, best - 1);
  const double hi = -o.bound + step * std::min(o.grid - 1, best + 1);
  return golden_max(f, lo, hi, o.tolerance);
}

}  // namespace

RealVector finite_diff_gradient(const EnergyProblem& problem, const RealVector& mu,
                                double temperature, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  RealVector g(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(mu[i]));
    RealVector up = mu, down = mu;
    up[i] += step;
    down[i] -= step;
    g[i] = (dual_objective(problem, up, temperature) - dual_objective(problem, down, temperature)) /
           (2.0 * step);
  }
  return g;
}

RealMatrix finite_diff_hessian(const EnergyProblem& problem, const RealVector& mu,
                               double temperature, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const Eigen::Index c = mu.size();
  RealMatrix out(c, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    const double step = h * std::max(1.0, std::abs(mu[j]));
    RealVector up = mu, down = mu;
    up[j] += step;
    down[j] -= step;
    out.col(j) = (exact_gradient(problem, up, temperature) -
                  exact_gradient(problem, down, temperature)) /
                 (2.0 * step);
  }
  return out;
}

LpResult lp_diagonal_energy(const EnergyProblem& problem) {
  const int d = static_cast<int>(problem.dim());
  const int c = problem.num_charges();
  const RealVector energy = real_diagonal(problem.hamiltonian().matrix, "Hamiltonian");
  int slack = 0;
  for (auto s : problem.senses())
    if (s == ConstraintSense::ge) ++slack;

  // Columns: d populations, then one surplus variable per ">=" row.
  RealMatrix rows = RealMatrix::Zero(c + 1, d + slack);
  RealVector rhs(c + 1);
  int next_slack = d;
  for (int i = 0; i < c; ++i) {
    rows.row(i).head(d) = real_diagonal(problem.charge(i).matrix, "charge").transpose();
    rhs[i] = problem.targets()[i];
    if (problem.senses()[static_cast<std::size_t>(i)] == ConstraintSense::ge) {
      rows(i, next_slack++) = -1.0;
    }
  }
  rows.row(c).head(d).setOnes();
  rhs[c] = 1.0;
  RealVector cost = RealVector::Zero(d + slack);
  cost.head(d) = energy;

  LpResult result = enumerate_vertices(cost, rows, rhs);
  if (result.feasible) result.weights = RealVector(result.weights.head(d));
  return result;
}

LpResult lp_standard_form(const RealVector& cost, const RealMatrix& constraints,
                          const RealVector& bounds, const std::vector<ConstraintSense>& senses) {
  const int n = static_cast<int>(cost.size());
  const int m = static_cast<int>(constraints.rows());
  if (constraints.cols() != n || bounds.size() != m) throw DomainError("LP dimensions disagree");
  int slack = 0;
  for (auto s : senses)
    if (s == ConstraintSense::ge) ++slack;
  RealMatrix rows = RealMatrix::Zero(m, n + slack);
  rows.leftCols(n) = constraints;
  int next = n;
  for (int i = 0; i < m && i < static_cast<int>(senses.size()); ++i) {
    if (senses[static_cast<std::size_t>(i)] == ConstraintSense::ge) rows(i, next++) = -1.0;
  }
  RealVector full_cost = RealVector::Zero(n + slack);
  full_cost.head(n) = cost;
  LpResult result = enumerate_vertices(full_cost, rows, bounds);
  if (!result.feasible) return result;
  result.weights = RealVector(result.weights.head(n));

  // Unbounded iff some normalized recession direction has negative cost.
  RealMatrix ray_rows = RealMatrix::Zero(m + 1, n + slack);
  ray_rows.topRows(m) = rows;
  ray_rows.row(m).setOnes();
  RealVector ray_rhs = RealVector::Zero(m + 1);
  ray_rhs[m] = 1.0;
  const LpResult ray = enumerate_vertices(full_cost, ray_rows, ray_rhs);
  if (ray.feasible && ray.value < -1e-12) {
    result.value = -kInfinity;
    result.weights = RealVector();
  }
  return result;
}

LpResult bloch_energy(const BlochObservable& hamiltonian,
                      const std::vector<BlochObservable>& charges, const RealVector& targets) {
  if (targets.size() != static_cast<Eigen::Index>(charges.size())) {
    throw DomainError("expected one target per charge");
  }
  const Eigen::Vector3d h(hamiltonian.vector[0], hamiltonian.vector[1], hamiltonian.vector[2]);
  LpResult out;
  const auto k = static_cast<Eigen::Index>(charges.size());
  if (k == 0) {
    out.feasible = true;
    out.value = hamiltonian.identity - h.norm();
    return out;
  }
  Eigen::MatrixXd a(k, 3);
  Eigen::VectorXd b(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& v = charges[static_cast<std::size_t>(i)].vector;
    a.row(i) << v[0], v[1], v[2];
    b[i] = targets[i] - charges[static_cast<std::size_t>(i)].identity;
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::Vector3d center = cod.solve(b);
  if ((a * center - b).norm() > 1e-10 * std::max(1.0, b.norm())) {
    out.value = kInfinity;
    return out;
  }
  const double center_norm2 = center.squaredNorm();
  if (center_norm2 > 1.0 + 1e-12) {
    out.value = kInfinity;
    return out;
  }
  const double disk_radius = std::sqrt(std::max(0.0, 1.0 - center_norm2));
  // Component of h along the null space of the constraint rows.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::Index rank = cod.rank();
  const Eigen::MatrixXd null = svd.matrixV().rightCols(3 - rank);
  out.feasible = true;
  out.value = hamiltonian.identity + h.dot(center) - disk_radius * (null.transpose() * h).norm();
  return out;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  std::vector<double> nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p_prev = 1.0, p = x;
      for (int k = 2; k <= n; ++k) {
        const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
      }
      if (n == 1) p_prev = 1.0;
      derivative = n * (x * p - p_prev) / (x * x - 1.0);
      const double dx = p / derivative;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    // Map [-1, 1] to [0, 1].
    nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
    weights[static_cast<std::size_t>(i)] = 0.5 * w;
    weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
  return {nodes, weights};
}

RealMatrix km_quadrature(const EnergyProblem& problem, const RealVector& mu, double temperature,
                         int nodes) {
  if (nodes < 16) throw DomainError("quadrature needs at least 16 nodes");
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  // Populations in log space from a fresh eigendecomposition of G, so that
  // rho^s keeps populations far below machine epsilon.
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(effective_hamiltonian(problem, mu).entries());
  const RealVector shifted = -(eig.eigenvalues().array() - eig.eigenvalues()[0]) / temperature;
  const double log_norm = std::log(shifted.array().exp().sum());
  const RealVector log_p = shifted.array() - log_norm;
  const RealVector p = log_p.array().exp();
  const Matrix& v = eig.eigenvectors();
  const int c = problem.num_charges();
  std::vector<Matrix> rotated;
  RealVector means(c);
  for (int i = 0; i < c; ++i) {
    rotated.push_back(v.adjoint() * problem.charge(i).matrix.entries() * v);
    means[i] = (rotated.back().diagonal().real().array() * p.array()).sum();
  }

  auto integrate = [&](int n) {
    const auto [s, w] = gauss_legendre(n);
    RealMatrix total = RealMatrix::Zero(c, c);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const RealVector left = ((1.0 - s[k]) * log_p.array()).exp();
      const RealVector right = (s[k] * log_p.array()).exp();
      for (int i = 0; i < c; ++i) {
        // Tr[rho^{1-s} Q_i rho^s Q_j] in the eigenbasis of rho.
        const Matrix weighted = left.cast<Complex>().asDiagonal() * rotated[static_cast<std::size_t>(i)] *
                                right.cast<Complex>().asDiagonal();
        for (int j = 0; j < c; ++j) {
          total(i, j) += w[k] * (weighted.cwiseProduct(rotated[static_cast<std::size_t>(j)].transpose()))
                                    .sum()
                                    .real();
        }
      }
    }
    return RealMatrix((total - means * means.transpose()) / temperature);
  };

  RealMatrix previous = integrate(nodes);
  for (int n = 2 * nodes; n <= 16384; n *= 2) {
    RealMatrix next = integrate(n);
    const double change = (next - previous).cwiseAbs().maxCoeff();
    previous = std::move(next);
    if (change < 1e-10) break;
  }
  return previous;
}

DualScanResult dual_scan(const EnergyProblem& problem, double temperature,
                         const DualScanOptions& options) {
  const int c = problem.num_charges();
  if (c > 2) throw DomainError("dual scan supports at most two charges");
  if (!(options.bound > 0.0) || options.grid < 3) throw DomainError("invalid scan options");
  auto f = [&](const RealVector& mu) { return dual_objective(problem, mu, temperature); };
  DualScanResult out;
  if (c == 0) {
    out.mu = RealVector(0);
  } else if (c == 1) {
    const double x = maximize_line([&](double t) { return f(RealVector::Constant(1, t)); }, options);
    out.mu = RealVector::Constant(1, x);
  } else {
    auto inner = [&](double first) {
      return maximize_line([&](double t) { return f(RealVector{{first, t}}); }, options);
    };
    DualScanOptions outer_options = options;
    outer_options.grid = std::min(options.grid, 81);
    const double first = maximize_line(
        [&](double t) { return f(RealVector{{t, inner(t)}}); }, outer_options);
    out.mu = RealVector{{first, inner(first)}};
  }
  out.objective = f(out.mu);
  return out;
}

}  // namespace thermosdp::oracle
