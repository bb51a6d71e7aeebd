#include "thermosdp/thermal.hpp"

#include <cmath>
#include <limits>

#include "thermosdp/error.hpp"

namespace thermosdp {

namespace {

void check_temperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw DomainError("temperature must be positive and finite");
  }
}

Density build_state(const SpectralHermitian& g, const RealVector& populations) {
  return Density(SpectralHermitian::from_eigen(g.eigenvectors(), populations));
}

}  // namespace

double logarithmic_mean_from_logs(double log_a, double log_b) {
  if (log_a < log_b) std::swap(log_a, log_b);
  const double gap = log_a - log_b;
  const double a = std::exp(log_a);
  if (gap <= 1e-12 * std::max(1.0, std::abs(log_a))) {
    return 0.5 * (a + std::exp(log_b));
  }
  // a (1 - b/a) / ln(a/b), stable even when b underflows.
  return a * (-std::expm1(-gap)) / gap;
}

SpectralHermitian effective_hamiltonian(const EnergyProblem& problem, const RealVector& mu) {
  if (mu.size() != problem.num_charges()) {
    throw DomainError("chemical potential has length " + std::to_string(mu.size()) +
                      ", expected " + std::to_string(problem.num_charges()));
  }
  if (!mu.allFinite()) throw DomainError("chemical potential must be finite");
  if (problem.num_charges() == 0) return problem.hamiltonian().matrix;
  Matrix g = problem.hamiltonian().matrix.entries();
  for (int i = 0; i < problem.num_charges(); ++i) {
    if (mu[i] != 0.0) g -= mu[i] * problem.charge(i).matrix.entries();
  }
  return SpectralHermitian(g);
}

ThermalModel::ThermalModel(const EnergyProblem& problem, RealVector mu, double temperature)
    : problem_(&problem),
      mu_(std::move(mu)),
      temperature_(temperature),
      g_(thermosdp::effective_hamiltonian(problem, mu_)),
      state_(Density::maximally_mixed(1)) {
  check_temperature(temperature);
  const RealVector& energies = g_.eigenvalues();
  const double ground = energies[0];
  // Shifted log-sum-exp: every exponent is <= 0.
  RealVector shifted = -(energies.array() - ground) / temperature;
  const double log_sum = std::log(shifted.array().exp().sum());
  log_partition_ = -ground / temperature + log_sum;
  if (!std::isfinite(log_partition_)) throw NumericError("log partition function is not finite");
  log_populations_ = shifted.array() - log_sum;
  populations_ = log_populations_.array().exp();
  populations_ /= populations_.sum();
  state_ = build_state(g_, populations_);
  charge_means_.resize(problem.num_charges());
  for (int i = 0; i < problem.num_charges(); ++i) {
    charge_means_[i] = expectation(problem.charge(i).matrix);
  }
}

double ThermalModel::expectation(const SpectralHermitian& obs) const {
  return thermosdp::expectation(state_, obs);
}

double ThermalModel::dual_objective() const {
  return mu_.dot(problem_->targets()) - temperature_ * log_partition_;
}

RealVector ThermalModel::gradient() const { return problem_->targets() - charge_means_; }

Matrix ThermalModel::to_eigenbasis(const Matrix& a) const {
  const Matrix& v = basis();
  return v.adjoint() * a * v;
}

RealMatrix ThermalModel::kubo_mori() const {
  const int c = problem_->num_charges();
  const Eigen::Index d = problem_->dim();
  RealMatrix log_mean(d, d);
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index n = 0; n <= m; ++n)
      log_mean(m, n) = log_mean(n, m) =
          logarithmic_mean_from_logs(log_populations_[m], log_populations_[n]);

  std::vector<Matrix> rotated;
  rotated.reserve(static_cast<std::size_t>(c));
  for (int i = 0; i < c; ++i) rotated.push_back(to_eigenbasis(problem_->charge(i).matrix.entries()));

  RealMatrix km(c, c);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j <= i; ++j) {
      // sum_mn L_mn (Q_i)_mn (Q_j)_nm with (Q_j)_nm = conj((Q_j)_mn)
      const double overlap =
          (log_mean.cast<Complex>().array() * rotated[i].array() * rotated[j].array().conjugate())
              .sum()
              .real();
      km(i, j) = km(j, i) = (overlap - charge_means_[i] * charge_means_[j]) / temperature_;
    }
  }
  return km;
}

double ThermalModel::entropy() const {
  double s = 0.0;
  for (Eigen::Index k = 0; k < populations_.size(); ++k) {
    if (populations_[k] > 0.0) s -= populations_[k] * log_populations_[k];
  }
  return s;
}

double ThermalModel::energy_estimate() const {
  return mu_.dot(problem_->targets()) + expectation(problem_->hamiltonian().matrix) -
         mu_.dot(charge_means_);
}

double log_partition(const EnergyProblem& problem, const RealVector& mu, double temperature) {
  return ThermalModel(problem, mu, temperature).log_partition();
}

Density thermal_state(const EnergyProblem& problem, const RealVector& mu, double temperature) {
  return ThermalModel(problem, mu, temperature).state();
}

double dual_objective(const EnergyProblem& problem, const RealVector& mu, double temperature) {
  return ThermalModel(problem, mu, temperature).dual_objective();
}

RealVector exact_gradient(const EnergyProblem& problem, const RealVector& mu, double temperature) {
  return ThermalModel(problem, mu, temperature).gradient();
}

RealMatrix kubo_mori(const EnergyProblem& problem, const RealVector& mu, double temperature) {
  return ThermalModel(problem, mu, temperature).kubo_mori();
}

RealMatrix hessian(const EnergyProblem& problem, const RealVector& mu, double temperature) {
  return ThermalModel(problem, mu, temperature).hessian();
}

double entropy(const Density& state) {
  double s = 0.0;
  for (double p : state.matrix().eigenvalues()) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double relative_entropy(const Density& omega, const Density& tau) {
  if (omega.dim() != tau.dim()) throw DomainError("dimension mismatch in relative entropy");
  constexpr double kZero = 1e-14;
  const RealVector& w = omega.matrix().eigenvalues();
  const RealVector& t = tau.matrix().eigenvalues();
  // overlap(i, j) = |<w_i|t_j>|^2
  const RealMatrix overlap =
      (omega.matrix().eigenvectors().adjoint() * tau.matrix().eigenvectors()).cwiseAbs2();
  double value = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] <= kZero) continue;
    value += w[i] * std::log(w[i]);
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double weight = w[i] * overlap(i, j);
      if (weight <= kZero * kZero) continue;
      if (t[j] <= kZero) return std::numeric_limits<double>::infinity();
      value -= weight * std::log(t[j]);
    }
  }
  return std::max(value, 0.0);
}

double free_energy_primal(const EnergyProblem& problem, const Density& state, double temperature) {
  check_temperature(temperature);
  return expectation(state, problem.hamiltonian().matrix) - temperature * entropy(state);
}

}  // namespace thermosdp
