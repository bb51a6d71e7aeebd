#pragma once

#include "thermosdp/problem.hpp"
#include "thermosdp/spectral.hpp"

namespace thermosdp {

/// Logarithmic mean (a - b) / (ln a - ln b) given ln a and ln b, with L(a, a) = a.
double logarithmic_mean_from_logs(double log_a, double log_b);

/// Thermal quantities of G = H - mu.Q at temperature T.
///
/// Everything is derived from one eigendecomposition of G, done at
/// construction; the model is immutable afterwards. The problem must outlive
/// the model.
class ThermalModel {
 public:
  ThermalModel(const EnergyProblem& problem, RealVector mu, double temperature);

  const EnergyProblem& problem() const { return *problem_; }
  const RealVector& mu() const { return mu_; }
  double temperature() const { return temperature_; }

  const SpectralHermitian& effective_hamiltonian() const { return g_; }
  /// Eigenvalues of G, ascending.
  const RealVector& energies() const { return g_.eigenvalues(); }
  /// Columns are eigenvectors of G (and of rho).
  const Matrix& basis() const { return g_.eigenvectors(); }
  /// Populations of rho in the eigenbasis of G.
  const RealVector& populations() const { return populations_; }
  const RealVector& log_populations() const { return log_populations_; }

  double log_partition() const { return log_partition_; }
  const Density& state() const { return state_; }

  double expectation(const SpectralHermitian& obs) const;
  /// (<Q_1>, ..., <Q_c>)
  const RealVector& charge_expectations() const { return charge_means_; }

  /// f(mu) = mu.q - T ln Z
  double dual_objective() const;
  /// q - <Q>
  RealVector gradient() const;
  /// Kubo-Mori matrix via the logarithmic-mean closed form.
  RealMatrix kubo_mori() const;
  RealMatrix hessian() const { return -kubo_mori(); }
  /// S(rho) computed from log-populations.
  double entropy() const;
  /// mu.q + <H - mu.Q>, the energy read-out used by the solvers.
  double energy_estimate() const;

  /// V^dagger A V
  Matrix to_eigenbasis(const Matrix& a) const;

 private:
  const EnergyProblem* problem_;
  RealVector mu_;
  double temperature_;
  SpectralHermitian g_;
  RealVector populations_;
  RealVector log_populations_;
  double log_partition_ = 0.0;
  Density state_;
  RealVector charge_means_;
};

SpectralHermitian effective_hamiltonian(const EnergyProblem& problem, const RealVector& mu);
double log_partition(const EnergyProblem& problem, const RealVector& mu, double temperature);
Density thermal_state(const EnergyProblem& problem, const RealVector& mu, double temperature);
double dual_objective(const EnergyProblem& problem, const RealVector& mu, double temperature);
RealVector exact_gradient(const EnergyProblem& problem, const RealVector& mu, double temperature);
RealMatrix kubo_mori(const EnergyProblem& problem, const RealVector& mu, double temperature);
RealMatrix hessian(const EnergyProblem& problem, const RealVector& mu, double temperature);

/// -Tr[rho ln rho] with 0 ln 0 = 0.
double entropy(const Density& state);
/// Tr[omega (ln omega - ln tau)]; +infinity when supp(omega) is not inside supp(tau).
double relative_entropy(const Density& omega, const Density& tau);
/// <H>_rho - T S(rho)
double free_energy_primal(const EnergyProblem& problem, const Density& state, double temperature);

}  // namespace thermosdp
