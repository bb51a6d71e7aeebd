#pragma once

#include <array>
#include <optional>
#include <vector>

#include "thermosdp/problem.hpp"
#include "thermosdp/thermal.hpp"

namespace thermosdp::oracle {

/// Central differences of the dual objective with step h * max(1, |mu_i|).
RealVector finite_diff_gradient(const EnergyProblem& problem, const RealVector& mu,
                                double temperature, double h = 1e-5);
/// Central differences of the exact gradient; not symmetrized.
RealMatrix finite_diff_hessian(const EnergyProblem& problem, const RealVector& mu,
                               double temperature, double h = 1e-5);

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  RealVector weights;  // optimal vertex
};

/// Exact minimum energy when H and every Q_i are diagonal in the computational
/// basis: min sum_k p_k H_kk over the simplex subject to sum_k p_k (Q_i)_kk = q_i
/// (or >= q_i), by enumerating basic feasible solutions.
LpResult lp_diagonal_energy(const EnergyProblem& problem);

/// min c.x s.t. A x = b (rows with sense ge: A x >= b), x >= 0, by vertex
/// enumeration. An unbounded program reports value -inf with empty weights.
LpResult lp_standard_form(const RealVector& cost, const RealMatrix& constraints,
                          const RealVector& bounds,
                          const std::vector<ConstraintSense>& senses = {});

/// Single-qubit observable a0 I + a . (X, Y, Z).
struct BlochObservable {
  double identity = 0.0;
  std::array<double, 3> vector{};
};

/// min <H> over Bloch vectors |v| <= 1 with <Q_i> = q_i, in closed form.
LpResult bloch_energy(const BlochObservable& hamiltonian,
                      const std::vector<BlochObservable>& charges, const RealVector& targets);

/// Kubo-Mori matrix from Gauss-Legendre quadrature of
/// (1/T)(int_0^1 Tr[rho^{1-s} Q_i rho^s Q_j] ds - <Q_i><Q_j>), doubling the node
/// count until successive results differ by less than 1e-10.
RealMatrix km_quadrature(const EnergyProblem& problem, const RealVector& mu, double temperature,
                         int nodes = 64);

/// Gauss-Legendre nodes and weights on [0, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

struct DualScanOptions {
  double bound = 10.0;  // search box [-bound, bound]^c
  int grid = 201;
  double tolerance = 1e-11;
};

struct DualScanResult {
  RealVector mu;
  double objective = 0.0;
};

/// Maximizer of the dual objective for c <= 2 by grid search and golden-section refinement.
DualScanResult dual_scan(const EnergyProblem& problem, double temperature,
                         const DualScanOptions& options = {});

}  // namespace thermosdp::oracle
