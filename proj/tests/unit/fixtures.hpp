#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "thermosdp/operators.hpp"
#include "thermosdp/problem.hpp"
#include "thermosdp/random.hpp"

namespace fixtures {

using namespace thermosdp;

inline PauliSum pauli(int qubits, std::vector<PauliTerm> terms) {
  return PauliSum(qubits, std::move(terms));
}

inline Observable obs(const std::string& index, double coeff = 1.0) {
  return Observable::from_pauli(PauliSum(static_cast<int>(index.size()), {{index, coeff}}));
}

inline Observable zero_obs(int qubits) { return Observable::from_pauli(PauliSum(qubits, {})); }

/// Single-qubit problem with Pauli-encoded H and charges.
inline EnergyProblem qubit_problem(const std::string& h, const std::vector<std::string>& charges,
                                   std::vector<double> targets) {
  std::vector<Observable> qs;
  for (const auto& c : charges) qs.push_back(obs(c));
  RealVector q = Eigen::Map<RealVector>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  return EnergyProblem(h.empty() ? zero_obs(1) : obs(h), std::move(qs), q);
}

inline Matrix random_hermitian(Eigen::Index d, Rng& rng, double scale = 1.0) {
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      a(i, j) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  return (a + a.adjoint()) * (0.5 * scale);
}

inline Matrix diagonal_matrix(const RealVector& v) {
  return v.cast<Complex>().asDiagonal();
}

/// Random dense problem with c charges and targets taken from a random
/// interior state, so the constraints are feasible.
inline EnergyProblem random_dense_problem(Eigen::Index d, int c, Rng& rng) {
  std::vector<Observable> qs;
  for (int i = 0; i < c; ++i) qs.push_back(Observable::from_dense(SpectralHermitian(random_hermitian(d, rng))));
  RealVector q(c);
  const Matrix mix = random_hermitian(d, rng);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(mix);
  RealVector w(d);
  for (Eigen::Index k = 0; k < d; ++k) w[k] = 0.5 + rng.uniform();
  w /= w.sum();
  const Matrix rho = eig.eigenvectors() * w.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  for (int i = 0; i < c; ++i) q[i] = (qs[static_cast<std::size_t>(i)].matrix.entries() * rho).trace().real();
  return EnergyProblem(Observable::from_dense(SpectralHermitian(random_hermitian(d, rng))), std::move(qs), q);
}

/// Random problem whose observables are all diagonal in the computational basis.
inline EnergyProblem random_diagonal_problem(Eigen::Index d, int c, Rng& rng) {
  auto diag = [&] {
    RealVector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = 2.0 * rng.uniform() - 1.0;
    return v;
  };
  RealVector w(d);
  for (Eigen::Index k = 0; k < d; ++k) w[k] = 0.5 + rng.uniform();
  w /= w.sum();
  std::vector<Observable> qs;
  RealVector q(c);
  for (int i = 0; i < c; ++i) {
    const RealVector v = diag();
    q[i] = v.dot(w);
    qs.push_back(Observable::from_dense(SpectralHermitian(diagonal_matrix(v))));
  }
  return EnergyProblem(Observable::from_dense(SpectralHermitian(diagonal_matrix(diag()))), std::move(qs), q);
}

inline RealVector random_vector(int c, Rng& rng, double radius) {
  RealVector v(c);
  for (int i = 0; i < c; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
  if (c > 0 && v.norm() > 0.0) v *= radius * rng.uniform() / v.norm();
  return v;
}

}  // namespace fixtures
