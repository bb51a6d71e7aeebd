#pragma once

#include <optional>
#include <vector>

#include "thermosdp/operators.hpp"
#include "thermosdp/spectral.hpp"

namespace thermosdp {

enum class Representation { dense, pauli };

/// Equality constraint <Q> = q, or ">=" whose multiplier is kept non-negative.
enum class ConstraintSense { eq, ge };

/// An observable in dense form, optionally carrying its Pauli decomposition.
struct Observable {
  SpectralHermitian matrix;
  std::optional<PauliSum> pauli;

  static Observable from_pauli(const PauliSum& sum, int qubit_cap = kDefaultQubitCap);
  static Observable from_dense(const SpectralHermitian& matrix);

  Eigen::Index dim() const { return matrix.dim(); }
  /// Spectral norm for dense, coefficient one-norm for Pauli encodings.
  double norm_bound(Representation rep) const;
};

/// The tuple (H, Q_1..Q_c) with constraint targets q.
class EnergyProblem {
 public:
  EnergyProblem(Observable hamiltonian, std::vector<Observable> charges, RealVector targets,
                std::vector<ConstraintSense> senses = {});

  Eigen::Index dim() const { return hamiltonian_.dim(); }
  int num_charges() const { return static_cast<int>(charges_.size()); }

  const Observable& hamiltonian() const { return hamiltonian_; }
  const std::vector<Observable>& charges() const { return charges_; }
  const Observable& charge(int i) const { return charges_.at(static_cast<std::size_t>(i)); }
  const RealVector& targets() const { return targets_; }
  const std::vector<ConstraintSense>& senses() const { return senses_; }
  bool has_inequalities() const;

  /// Pauli when the Hamiltonian and every charge carry a decomposition.
  Representation representation() const;
  /// Norm bound of charge i under representation().
  double charge_norm_bound(int i) const;

  /// Copy with Pauli decompositions attached (dimension must be 2^n).
  EnergyProblem with_pauli_decomposition() const;

 private:
  Observable hamiltonian_;
  std::vector<Observable> charges_;
  RealVector targets_;
  std::vector<ConstraintSense> senses_;
};

}  // namespace thermosdp
