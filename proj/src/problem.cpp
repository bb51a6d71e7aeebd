#include "thermosdp/problem.hpp"

#include <cmath>

#include "thermosdp/error.hpp"

namespace thermosdp {

Observable Observable::from_pauli(const PauliSum& sum, int qubit_cap) {
  return Observable{materialize(sum, qubit_cap), sum};
}

Observable Observable::from_dense(const SpectralHermitian& matrix) {
  return Observable{matrix, std::nullopt};
}

double Observable::norm_bound(Representation rep) const {
  if (rep == Representation::pauli) {
    if (!pauli) throw RepresentationError("observable has no Pauli decomposition");
    return pauli->one_norm();
  }
  return matrix.spectral_norm();
}

EnergyProblem::EnergyProblem(Observable hamiltonian, std::vector<Observable> charges,
                             RealVector targets, std::vector<ConstraintSense> senses)
    : hamiltonian_(std::move(hamiltonian)),
      charges_(std::move(charges)),
      targets_(std::move(targets)),
      senses_(std::move(senses)) {
  if (hamiltonian_.dim() < 1) throw DomainError("Hamiltonian must have positive dimension");
  if (targets_.size() != static_cast<Eigen::Index>(charges_.size())) {
    throw DomainError("expected " + std::to_string(charges_.size()) + " constraint targets, got " +
                      std::to_string(targets_.size()));
  }
  if (!targets_.allFinite()) throw DomainError("constraint targets must be finite");
  for (std::size_t i = 0; i < charges_.size(); ++i) {
    if (charges_[i].dim() != hamiltonian_.dim()) {
      throw DomainError("charge " + std::to_string(i) + " has dimension " +
                        std::to_string(charges_[i].dim()) + ", expected " +
                        std::to_string(hamiltonian_.dim()));
    }
  }
  if (senses_.empty()) senses_.assign(charges_.size(), ConstraintSense::eq);
  if (senses_.size() != charges_.size()) throw DomainError("one sense per constraint is required");
}

bool EnergyProblem::has_inequalities() const {
  for (auto s : senses_)
    if (s == ConstraintSense::ge) return true;
  return false;
}

Representation EnergyProblem::representation() const {
  if (!hamiltonian_.pauli) return Representation::dense;
  for (const auto& q : charges_)
    if (!q.pauli) return Representation::dense;
  return Representation::pauli;
}

double EnergyProblem::charge_norm_bound(int i) const {
  return charge(i).norm_bound(representation());
}

EnergyProblem EnergyProblem::with_pauli_decomposition() const {
  auto attach = [](const Observable& o) {
    if (o.pauli) return o;
    return Observable{o.matrix, decompose_pauli(o.matrix)};
  };
  std::vector<Observable> charges;
  charges.reserve(charges_.size());
  for (const auto& q : charges_) charges.push_back(attach(q));
  return EnergyProblem(attach(hamiltonian_), std::move(charges), targets_, senses_);
}

}  // namespace thermosdp
