#include "thermosdp/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "thermosdp/error.hpp"

namespace thermosdp {

void validate_pauli_index(const std::string& index) {
  for (std::size_t k = 0; k < index.size(); ++k) {
    const char c = index[k];
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw DomainError("unknown Pauli character '" + std::string(1, c) + "' at position " +
                        std::to_string(k) + " of \"" + index + "\"");
    }
  }
}

PauliSum::PauliSum(int qubits, std::vector<PauliTerm> terms) : qubits_(qubits) {
  if (qubits < 0) throw DomainError("qubit count must be non-negative");
  if (qubits > 62) throw ResourceError("Pauli strings are limited to 62 qubits");
  std::unordered_map<std::string, std::size_t> seen;
  for (auto& term : terms) {
    if (static_cast<int>(term.index.size()) != qubits) {
      throw DomainError("Pauli index \"" + term.index + "\" has length " +
                        std::to_string(term.index.size()) + ", expected " + std::to_string(qubits));
    }
    validate_pauli_index(term.index);
    if (!std::isfinite(term.coeff)) throw DomainError("non-finite Pauli coefficient");
    auto [it, inserted] = seen.emplace(term.index, terms_.size());
    if (inserted) {
      terms_.push_back(std::move(term));
    } else {
      terms_[it->second].coeff += term.coeff;
    }
  }
  std::erase_if(terms_, [](const PauliTerm& t) { return t.coeff == 0.0; });
}

double PauliSum::one_norm() const {
  double total = 0.0;
  for (const auto& t : terms_) total += std::abs(t.coeff);
  return total;
}

PauliSum PauliSum::combined(double a, const PauliSum& other, double b) const {
  if (other.qubits_ != qubits_ && !other.empty() && !empty()) {
    throw DomainError("qubit count mismatch in Pauli combination");
  }
  std::vector<PauliTerm> terms;
  terms.reserve(terms_.size() + other.terms_.size());
  for (const auto& t : terms_) terms.push_back({t.index, a * t.coeff});
  for (const auto& t : other.terms_) terms.push_back({t.index, b * t.coeff});
  return PauliSum(std::max(qubits_, other.qubits_), std::move(terms));
}

PauliSum PauliSum::scaled(double factor) const { return combined(factor, PauliSum(), 0.0); }

PauliSum PauliSum::tensor_suffix(char suffix) const {
  validate_pauli_index(std::string(1, suffix));
  std::vector<PauliTerm> terms;
  terms.reserve(terms_.size());
  for (const auto& t : terms_) terms.push_back({t.index + suffix, t.coeff});
  return PauliSum(qubits_ + 1, std::move(terms));
}

PauliAction PauliAction::of(const std::string& index) {
  PauliAction action;
  const std::size_t n = index.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - k);
    switch (index[k]) {
      case 'I':
        break;
      case 'X':
        action.flip |= bit;
        break;
      case 'Y':
        action.flip |= bit;
        action.zmask |= bit;
        ++action.y_count;
        break;
      case 'Z':
        action.zmask |= bit;
        break;
      default:
        validate_pauli_index(index);
    }
  }
  return action;
}

Complex PauliAction::phase(std::uint64_t x) const {
  // Y = iXZ, so each Y contributes a factor i on top of the Z sign.
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex p = kPowers[y_count & 3];
  return (std::popcount(x & zmask) & 1) ? -p : p;
}

Matrix pauli_matrix(const std::string& index) {
  const PauliAction action = PauliAction::of(index);
  const std::uint64_t dim = std::uint64_t{1} << index.size();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    m(static_cast<Eigen::Index>(x ^ action.flip), static_cast<Eigen::Index>(x)) = action.phase(x);
  }
  return m;
}

SpectralHermitian materialize(const PauliSum& sum, int qubit_cap) {
  if (sum.qubits() > qubit_cap) {
    throw ResourceError("materializing " + std::to_string(sum.qubits()) +
                        " qubits exceeds the cap of " + std::to_string(qubit_cap));
  }
  const std::uint64_t dim = std::uint64_t{1} << sum.qubits();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& term : sum.terms()) {
    const PauliAction action = PauliAction::of(term.index);
    for (std::uint64_t x = 0; x < dim; ++x) {
      m(static_cast<Eigen::Index>(x ^ action.flip), static_cast<Eigen::Index>(x)) +=
          term.coeff * action.phase(x);
    }
  }
  return SpectralHermitian(m);
}

double one_norm(const PauliSum& sum) { return sum.one_norm(); }

PauliSum decompose_pauli(const SpectralHermitian& matrix, double tol) {
  const auto dim = static_cast<std::uint64_t>(matrix.dim());
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw RepresentationError("Pauli decomposition needs a power-of-two dimension, got " +
                              std::to_string(dim));
  }
  const int n = std::countr_zero(dim);
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<PauliTerm> terms;
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::string index(static_cast<std::size_t>(n), 'I');
    for (int k = 0; k < n; ++k) index[k] = kLetters[(code >> (2 * (n - 1 - k))) & 3];
    const double coeff = pauli_expectation(matrix.entries(), index) / static_cast<double>(dim);
    if (std::abs(coeff) > tol) terms.push_back({std::move(index), coeff});
  }
  return PauliSum(n, std::move(terms));
}

double pauli_expectation(const Matrix& rho, const std::string& index) {
  const PauliAction action = PauliAction::of(index);
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  if (dim != (std::uint64_t{1} << index.size())) {
    throw DomainError("Pauli string \"" + index + "\" does not match state dimension " +
                      std::to_string(dim));
  }
  // Tr[sigma rho] = sum_x <x ^ flip| sigma |x> rho(x, x ^ flip)
  Complex total = 0.0;
  for (std::uint64_t x = 0; x < dim; ++x) {
    total += action.phase(x) *
             rho(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x ^ action.flip));
  }
  return total.real();
}

TermSampler::TermSampler(const PauliSum& sum) {
  if (sum.empty()) throw DomainError("cannot sample from an empty Pauli sum");
  cumulative_.reserve(sum.terms().size());
  for (const auto& t : sum.terms()) {
    norm_ += std::abs(t.coeff);
    cumulative_.push_back(norm_);
  }
}

std::size_t TermSampler::sample(Rng& rng) const {
  if (cumulative_.size() == 1) return 0;
  const double u = rng.uniform() * norm_;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

SignedTerm sample_signed_term(const PauliSum& sum, Rng& rng) {
  const TermSampler sampler(sum);
  const PauliTerm& term = sum.terms()[sampler.sample(rng)];
  return {term.index, term.coeff < 0.0 ? -1 : 1};
}

std::pair<double, double> pauli_measurement_distribution(const Density& state,
                                                         const std::string& index) {
  validate_pauli_index(index);
  const double mean = std::clamp(pauli_expectation(state.entries(), index), -1.0, 1.0);
  const double plus = 0.5 * (1.0 + mean);
  return {plus, 1.0 - plus};
}

}  // namespace thermosdp
