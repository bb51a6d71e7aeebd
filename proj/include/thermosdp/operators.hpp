#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "thermosdp/random.hpp"
#include "thermosdp/spectral.hpp"

namespace thermosdp {

/// Default cap on qubits for dense materialization (d = 1024).
inline constexpr int kDefaultQubitCap = 10;

/// One signed term of a Pauli decomposition. `index` is an n-character string
/// over {I,X,Y,Z}; the first character acts on the most significant qubit.
struct PauliTerm {
  std::string index;
  double coeff = 0.0;

  bool operator==(const PauliTerm&) const = default;
};

/// Validates a Pauli index; throws DomainError naming the offending character.
void validate_pauli_index(const std::string& index);

/// Real linear combination of n-qubit Pauli strings with signed coefficients.
/// Duplicate indices are merged on construction and zero terms dropped; the
/// first-appearance order of indices is kept.
class PauliSum {
 public:
  PauliSum() = default;
  PauliSum(int qubits, std::vector<PauliTerm> terms);

  int qubits() const { return qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Sum of |coeff|.
  double one_norm() const;

  /// Coefficient-wise a*this + b*other over the union of indices.
  PauliSum combined(double a, const PauliSum& other, double b) const;
  PauliSum scaled(double factor) const;
  /// Appends one qubit: each term sigma becomes sigma (x) suffix.
  PauliSum tensor_suffix(char suffix) const;

  bool operator==(const PauliSum&) const = default;

 private:
  int qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Action of a Pauli string on computational basis states:
/// sigma|x> = phase(x) |x ^ flip>.
struct PauliAction {
  std::uint64_t flip = 0;
  std::uint64_t zmask = 0;
  int y_count = 0;

  static PauliAction of(const std::string& index);
  Complex phase(std::uint64_t x) const;
};

/// Dense 2^n x 2^n matrix of a single Pauli string.
Matrix pauli_matrix(const std::string& index);

/// Dense matrix of sum_j coeff_j sigma_j. Throws ResourceError above the cap.
SpectralHermitian materialize(const PauliSum& sum, int qubit_cap = kDefaultQubitCap);

double one_norm(const PauliSum& sum);

/// Pauli decomposition of a dense matrix of dimension 2^n (coeff = Tr[sigma A]/d).
/// Terms with |coeff| <= tol are dropped.
PauliSum decompose_pauli(const SpectralHermitian& matrix, double tol = 1e-14);

/// Tr[sigma rho] for a single Pauli string, O(d).
double pauli_expectation(const Matrix& rho, const std::string& index);

struct SignedTerm {
  std::string index;
  int sign = 1;
};

/// Draws term j with probability |coeff_j| / one_norm and reports its sign.
/// Builds a fresh table per call; use TermSampler inside shot loops.
SignedTerm sample_signed_term(const PauliSum& sum, Rng& rng);

/// Cumulative table over |coeff|, reused across draws.
class TermSampler {
 public:
  explicit TermSampler(const PauliSum& sum);

  /// Position of the sampled term within sum.terms().
  std::size_t sample(Rng& rng) const;
  double one_norm() const { return norm_; }

 private:
  std::vector<double> cumulative_;
  double norm_ = 0.0;
};

/// Outcome probabilities (p_plus, p_minus) = ((1 +- Tr[sigma rho]) / 2) of
/// measuring the Pauli string on the state.
std::pair<double, double> pauli_measurement_distribution(const Density& state,
                                                         const std::string& index);

}  // namespace thermosdp
