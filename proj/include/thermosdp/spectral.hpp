#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <mutex>

namespace thermosdp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Largest entry of |A - A^dagger| relative to max(1, max|A|).
double hermitian_asymmetry(const Matrix& a);

/// Dense Hermitian matrix with a lazily computed, cached eigendecomposition.
///
/// Construction symmetrizes the input as (A + A^dagger)/2 and warns when the
/// input asymmetry exceeds 1e-8. Copies share the immutable payload, so the
/// eigendecomposition is computed at most once per distinct matrix; the cache
/// fill is guarded by std::call_once and is safe under concurrent access.
class SpectralHermitian {
 public:
  SpectralHermitian();
  explicit SpectralHermitian(const Matrix& entries);

  /// Builds V diag(values) V^dagger with the decomposition already cached.
  static SpectralHermitian from_eigen(const Matrix& vectors, const RealVector& values);
  static SpectralHermitian identity(Eigen::Index dim);
  static SpectralHermitian zero(Eigen::Index dim);
  static SpectralHermitian diagonal(const RealVector& diag);

  Eigen::Index dim() const { return data_->entries.rows(); }
  const Matrix& entries() const { return data_->entries; }

  /// Ascending eigenvalues.
  const RealVector& eigenvalues() const;
  /// Unitary whose columns are eigenvectors, matching eigenvalues().
  const Matrix& eigenvectors() const;

  double spectral_norm() const;
  double trace() const;
  bool is_diagonal(double tol = 1e-10) const;

  SpectralHermitian operator+(const SpectralHermitian& other) const;
  SpectralHermitian operator-(const SpectralHermitian& other) const;
  SpectralHermitian operator*(double scale) const;

 private:
  struct Payload {
    Matrix entries;
    std::once_flag once;
    RealVector values;
    Matrix vectors;
  };
  explicit SpectralHermitian(std::shared_ptr<Payload> payload) : data_(std::move(payload)) {}
  void decompose() const;

  std::shared_ptr<Payload> data_;
};

/// Positive semi-definite, unit-trace Hermitian matrix.
class Density {
 public:
  /// Validates eigenvalues >= -1e-12 and |Tr - 1| <= 1e-10; throws DomainError.
  explicit Density(SpectralHermitian matrix);

  static Density maximally_mixed(Eigen::Index dim);
  /// |index><index| in the computational basis.
  static Density basis_state(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return matrix_.dim(); }
  const SpectralHermitian& matrix() const { return matrix_; }
  const Matrix& entries() const { return matrix_.entries(); }

 private:
  SpectralHermitian matrix_;
};

/// Tr[O rho]; throws if the imaginary residue exceeds 1e-10 relative.
double expectation(const Density& state, const SpectralHermitian& obs);

/// Tr[A B] for Hermitian A, B, real part.
double trace_product(const Matrix& a, const Matrix& b);

}  // namespace thermosdp
