#include "thermosdp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <sstream>

#include "thermosdp/error.hpp"

namespace thermosdp {

double hermitian_asymmetry(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

SpectralHermitian::SpectralHermitian() : data_(std::make_shared<Payload>()) {}

SpectralHermitian::SpectralHermitian(const Matrix& entries) : data_(std::make_shared<Payload>()) {
  if (entries.rows() != entries.cols()) {
    throw DomainError("Hermitian matrix must be square");
  }
  if (!entries.allFinite()) throw DomainError("Hermitian matrix has non-finite entries");
  const double asym = hermitian_asymmetry(entries);
  if (asym > 1e-8) {
    std::ostringstream msg;
    msg << "symmetrizing matrix with relative asymmetry " << asym;
    log_warning(msg.str());
  }
  data_->entries = (entries + entries.adjoint()) * 0.5;
}

SpectralHermitian SpectralHermitian::from_eigen(const Matrix& vectors, const RealVector& values) {
  auto payload = std::make_shared<Payload>();
  payload->entries = vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
  payload->entries = (payload->entries + payload->entries.adjoint()).eval() * 0.5;
  payload->values = values;
  payload->vectors = vectors;
  std::call_once(payload->once, [] {});
  return SpectralHermitian(std::move(payload));
}

SpectralHermitian SpectralHermitian::identity(Eigen::Index dim) {
  return diagonal(RealVector::Ones(dim));
}

SpectralHermitian SpectralHermitian::zero(Eigen::Index dim) {
  return diagonal(RealVector::Zero(dim));
}

SpectralHermitian SpectralHermitian::diagonal(const RealVector& diag) {
  // Eigenvalues must come out ascending, so sort with a permutation.
  std::vector<Eigen::Index> order(diag.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return diag[a] < diag[b]; });
  Matrix vectors = Matrix::Zero(diag.size(), diag.size());
  RealVector values(diag.size());
  for (Eigen::Index k = 0; k < diag.size(); ++k) {
    vectors(order[k], k) = 1.0;
    values[k] = diag[order[k]];
  }
  auto payload = std::make_shared<Payload>();
  payload->entries = diag.cast<Complex>().asDiagonal();
  payload->values = std::move(values);
  payload->vectors = std::move(vectors);
  std::call_once(payload->once, [] {});
  return SpectralHermitian(std::move(payload));
}

void SpectralHermitian::decompose() const {
  std::call_once(data_->once, [this] {
    if (dim() == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(data_->entries);
    if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigendecomposition failed");
    data_->values = solver.eigenvalues();
    data_->vectors = solver.eigenvectors();
    if (!data_->values.allFinite()) throw NumericError("non-finite eigenvalues");
  });
}

const RealVector& SpectralHermitian::eigenvalues() const {
  decompose();
  return data_->values;
}

const Matrix& SpectralHermitian::eigenvectors() const {
  decompose();
  return data_->vectors;
}

double SpectralHermitian::spectral_norm() const {
  if (dim() == 0) return 0.0;
  const RealVector& v = eigenvalues();
  return std::max(std::abs(v[0]), std::abs(v[v.size() - 1]));
}

double SpectralHermitian::trace() const { return entries().trace().real(); }

bool SpectralHermitian::is_diagonal(double tol) const {
  const Matrix& a = entries();
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j && std::abs(a(i, j)) > tol) return false;
  return true;
}

SpectralHermitian SpectralHermitian::operator+(const SpectralHermitian& other) const {
  if (dim() != other.dim()) throw DomainError("dimension mismatch in Hermitian sum");
  return SpectralHermitian(Matrix(entries() + other.entries()));
}

SpectralHermitian SpectralHermitian::operator-(const SpectralHermitian& other) const {
  if (dim() != other.dim()) throw DomainError("dimension mismatch in Hermitian difference");
  return SpectralHermitian(Matrix(entries() - other.entries()));
}

SpectralHermitian SpectralHermitian::operator*(double scale) const {
  return SpectralHermitian(Matrix(entries() * scale));
}

Density::Density(SpectralHermitian matrix) : matrix_(std::move(matrix)) {
  if (matrix_.dim() == 0) throw DomainError("density matrix must have positive dimension");
  const RealVector& v = matrix_.eigenvalues();
  if (v[0] < -1e-12) throw DomainError("density matrix has a negative eigenvalue");
  if (std::abs(matrix_.trace() - 1.0) > 1e-10) throw DomainError("density matrix trace is not one");
}

Density Density::maximally_mixed(Eigen::Index dim) {
  return Density(SpectralHermitian::diagonal(RealVector::Constant(dim, 1.0 / static_cast<double>(dim))));
}

Density Density::basis_state(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw DomainError("basis index out of range");
  RealVector d = RealVector::Zero(dim);
  d[index] = 1.0;
  return Density(SpectralHermitian::diagonal(d));
}

double trace_product(const Matrix& a, const Matrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

double expectation(const Density& state, const SpectralHermitian& obs) {
  if (state.dim() != obs.dim()) throw DomainError("dimension mismatch in expectation");
  const Complex value = (obs.entries().cwiseProduct(state.entries().transpose())).sum();
  const double scale = std::max(1.0, std::abs(value));
  if (std::abs(value.imag()) > 1e-10 * scale) {
    throw NumericError("expectation value has a non-negligible imaginary part");
  }
  return value.real();
}

}  // namespace thermosdp
