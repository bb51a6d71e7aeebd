#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "thermosdp/error.hpp"
#include "thermosdp/oracle.hpp"
#include "thermosdp/thermal.hpp"

using namespace thermosdp;
using namespace thermosdp::oracle;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

Observable dense_diag(std::initializer_list<double> v) {
  return Observable::from_dense(SpectralHermitian(fixtures::diagonal_matrix(vec(v))));
}

}  // namespace

TEST(FiniteDiff, MatchesExactGradientOnRandomInstances) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int c = 1 + static_cast<int>(rng.next() % 3);
    const auto p = fixtures::random_dense_problem(4, c, rng);
    const RealVector mu = fixtures::random_vector(c, rng, 2.0);
    const RealVector g = exact_gradient(p, mu, 0.7);
    const RealVector fd = finite_diff_gradient(p, mu, 0.7);
    EXPECT_LE((g - fd).norm(), 1e-6 * std::max(1.0, g.norm()));
  }
}

TEST(FiniteDiff, ZeroAtKnownOptimumAndSymmetricHessian) {
  const auto p = fixtures::qubit_problem("", {"Z"}, {0.3});
  EXPECT_NEAR(finite_diff_gradient(p, vec({std::atanh(0.3)}), 1.0)[0], 0.0, 1e-9);
  Rng rng(2);
  const auto q = fixtures::random_dense_problem(4, 3, rng);
  const RealMatrix h = finite_diff_hessian(q, vec({0.1, -0.4, 0.3}), 0.9);
  EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(finite_diff_gradient(p, vec({0.0}), 1.0, 0.0), DomainError);
}

TEST(LpDiagonal, Cases) {
  const EnergyProblem ground(dense_diag({0.0, 1.0}), {}, RealVector(0));
  EXPECT_NEAR(lp_diagonal_energy(ground).value, 0.0, 1e-15);

  const EnergyProblem three(dense_diag({0.0, 1.0, 2.0}), {dense_diag({1.0, 0.0, -1.0})}, vec({-0.5}));
  const LpResult r = lp_diagonal_energy(three);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.value, 1.5, 1e-12);

  const EnergyProblem infeasible(dense_diag({0.0, 1.0, 2.0}), {dense_diag({1.0, 0.0, -1.0})}, vec({1.5}));
  const LpResult bad = lp_diagonal_energy(infeasible);
  EXPECT_FALSE(bad.feasible);
  EXPECT_TRUE(std::isinf(bad.value));

  const EnergyProblem not_diag(fixtures::obs("X"), {}, RealVector(0));
  EXPECT_THROW(lp_diagonal_energy(not_diag), DomainError);
}

TEST(LpDiagonal, WeightsAreFeasible) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = fixtures::random_diagonal_problem(6, 2, rng);
    const LpResult r = lp_diagonal_energy(p);
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.weights.sum(), 1.0, 1e-10);
    EXPECT_GE(r.weights.minCoeff(), 0.0);
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(r.weights.dot(p.charge(i).matrix.entries().diagonal().real()), p.targets()[i], 1e-10);
    }
    EXPECT_NEAR(r.weights.dot(p.hamiltonian().matrix.entries().diagonal().real()), r.value, 1e-12);
  }
}

TEST(LpStandardForm, InequalityRows) {
  RealMatrix rows(1, 2);
  rows << 1.0, 1.0;
  const LpResult eq = lp_standard_form(vec({1.0, 3.0}), rows, vec({2.0}));
  EXPECT_NEAR(eq.value, 2.0, 1e-12);
  const LpResult ge = lp_standard_form(vec({1.0, 3.0}), rows, vec({2.0}), {ConstraintSense::ge});
  EXPECT_NEAR(ge.value, 2.0, 1e-12);
  const LpResult loose = lp_standard_form(vec({1.0, 3.0}), rows, vec({-1.0}), {ConstraintSense::ge});
  EXPECT_NEAR(loose.value, 0.0, 1e-12);
}

TEST(Bloch, Cases) {
  const BlochObservable h{0.0, {0.0, 0.0, 1.0}};
  const BlochObservable x{0.0, {1.0, 0.0, 0.0}};
  EXPECT_NEAR(bloch_energy(h, {x}, vec({0.6})).value, -0.8, 1e-12);
  EXPECT_NEAR(bloch_energy(h, {x}, vec({1.0})).value, 0.0, 1e-12);
  EXPECT_FALSE(bloch_energy(h, {x}, vec({1.1})).feasible);
  EXPECT_NEAR(bloch_energy(h, {}, RealVector(0)).value, -1.0, 1e-15);
  const BlochObservable y{0.0, {0.0, 1.0, 0.0}};
  EXPECT_NEAR(bloch_energy(h, {x, y}, vec({0.6, 0.0})).value, -0.8, 1e-12);
  EXPECT_FALSE(bloch_energy(h, {x, x}, vec({0.6, 0.5})).feasible);
}

TEST(Bloch, AgreesWithLpOnDiagonalQubits) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const double h0 = 2 * rng.uniform() - 1, hz = 2 * rng.uniform() - 1;
    const double q0 = 2 * rng.uniform() - 1, qz = 2 * rng.uniform() - 1;
    const double target = q0 + qz * (2 * rng.uniform() - 1);
    const EnergyProblem p(dense_diag({h0 + hz, h0 - hz}), {dense_diag({q0 + qz, q0 - qz})}, vec({target}));
    const double lp = lp_diagonal_energy(p).value;
    const double bloch = bloch_energy({h0, {0, 0, hz}}, {{q0, {0, 0, qz}}}, vec({target})).value;
    EXPECT_NEAR(lp, bloch, 1e-9);
  }
}

TEST(KmQuadrature, Cases) {
  const auto p = fixtures::qubit_problem("", {"Z"}, {0.0});
  EXPECT_NEAR(km_quadrature(p, vec({0.0}), 1.0)(0, 0), 1.0, 1e-12);
  const auto id = fixtures::qubit_problem("Z", {"I"}, {1.0});
  EXPECT_NEAR(km_quadrature(id, vec({0.2}), 1.0)(0, 0), 0.0, 1e-12);
  Rng rng(5);
  const auto q = fixtures::random_dense_problem(5, 2, rng);
  const RealMatrix km = km_quadrature(q, vec({0.5, -0.3}), 0.6);
  EXPECT_LE((km - km.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<RealMatrix>(km).eigenvalues()[0], -1e-10);
  EXPECT_LE((km - kubo_mori(q, vec({0.5, -0.3}), 0.6)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(km_quadrature(p, vec({0.0}), 1.0, 8), DomainError);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto [x, w] = gauss_legendre(10);
  double sum = 0.0, moment = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sum += w[k];
    moment += w[k] * std::pow(x[k], 19);
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_NEAR(moment, 1.0 / 20.0, 1e-14);
}

TEST(DualScan, ClosedFormAndSymmetric) {
  const auto p = fixtures::qubit_problem("", {"Z"}, {0.5});
  const DualScanResult r = dual_scan(p, 1.0);
  EXPECT_NEAR(r.mu[0], 0.5493061443340549, 1e-6);
  EXPECT_NEAR(r.objective, -0.5623351446188083, 1e-9);
  const auto sym = fixtures::qubit_problem("", {"Z"}, {0.0});
  EXPECT_NEAR(dual_scan(sym, 1.0).mu[0], 0.0, 1e-6);
}

TEST(DualScan, TwoChargesMatchesGradientZero) {
  Rng rng(6);
  const auto p = fixtures::random_dense_problem(4, 2, rng);
  const DualScanResult r = dual_scan(p, 0.8);
  EXPECT_LE(exact_gradient(p, r.mu, 0.8).norm(), 1e-6);
  const auto many = fixtures::random_dense_problem(4, 3, rng);
  EXPECT_THROW(dual_scan(many, 1.0), DomainError);
}

TEST(LpStandardForm, DetectsUnboundedPrograms) {
  RealMatrix rows(1, 2);
  rows << 1.0, -1.0;
  const auto unbounded = lp_standard_form(vec({-1.0, 0.0}), rows, vec({0.0}));
  EXPECT_TRUE(unbounded.feasible);
  EXPECT_EQ(unbounded.value, -std::numeric_limits<double>::infinity());
  const auto bounded = lp_standard_form(vec({1.0, 0.0}), rows, vec({0.0}));
  EXPECT_EQ(bounded.value, 0.0);
}
