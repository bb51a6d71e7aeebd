#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "thermosdp/error.hpp"
#include "thermosdp/oracle.hpp"
#include "thermosdp/sampling.hpp"

using namespace thermosdp;
using fixtures::qubit_problem;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

// One-sided tail mass of the tent density from its exponential series.
double series_half_cdf(double t) {
  double total = 0.0;
  for (int k = 1; k < 20001; k += 2) total += std::exp(-k * std::numbers::pi * t) / (static_cast<double>(k) * k);
  return 0.5 - 4.0 / (std::numbers::pi * std::numbers::pi) * total;
}

}  // namespace

TEST(Hoeffding, GoldenAndEdgeCases) {
  EXPECT_EQ(hoeffding_count(2.0, 0.1, 0.05), 738);
  EXPECT_EQ(hoeffding_count(2.0, 1e9, 0.05), 1);
  EXPECT_THROW(hoeffding_count(0.0, 0.1, 0.05), DomainError);
  EXPECT_THROW(hoeffding_count(2.0, 0.1, 1.0), DomainError);
  for (double norm : {0.5, 1.0, 2.7}) {
    const PauliSum s(1, {{"Z", norm}});
    const double algorithm = 2.0 * norm * norm * std::log(2.0 / 0.05) / (0.1 * 0.1);
    EXPECT_EQ(observable_shot_count(s, 0.1, 0.05), static_cast<long long>(std::ceil(algorithm)));
  }
}

TEST(EstimateObs, MaximallyMixedWithinEpsilon) {
  const auto p = qubit_problem("", {"Z"}, {0.0});
  const ThermalModel model(p, vec({0.0}), 1.0);
  Rng rng(1);
  int failures = 0;
  for (int k = 0; k < 200; ++k) {
    if (std::abs(estimate_obs(model, *p.charge(0).pauli, 0.1, 0.05, rng)) > 0.1) ++failures;
  }
  EXPECT_LE(failures, 20);
  EXPECT_EQ(estimate_obs(model, PauliSum(1, {}), 0.1, 0.05, rng), 0.0);
}

TEST(EstimateObs, ThermalMeanAndSignHandling) {
  const auto p = qubit_problem("Z", {}, {});
  const ThermalModel model(p, RealVector(0), 1.0);
  Rng rng(2);
  const int reps = 400;
  const double eps = 0.1, delta = 0.05;
  const long long shots = observable_shot_count(PauliSum(1, {{"Z", 1.0}}), eps, delta);
  const double se = std::sqrt((1.0 - std::pow(std::tanh(1.0), 2)) / (shots * reps));
  double plus = 0.0, minus = 0.0;
  for (int k = 0; k < reps; ++k) {
    plus += estimate_obs(model, PauliSum(1, {{"Z", 1.0}}), eps, delta, rng);
    minus += estimate_obs(model, PauliSum(1, {{"Z", -1.0}}), eps, delta, rng);
  }
  EXPECT_NEAR(plus / reps, -std::tanh(1.0), 4 * se);
  EXPECT_NEAR(minus / reps, std::tanh(1.0), 4 * se);
}

TEST(EstimateObs, MixedSignSumIsUnbiased) {
  Rng rng(3);
  const PauliSum s(2, {{"ZI", 0.7}, {"XX", -0.4}, {"IY", 0.2}});
  const EnergyProblem p(Observable::from_pauli(PauliSum(2, {{"ZZ", 1.0}, {"XI", 0.5}})),
                        {Observable::from_pauli(s)}, vec({0.0}));
  const ThermalModel model(p, vec({0.3}), 0.7);
  const double exact = model.expectation(p.charge(0).matrix);
  const int reps = 300;
  double sum = 0.0;
  for (int k = 0; k < reps; ++k) sum += estimate_obs(model, s, 0.2, 0.1, rng);
  const double shots = static_cast<double>(observable_shot_count(s, 0.2, 0.1));
  EXPECT_NEAR(sum / reps, exact, 4.0 * s.one_norm() / std::sqrt(shots * reps));
}

TEST(Tent, DensityValues) {
  EXPECT_NEAR(tent_density(1.0), 2.0 / std::numbers::pi * std::log(1.0 / std::tanh(std::numbers::pi / 2)), 1e-15);
  EXPECT_DOUBLE_EQ(tent_density(-0.7), tent_density(0.7));
  EXPECT_GT(tent_density(1e-8), tent_density(1e-4));
  EXPECT_NEAR(tent_density(8.0), 4.0 / std::numbers::pi * std::exp(-8.0 * std::numbers::pi), 1e-20);
}

TEST(Tent, CdfMatchesSeriesOracle) {
  const TentSampler& tent = TentSampler::instance();
  for (double t : {2e-3, 0.01, 0.05, 0.3, 1.0, 2.5, 7.0, 11.9, 13.0, 30.0}) {
    EXPECT_NEAR(tent.cdf(t), 0.5 + series_half_cdf(t), 1e-10) << t;
    EXPECT_NEAR(tent.cdf(-t), 0.5 - series_half_cdf(t), 1e-10) << t;
  }
  EXPECT_NEAR(tent.cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(tent.cdf(40.0), 1.0, 1e-15);
}

TEST(Tent, NormalizationByQuadrature) {
  // Substituting t = u^2 removes the logarithmic singularity at 0.
  const auto [nodes, weights] = oracle::gauss_legendre(200);
  double total = 0.0;
  const int pieces = 60;
  const double umax = std::sqrt(40.0);
  for (int k = 0; k < pieces; ++k) {
    const double a = umax * k / pieces, b = umax * (k + 1) / pieces;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double u = a + (b - a) * nodes[j];
      total += (b - a) * weights[j] * 2.0 * u * tent_density(u * u);
    }
  }
  EXPECT_NEAR(2.0 * total, 1.0, 1e-6);
}

TEST(Tent, SymmetryAndKolmogorovSmirnov) {
  Rng rng(4);
  const int n = 100000;
  std::vector<double> draws(n);
  double mean = 0.0, sq = 0.0;
  for (auto& t : draws) {
    t = sample_tent(rng);
    mean += t;
    sq += t * t;
  }
  mean /= n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 4.0 * sd / std::sqrt(n));
  std::sort(draws.begin(), draws.end());
  const TentSampler& tent = TentSampler::instance();
  double ks = 0.0;
  for (int k = 0; k < n; ++k) {
    const double f = tent.cdf(draws[static_cast<std::size_t>(k)]);
    ks = std::max({ks, std::abs(f - static_cast<double>(k) / n), std::abs(f - static_cast<double>(k + 1) / n)});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(HadamardTest, CanonicalCase) {
  const auto p = qubit_problem("", {"Z"}, {0.0});
  const ThermalModel model(p, vec({0.0}), 1.0);
  const auto probs = hadamard_test_distribution(model, "Z", "Z", 0.0);
  EXPECT_NEAR(probs[0], 0.0, 1e-15);
  EXPECT_NEAR(probs[1], 0.5, 1e-15);
  EXPECT_NEAR(probs[2], 0.5, 1e-15);
  EXPECT_NEAR(probs[3], 0.0, 1e-15);
  const auto identity = hadamard_test_distribution(model, "I", "Z", 0.7);
  EXPECT_NEAR(identity[0] - identity[1] - identity[2] + identity[3], 0.0, 1e-15);
  EXPECT_THROW(hadamard_test_distribution(model, "ZZ", "Z", 0.0), DomainError);
  EXPECT_THROW(hadamard_test_distribution(model, "Q", "Z", 0.0), DomainError);
}

TEST(HadamardTest, ParityMatchesAnticommutatorTrace) {
  Rng rng(5);
  const EnergyProblem p(Observable::from_pauli(PauliSum(2, {{"ZZ", 0.8}, {"XI", 0.4}, {"IY", -0.3}})),
                        {Observable::from_pauli(PauliSum(2, {{"XZ", 1.0}}))}, vec({0.0}));
  const ThermalModel model(p, vec({0.6}), 0.9);
  const Matrix g = model.effective_hamiltonian().entries();
  const Matrix rho = model.state().entries();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  const char* letters = "IXYZ";
  for (int trial = 0; trial < 30; ++trial) {
    std::string k, l;
    for (int q = 0; q < 2; ++q) {
      k += letters[rng.next() % 4];
      l += letters[rng.next() % 4];
    }
    const double t = 3.0 * (2.0 * rng.uniform() - 1.0);
    const auto probs = hadamard_test_distribution(model, k, l, t);
    double total = 0.0;
    for (double x : probs) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    // U = e^{-iGt/T} sigma_l e^{iGt/T}
    const RealVector phase = -eig.eigenvalues() * t / model.temperature();
    const Matrix u = eig.eigenvectors() *
                     phase.unaryExpr([](double x) { return std::polar(1.0, x); }).asDiagonal() *
                     eig.eigenvectors().adjoint();
    const Matrix s = u * pauli_matrix(l) * u.adjoint();
    const Matrix sk = pauli_matrix(k);
    const double expected = -0.5 * ((s * sk + sk * s) * rho).trace().real();
    EXPECT_NEAR(probs[0] - probs[1] - probs[2] + probs[3], expected, 1e-12) << k << " " << l;
  }
}

TEST(Anticommutator, CanonicalAndIdentity) {
  const auto p = qubit_problem("", {"Z"}, {0.0});
  const ThermalModel model(p, vec({0.0}), 1.0);
  Rng rng(6);
  const PauliSum z(1, {{"Z", 1.0}});
  EXPECT_EQ(estimate_anticommutator(model, z, z, 0.5, 0.1, rng), -1.0);
  const PauliSum id(1, {{"I", 1.0}});
  double sum = 0.0;
  const int reps = 50;
  for (int k = 0; k < reps; ++k) sum += estimate_anticommutator(model, z, id, 0.1, 0.05, rng);
  const double shots = static_cast<double>(anticommutator_shot_count(z, id, 0.1, 0.05));
  EXPECT_NEAR(sum / reps, 0.0, 4.0 / std::sqrt(shots * reps));
  const PauliSum big(1, {{"X", 2.0}, {"Z", -1.5}});
  const double bound = big.one_norm() * z.one_norm();
  EXPECT_LE(std::abs(estimate_anticommutator(model, big, z, 0.5, 0.1, rng)), bound);
}

TEST(Anticommutator, ShotCount) {
  const PauliSum a(1, {{"Z", 2.0}});
  const PauliSum b(1, {{"X", 0.5}, {"Y", 0.5}});
  const double raw = 2.0 * 4.0 * 1.0 * std::log(2.0 / 0.05) / (0.1 * 0.1);
  EXPECT_EQ(anticommutator_shot_count(a, b, 0.1, 0.05), static_cast<long long>(std::ceil(raw)));
}

TEST(Anticommutator, MatchesLogMeanOracle) {
  const EnergyProblem p(Observable::from_pauli(PauliSum(1, {{"Z", 1.0}, {"X", 0.5}})),
                        {Observable::from_pauli(PauliSum(1, {{"X", 1.0}})),
                         Observable::from_pauli(PauliSum(1, {{"Z", 0.6}, {"Y", 0.3}}))},
                        vec({0.0, 0.0}));
  const ThermalModel model(p, vec({0.2, -0.4}), 0.8);
  const RealMatrix km = model.kubo_mori();
  const RealVector means = model.charge_expectations();
  // -1/2 <{Phi(Q_i), Q_j}> = -(T KM_ij + <Q_i><Q_j>)
  Rng rng(7);
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{0, 0}}) {
    const double expected = -(model.temperature() * km(i, j) + means[i] * means[j]);
    const PauliSum& a = *p.charge(i).pauli;
    const PauliSum& b = *p.charge(j).pauli;
    const double eps = 0.02;
    const double value = estimate_anticommutator(model, a, b, eps, 0.05, rng);
    const double shots = static_cast<double>(anticommutator_shot_count(a, b, eps, 0.05));
    EXPECT_NEAR(value, expected, 4.0 * a.one_norm() * b.one_norm() / std::sqrt(shots)) << i << j;
  }
}

TEST(HessianEstimate, CanonicalIdentityAndSymmetry) {
  const auto p = qubit_problem("", {"Z", "I"}, {0.0, 1.0});
  const ThermalModel model(p, vec({0.0, 0.0}), 1.0);
  Rng rng(8);
  const int reps = 40;
  double h00 = 0.0, h11 = 0.0;
  for (int k = 0; k < reps; ++k) {
    h00 += hessian_estimate(model, 0, 0, 0.1, 0.05, rng);
    h11 += hessian_estimate(model, 1, 1, 0.1, 0.05, rng);
  }
  EXPECT_NEAR(h00 / reps, -1.0, 0.05);
  EXPECT_NEAR(h11 / reps, 0.0, 1e-12);
  EXPECT_THROW(hessian_estimate(model, 0, 2, 0.1, 0.05, rng), DomainError);

  const EnergyProblem q(Observable::from_pauli(PauliSum(1, {{"Z", 1.0}})),
                        {Observable::from_pauli(PauliSum(1, {{"X", 1.0}})),
                         Observable::from_pauli(PauliSum(1, {{"Z", 1.0}}))},
                        vec({0.0, 0.0}));
  const ThermalModel m2(q, vec({0.3, 0.2}), 1.0);
  const double exact = m2.hessian()(0, 1);
  double s01 = 0.0, s10 = 0.0;
  for (int k = 0; k < reps; ++k) {
    s01 += hessian_estimate(m2, 0, 1, 0.05, 0.05, rng);
    s10 += hessian_estimate(m2, 1, 0, 0.05, 0.05, rng);
  }
  EXPECT_NEAR(s01 / reps, exact, 0.03);
  EXPECT_NEAR(s10 / reps, exact, 0.03);
}
