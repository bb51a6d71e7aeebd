#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "thermosdp/error.hpp"
#include "thermosdp/oracle.hpp"
#include "thermosdp/sdp.hpp"

using namespace thermosdp;

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

TEST(SdpProblem, Validation) {
  EXPECT_THROW(SdpProblem(dense_diag({1.0}), {dense_diag({1.0})}, vec({1.0}), 0.0), DomainError);
  EXPECT_THROW(SdpProblem(dense_diag({1.0}), {dense_diag({1.0, 2.0})}, vec({1.0}), 1.0), DomainError);
  EXPECT_THROW(SdpProblem(dense_diag({1.0}), {dense_diag({1.0})}, vec({}), 1.0), DomainError);
}

TEST(DirectSum, PaddedExample) {
  const SdpProblem sdp(dense_diag({2.0}), {dense_diag({1.0})}, vec({3.0}), 5.0);
  const ReducedProblem r = reduce_direct_sum(sdp);
  EXPECT_EQ(r.problem.dim(), 2);
  EXPECT_EQ(r.scale, 5.0);
  const Matrix c = r.problem.hamiltonian().matrix.entries();
  EXPECT_EQ(c(0, 0).real(), 2.0);
  EXPECT_EQ(c(1, 1).real(), 0.0);
  const Matrix a = r.problem.charge(0).matrix.entries();
  EXPECT_EQ(a(0, 0).real(), 1.0);
  EXPECT_EQ(a(1, 1).real(), 0.0);
  EXPECT_EQ(r.problem.targets()[0], 3.0 / 5.0);
}

TEST(QubitEmbed, ZExample) {
  const SdpProblem sdp(fixtures::obs("Z"), {}, vec({}), 1.0);
  const ReducedProblem r = reduce_qubit_embed(sdp);
  EXPECT_EQ(r.problem.dim(), 4);
  ASSERT_TRUE(r.problem.hamiltonian().pauli.has_value());
  const PauliSum expected(2, {{"ZI", 0.5}, {"ZZ", 0.5}});
  EXPECT_EQ(*r.problem.hamiltonian().pauli, expected);
  const Matrix m = r.problem.hamiltonian().matrix.entries();
  const RealVector diag = m.diagonal().real();
  EXPECT_EQ(diag, vec({1.0, 0.0, -1.0, 0.0}));
  EXPECT_NEAR((materialize(expected).entries() - m).norm(), 0.0, 1e-15);
}

TEST(QubitEmbed, DenseMatchesPauliPath) {
  Rng rng(1);
  const Matrix c = fixtures::random_hermitian(4, rng);
  const Observable dense = Observable::from_dense(SpectralHermitian(c));
  const Observable pauli = Observable::from_pauli(decompose_pauli(SpectralHermitian(c)));
  const auto a = reduce_qubit_embed(SdpProblem(dense, {}, vec({}), 2.0));
  const auto b = reduce_qubit_embed(SdpProblem(pauli, {}, vec({}), 2.0));
  EXPECT_EQ(a.problem.dim(), 8);
  EXPECT_NEAR((a.problem.hamiltonian().matrix.entries() - b.problem.hamiltonian().matrix.entries()).norm(), 0.0, 1e-13);
}

TEST(SdpSchedule, GoldenValue) {
  const SdpProblem sdp(dense_diag({0.0}), {dense_diag({1.0})}, vec({1.0}), 5.0);
  const GdSchedule s = sdp_schedule(sdp, 0.1, 1.0);
  EXPECT_EQ(s.iterations, 13863);
  EXPECT_NEAR(s.temperature, 0.1 / (4.0 * 5.0 * std::log(2.0)), 1e-15);
}

TEST(SolveSdp, IdentityConstraintMatchesEnergyPath) {
  // With A = I, b = 1, R = 1 the padding level carries no weight.
  const SdpProblem sdp(dense_diag({0.5, -0.2, 0.3}),
                       {dense_diag({1.0, 1.0, 1.0}), dense_diag({1.0, -1.0, 0.0})},
                       vec({1.0, 0.1}), 1.0);
  const EnergyProblem energy(dense_diag({0.5, -0.2, 0.3}), {dense_diag({1.0, -1.0, 0.0})}, vec({0.1}));
  const double direct = oracle::lp_diagonal_energy(energy).value;
  const SdpSolution sol = solve_sdp(sdp, 0.05, 20.0, SolveMode::newton);
  EXPECT_EQ(sol.reduction, Reduction::direct_sum);
  EXPECT_EQ(sol.reduced_dim, 4);
  EXPECT_NEAR(sol.report.estimate, direct, 0.05);
}

TEST(SolveSdp, ZeroObjective) {
  const SdpProblem sdp(dense_diag({0.0, 0.0}), {dense_diag({1.0, 2.0})}, vec({1.0}), 2.0);
  for (auto mode : {SolveMode::exact, SolveMode::newton}) {
    EXPECT_NEAR(solve_sdp(sdp, 0.1, 1.0, mode).report.estimate, 0.0, 0.1);
  }
}

TEST(SolveSdp, DiagonalMatchesLpOracle) {
  const SdpProblem sdp(dense_diag({1.0, 2.0, 0.5}), {dense_diag({1.0, 0.0, 2.0})}, vec({1.0}), 10.0);
  RealMatrix rows(1, 3);
  rows << 1.0, 0.0, 2.0;
  const auto alpha = oracle::lp_standard_form(vec({1.0, 2.0, 0.5}), rows, vec({1.0}));
  ASSERT_TRUE(alpha.feasible);
  EXPECT_NEAR(alpha.value, 0.25, 1e-12);
  const SdpSolution sol = solve_sdp(sdp, 0.1, 20.0, SolveMode::newton);
  EXPECT_NEAR(sol.report.estimate, alpha.value, 0.1);
}

TEST(SolveSdp, ReductionsAgreeAndSgaUsesEmbedding) {
  const SdpProblem sdp(dense_diag({1.0, 0.3}), {dense_diag({1.0, -1.0})}, vec({0.2}), 2.0);
  SdpSolveOptions ds, qe;
  qe.reduction = Reduction::qubit_embed;
  const double a = solve_sdp(sdp, 0.05, 20.0, SolveMode::newton, ds).report.estimate;
  const double b = solve_sdp(sdp, 0.05, 20.0, SolveMode::newton, qe).report.estimate;
  EXPECT_NEAR(a, b, 0.05);

  SdpSolveOptions sga_options;
  sga_options.overrides.iterations = 20;
  const SdpSolution s = solve_sdp(sdp, 0.5, 2.0, SolveMode::sga, sga_options);
  EXPECT_EQ(s.reduction, Reduction::qubit_embed);
  EXPECT_EQ(s.reduced_dim, 4);
  EXPECT_GT(s.report.sample_count, 0);
  SdpSolveOptions forced;
  forced.reduction = Reduction::direct_sum;
  EXPECT_THROW(solve_sdp(sdp, 0.5, 2.0, SolveMode::sga, forced), RepresentationError);
}

TEST(SolveSdp, TraceBoundMonotone) {
  const SdpProblem sdp(dense_diag({1.0, 2.0, 0.5}), {dense_diag({1.0, 0.0, 2.0})}, vec({1.0}), 1.0);
  double previous = std::numeric_limits<double>::infinity();
  for (double r : {0.6, 1.0, 2.0, 5.0}) {
    const auto exact = oracle::lp_diagonal_energy(reduce_direct_sum(sdp.with_trace_bound(r)).problem);
    ASSERT_TRUE(exact.feasible);
    const double alpha_r = r * exact.value;
    EXPECT_LE(alpha_r, previous + 1e-12);
    previous = alpha_r;
  }
}

TEST(SolveSdp, TargetsAreExactlyScaled) {
  const SdpProblem sdp(dense_diag({1.0}), {dense_diag({1.0}), dense_diag({2.0})}, vec({0.3, 0.7}), 3.0);
  for (const auto& r : {reduce_direct_sum(sdp), reduce_qubit_embed(sdp)}) {
    EXPECT_EQ(r.problem.targets()[0], 0.3 / 3.0);
    EXPECT_EQ(r.problem.targets()[1], 0.7 / 3.0);
  }
}
