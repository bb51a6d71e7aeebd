#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "thermosdp/operators.hpp"
#include "thermosdp/random.hpp"
#include "thermosdp/thermal.hpp"

namespace thermosdp {

/// Smallest N with N >= width^2 ln(2/delta) / (2 eps^2), and at least 1.
long long hoeffding_count(double width, double eps, double delta);

/// Shots used by estimate_obs for a coefficient vector.
long long observable_shot_count(const PauliSum& coeffs, double eps, double delta);

/// Shot-based estimate of Tr[Q rho_T(mu)] for Q = sum_j a_j sigma_j.
///
/// Each shot draws a term with probability |a_j| / ||a||_1, measures it on
/// the thermal state (outcome drawn from the exact Born distribution) and
/// records ||a||_1 sign(a_j) (-1)^b. Returns the shot mean; 0 for an empty sum.
double estimate_obs(const ThermalModel& model, const PauliSum& coeffs, double eps, double delta,
                    Rng& rng);

/// p(t) = (2/pi) ln|coth(pi t / 2)|
double tent_density(double t);

/// Inverse-CDF sampler for the high-peak-tent density. The one-sided CDF is
/// tabulated on 4096 log-spaced knots in (0, 12]; beyond that the exact
/// e^{-pi t} tail is sampled analytically.
class TentSampler {
 public:
  static const TentSampler& instance();

  double sample(Rng& rng) const;
  /// Two-sided CDF, integrated numerically (not read from the table).
  double cdf(double t) const;

  static constexpr int kKnots = 4096;
  static constexpr double kMaxTime = 12.0;

 private:
  TentSampler();

  std::vector<double> knots_;
  std::vector<double> half_cdf_;  // integral of p over [0, knot]
  double table_mass_ = 0.0;       // half_cdf_ at kMaxTime
};

double sample_tent(Rng& rng);

/// Exact outcome law of the interferometric circuit: control |1>, Hadamard,
/// controlled-sigma_k on rho_T(mu), e^{iGt/T} on the system, Hadamard, then
/// control measured in Z (lambda) and system in the sigma_l eigenbasis (gamma).
/// Entry 2*lambda + gamma holds p(lambda, gamma).
class HadamardTest {
 public:
  explicit HadamardTest(const ThermalModel& model);

  std::array<double, 4> distribution(const std::string& k_index, const std::string& l_index,
                                     double t);

 private:
  struct Rotated {
    Matrix pauli;         // V^dagger sigma V
    Matrix sandwiched;    // (V^dagger sigma V) diag(p) (V^dagger sigma V)
    double mean = 0.0;    // Tr[sigma rho]
  };
  const Rotated& rotated(const std::string& index);

  const ThermalModel& model_;
  std::unordered_map<std::string, Rotated> cache_;
};

std::array<double, 4> hadamard_test_distribution(const ThermalModel& model,
                                                 const std::string& k_index,
                                                 const std::string& l_index, double t);

/// Shot count ceil(2 ||a_i||^2 ||a_j||^2 ln(2/delta) / eps^2).
long long anticommutator_shot_count(const PauliSum& a_i, const PauliSum& a_j, double eps,
                                    double delta);

/// Unbiased estimate of -1/2 <{Phi_mu(Q_i), Q_j}>.
double estimate_anticommutator(const ThermalModel& model, const PauliSum& a_i,
                               const PauliSum& a_j, double eps, double delta, Rng& rng);

/// (1/T) (<Q_i><Q_j> - 1/2 <{Phi_mu(Q_i), Q_j}>), with the two expectations
/// taken from independent estimate_obs calls.
double hessian_estimate(const ThermalModel& model, int i, int j, double eps, double delta,
                        Rng& rng);

}  // namespace thermosdp
