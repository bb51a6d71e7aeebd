#include "thermosdp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "thermosdp/error.hpp"
#include "thermosdp/numeric.hpp"

namespace thermosdp {

namespace {

using std::numbers::pi;

void check_accuracy(double eps, double delta) {
  if (!(eps > 0.0)) throw DomainError("accuracy must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("failure probability must lie in (0, 1)");
}

void check_qubits(const ThermalModel& model, const PauliSum& sum) {
  if ((Eigen::Index{1} << sum.qubits()) != model.problem().dim()) {
    throw DomainError("Pauli sum on " + std::to_string(sum.qubits()) +
                      " qubits does not match dimension " + std::to_string(model.problem().dim()));
  }
}

// 16-point Gauss-Legendre rule on [-1, 1], nodes found by Newton iteration.
struct Legendre16 {
  std::array<double, 16> nodes{};
  std::array<double, 16> weights{};

  Legendre16() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double total = 0.0;
    for (int i = 0; i < 16; ++i) total += weights[i] * f(mid + half * nodes[i]);
    return total * half;
  }
};

const Legendre16& legendre16() {
  static const Legendre16 rule;
  return rule;
}

// Smooth part of ln coth(pi s / 2) after removing -ln(pi s / 2).
double tent_smooth_part(double s) {
  const double x = 0.5 * pi * s;
  if (x < 1e-8) return x * x / 3.0;
  return std::log(x / std::tanh(x));
}

// Integral of p over [0, t] for t >= 0, with the log singularity integrated in closed form.
double tent_half_mass(double t) {
  if (t <= 0.0) return 0.0;
  const int pieces = static_cast<int>(std::ceil(t * 4.0)) + 1;
  double smooth = 0.0;
  for (int k = 0; k < pieces; ++k) {
    smooth += legendre16().integrate(tent_smooth_part, t * k / pieces, t * (k + 1) / pieces);
  }
  const double singular = t * (1.0 - std::log(0.5 * pi * t));
  return (2.0 / pi) * (singular + smooth);
}

// Mass of p beyond t > 0 on one side, from the exponential series of ln coth.
double tent_tail_mass(double t) {
  double total = 0.0;
  for (int k = 1; k < 200; k += 2) {
    const double term = std::exp(-k * pi * t) / (static_cast<double>(k) * k);
    total += term;
    if (term < 1e-30) break;
  }
  return (4.0 / (pi * pi)) * total;
}

}  // namespace

long long hoeffding_count(double width, double eps, double delta) {
  check_accuracy(eps, delta);
  if (!(width > 0.0)) throw DomainError("outcome range must be positive");
  const double n = width * width * std::log(2.0 / delta) / (2.0 * eps * eps);
  return std::max<long long>(1, ceil_count(n));
}

long long observable_shot_count(const PauliSum& coeffs, double eps, double delta) {
  if (coeffs.empty()) return 0;
  return hoeffding_count(2.0 * coeffs.one_norm(), eps, delta);
}

double estimate_obs(const ThermalModel& model, const PauliSum& coeffs, double eps, double delta,
                    Rng& rng) {
  check_accuracy(eps, delta);
  if (coeffs.empty()) return 0.0;
  check_qubits(model, coeffs);

  const TermSampler sampler(coeffs);
  const auto& terms = coeffs.terms();
  std::vector<double> plus_probability(terms.size());
  std::vector<int> signs(terms.size());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double mean =
        std::clamp(pauli_expectation(model.state().entries(), terms[j].index), -1.0, 1.0);
    plus_probability[j] = 0.5 * (1.0 + mean);
    signs[j] = terms[j].coeff < 0.0 ? -1 : 1;
  }

  const long long shots = observable_shot_count(coeffs, eps, delta);
  long long tally = 0;  // exact integer sum of sign * (-1)^b
  for (long long n = 0; n < shots; ++n) {
    const std::size_t j = sampler.sample(rng);
    const bool outcome_plus = rng.uniform() < plus_probability[j];
    tally += outcome_plus ? signs[j] : -signs[j];
  }
  return sampler.one_norm() * static_cast<double>(tally) / static_cast<double>(shots);
}

double tent_density(double t) {
  const double x = 0.5 * pi * std::abs(t);
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  // ln coth x = -ln tanh x; use log1p for the large-x regime.
  if (x > 1.0) {
    const double u = std::exp(-2.0 * x);
    return (2.0 / pi) * (std::log1p(u) - std::log1p(-u));
  }
  return -(2.0 / pi) * std::log(std::tanh(x));
}

TentSampler::TentSampler() {
  knots_.resize(kKnots);
  half_cdf_.resize(kKnots);
  constexpr double kMinTime = 1e-9;
  const double ratio = std::log(kMaxTime / kMinTime) / (kKnots - 1);
  for (int k = 0; k < kKnots; ++k) knots_[k] = kMinTime * std::exp(ratio * k);
  knots_.back() = kMaxTime;

  // Cumulative smooth part per interval; the singular part is closed form.
  double smooth = 0.0, previous = 0.0;
  for (int k = 0; k < kKnots; ++k) {
    smooth += legendre16().integrate(tent_smooth_part, previous, knots_[k]);
    previous = knots_[k];
    const double t = knots_[k];
    half_cdf_[k] = (2.0 / pi) * (t * (1.0 - std::log(0.5 * pi * t)) + smooth);
  }
  table_mass_ = half_cdf_.back();
}

const TentSampler& TentSampler::instance() {
  static const TentSampler sampler;
  return sampler;
}

double TentSampler::sample(Rng& rng) const {
  const double v = 0.5 * rng.uniform();
  const bool negative = rng.bit();
  double t;
  if (v < table_mass_) {
    const auto it = std::upper_bound(half_cdf_.begin(), half_cdf_.end(), v);
    const auto k = static_cast<std::size_t>(it - half_cdf_.begin());
    const double t0 = k == 0 ? 0.0 : knots_[k - 1];
    const double c0 = k == 0 ? 0.0 : half_cdf_[k - 1];
    const double t1 = knots_[k], c1 = half_cdf_[k];
    t = c1 > c0 ? t0 + (t1 - t0) * (v - c0) / (c1 - c0) : t0;
  } else {
    // Beyond the table the density is proportional to e^{-pi t}.
    t = kMaxTime - std::log1p(-rng.uniform()) / pi;
  }
  return negative ? -t : t;
}

double TentSampler::cdf(double t) const {
  const double a = std::abs(t);
  const double half = a <= kMaxTime ? tent_half_mass(a) : 0.5 - tent_tail_mass(a);
  return t >= 0.0 ? 0.5 + half : 0.5 - half;
}

double sample_tent(Rng& rng) { return TentSampler::instance().sample(rng); }

HadamardTest::HadamardTest(const ThermalModel& model) : model_(model) {}

const HadamardTest::Rotated& HadamardTest::rotated(const std::string& index) {
  auto it = cache_.find(index);
  if (it != cache_.end()) return it->second;
  if ((Eigen::Index{1} << index.size()) != model_.problem().dim()) {
    throw DomainError("Pauli string \"" + index + "\" does not match the system dimension");
  }
  Rotated r;
  r.pauli = model_.to_eigenbasis(pauli_matrix(index));
  r.sandwiched = r.pauli * model_.populations().cast<Complex>().asDiagonal() * r.pauli;
  r.mean = (r.pauli.diagonal().real().array() * model_.populations().array()).sum();
  return cache_.emplace(index, std::move(r)).first->second;
}

std::array<double, 4> HadamardTest::distribution(const std::string& k_index,
                                                 const std::string& l_index, double t) {
  const Rotated& k = rotated(k_index);
  const Rotated& l = rotated(l_index);
  const RealVector& p = model_.populations();
  const RealVector& energies = model_.energies();
  const Eigen::Index d = p.size();
  const double scale = t / model_.temperature();

  // In the eigenbasis of G, S = U^dagger sigma_l U has S_mn = e^{-i(E_m - E_n)t/T} (sigma_l)_mn.
  double overlap_sks = 0.0;  // Tr[S K rho K]
  double anti = 0.0;         // Tr[{S, K} rho]
  for (Eigen::Index m = 0; m < d; ++m) {
    Complex sk = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) {
      const Complex s_mn = std::polar(1.0, -(energies[m] - energies[n]) * scale) * l.pauli(m, n);
      sk += s_mn * k.pauli(n, m);
      overlap_sks += (s_mn * k.sandwiched(n, m)).real();
    }
    anti += 2.0 * p[m] * sk.real();
  }
  const double s_mean = l.mean;  // Tr[S rho] = Tr[sigma_l rho] since rho commutes with U

  std::array<double, 4> probs{};
  for (int lambda = 0; lambda < 2; ++lambda) {
    const double sign = lambda == 0 ? 1.0 : -1.0;
    const double branch_weight = 0.5 * (1.0 - sign * k.mean);
    const double branch_pauli = 0.25 * (s_mean + overlap_sks) - 0.25 * sign * anti;
    for (int gamma = 0; gamma < 2; ++gamma) {
      const double gsign = gamma == 0 ? 1.0 : -1.0;
      probs[2 * lambda + gamma] = std::max(0.0, 0.5 * (branch_weight + gsign * branch_pauli));
    }
  }
  const double total = probs[0] + probs[1] + probs[2] + probs[3];
  for (double& q : probs) q /= total;
  return probs;
}

std::array<double, 4> hadamard_test_distribution(const ThermalModel& model,
                                                 const std::string& k_index,
                                                 const std::string& l_index, double t) {
  validate_pauli_index(k_index);
  validate_pauli_index(l_index);
  HadamardTest test(model);
  return test.distribution(k_index, l_index, t);
}

long long anticommutator_shot_count(const PauliSum& a_i, const PauliSum& a_j, double eps,
                                    double delta) {
  return hoeffding_count(2.0 * a_i.one_norm() * a_j.one_norm(), eps, delta);
}

double estimate_anticommutator(const ThermalModel& model, const PauliSum& a_i,
                               const PauliSum& a_j, double eps, double delta, Rng& rng) {
  check_accuracy(eps, delta);
  if (a_i.empty() || a_j.empty()) throw DomainError("anticommutator estimate needs non-empty sums");
  check_qubits(model, a_i);
  check_qubits(model, a_j);

  const TermSampler sample_l(a_i);
  const TermSampler sample_k(a_j);
  const TentSampler& tent = TentSampler::instance();
  HadamardTest circuit(model);

  const long long shots = anticommutator_shot_count(a_i, a_j, eps, delta);
  long long tally = 0;
  for (long long n = 0; n < shots; ++n) {
    const PauliTerm& l = a_i.terms()[sample_l.sample(rng)];
    const PauliTerm& k = a_j.terms()[sample_k.sample(rng)];
    const double t = tent.sample(rng);
    const auto probs = circuit.distribution(k.index, l.index, t);
    const double u = rng.uniform();
    int outcome = 3;
    double acc = 0.0;
    for (int o = 0; o < 3; ++o) {
      acc += probs[o];
      if (u < acc) {
        outcome = o;
        break;
      }
    }
    // (-1)^(lambda + gamma): outcomes 00 and 11 give +1.
    const int parity = (outcome == 0 || outcome == 3) ? 1 : -1;
    const int sign = (l.coeff < 0.0) != (k.coeff < 0.0) ? -1 : 1;
    tally += parity * sign;
  }
  return a_i.one_norm() * a_j.one_norm() * static_cast<double>(tally) /
         static_cast<double>(shots);
}

double hessian_estimate(const ThermalModel& model, int i, int j, double eps, double delta,
                        Rng& rng) {
  const EnergyProblem& problem = model.problem();
  if (i < 0 || j < 0 || i >= problem.num_charges() || j >= problem.num_charges()) {
    throw DomainError("charge index out of range");
  }
  const auto& qi = problem.charge(i).pauli;
  const auto& qj = problem.charge(j).pauli;
  if (!qi || !qj) throw RepresentationError("Hessian estimation needs Pauli-encoded charges");
  if (qi->empty() || qj->empty()) return 0.0;
  const double mean_i = estimate_obs(model, *qi, eps, delta, rng);
  const double mean_j = estimate_obs(model, *qj, eps, delta, rng);
  const double anti = estimate_anticommutator(model, *qi, *qj, eps, delta, rng);
  return (mean_i * mean_j + anti) / model.temperature();
}

}  // namespace thermosdp
