#include "thermosdp/optimize.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "thermosdp/error.hpp"
#include "thermosdp/numeric.hpp"
#include "thermosdp/sampling.hpp"

namespace thermosdp {

namespace {

void check_schedule_inputs(double eps, double radius) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("epsilon must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("radius must be positive");
}

double default_temperature(const EnergyProblem& problem, double eps) {
  if (problem.dim() < 2) throw DomainError("dimension must be at least 2 (ln d > 0)");
  return eps / (4.0 * std::log(static_cast<double>(problem.dim())));
}

double sum_squared_norm_bounds(const EnergyProblem& problem) {
  double total = 0.0;
  for (int i = 0; i < problem.num_charges(); ++i) {
    const double nb = problem.charge_norm_bound(i);
    total += nb * nb;
  }
  return total;
}

double sum_squared_one_norms(const EnergyProblem& problem) {
  double total = 0.0;
  for (const auto& q : problem.charges()) {
    if (!q.pauli) throw RepresentationError("stochastic ascent needs Pauli-encoded charges");
    const double n = q.pauli->one_norm();
    total += n * n;
  }
  return total;
}

void require_finite(double value, long long iteration) {
  if (!std::isfinite(value)) {
    throw NumericError("non-finite dual objective at iteration " + std::to_string(iteration),
                       static_cast<long>(iteration));
  }
}

void finish(SolveReport& report, const ThermalModel& model) {
  report.final_objective = model.dual_objective();
  report.residuals = model.gradient();
  report.mu_final = model.mu();
}

void track_best(SolveDiagnostics& diag, const RealVector& mu, double f, long long iteration) {
  if (iteration == 0 || f > diag.best_objective) {
    diag.best_objective = f;
    diag.best_iteration = iteration;
    diag.mu_best = mu;
  }
}

}  // namespace

std::string to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::exact:
      return "exact";
    case SolveMode::sga:
      return "sga";
    case SolveMode::newton:
      return "newton";
  }
  return "exact";
}

SolveMode parse_solve_mode(const std::string& name) {
  if (name == "exact") return SolveMode::exact;
  if (name == "sga") return SolveMode::sga;
  if (name == "newton") return SolveMode::newton;
  throw DomainError("unknown solver mode \"" + name + "\" (expected exact, sga or newton)");
}

ScheduleSummary ScheduleSummary::from(const GdSchedule& s) {
  ScheduleSummary out;
  out.temperature = s.temperature;
  out.smoothness = s.smoothness;
  out.iterations = s.iterations;
  out.eta = s.eta;
  out.radius = s.radius;
  out.epsilon = s.epsilon;
  return out;
}

ScheduleSummary ScheduleSummary::from(const SgaSchedule& s) {
  ScheduleSummary out;
  out.temperature = s.temperature;
  out.iterations = s.iterations;
  out.eta = s.eta;
  out.radius = s.radius;
  out.epsilon = s.epsilon;
  out.sigma2 = s.sigma2;
  out.delta = s.delta;
  return out;
}

double smoothness(const EnergyProblem& problem, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  return 2.0 / temperature * sum_squared_norm_bounds(problem);
}

GdSchedule schedule_gd(const EnergyProblem& problem, double eps, double radius,
                       const SolverOverrides& overrides) {
  check_schedule_inputs(eps, radius);
  GdSchedule s;
  s.epsilon = eps;
  s.radius = radius;
  const double norms = sum_squared_norm_bounds(problem);
  if (overrides.temperature) {
    if (!(*overrides.temperature > 0.0)) throw DomainError("temperature must be positive");
    s.temperature = *overrides.temperature;
    s.smoothness = smoothness(problem, s.temperature);
    s.iterations = ceil_count(s.smoothness * radius * radius / eps);
  } else {
    const double log_d = std::log(static_cast<double>(problem.dim()));
    s.temperature = default_temperature(problem, eps);
    s.smoothness = smoothness(problem, s.temperature);
    s.iterations = ceil_count(8.0 * radius * radius * log_d * norms / (eps * eps));
  }
  s.eta = s.smoothness > 0.0 ? 1.0 / s.smoothness : 0.0;
  if (overrides.eta) {
    if (!(*overrides.eta > 0.0)) throw DomainError("step size must be positive");
    s.eta = *overrides.eta;
  }
  if (overrides.iterations) {
    if (*overrides.iterations < 0) throw DomainError("iteration count must be non-negative");
    s.iterations = *overrides.iterations;
  }
  return s;
}

SgaSchedule schedule_sga(const EnergyProblem& problem, double eps, double delta, double radius,
                         const SolverOverrides& overrides) {
  check_schedule_inputs(eps, radius);
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("failure probability must lie in (0, 1)");
  const double norms = sum_squared_one_norms(problem);
  const double c = problem.num_charges();
  SgaSchedule s;
  s.epsilon = eps;
  s.delta = delta;
  s.radius = radius;
  const double log_d = std::log(static_cast<double>(problem.dim()));
  s.temperature = overrides.temperature ? *overrides.temperature : default_temperature(problem, eps);
  if (!(s.temperature > 0.0)) throw DomainError("temperature must be positive");
  s.sigma2 = c * eps * eps + delta * norms;
  const double sigma = std::sqrt(s.sigma2);
  s.iterations = ceil_count(16.0 * radius * radius / (eps * eps) *
                            (2.0 * s.sigma2 + 8.0 * log_d * norms));
  if (overrides.iterations) {
    if (*overrides.iterations < 0) throw DomainError("iteration count must be non-negative");
    s.iterations = *overrides.iterations;
  }
  const double denominator = 8.0 * log_d / eps * norms +
                             sigma / radius * std::sqrt(static_cast<double>(s.iterations) / 2.0);
  s.eta = denominator > 0.0 ? 1.0 / denominator : 0.0;
  if (overrides.eta) {
    if (!(*overrides.eta > 0.0)) throw DomainError("step size must be positive");
    s.eta = *overrides.eta;
  }
  return s;
}

RealVector project_ball(const RealVector& v, double radius) {
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  const double norm = v.norm();
  if (norm <= radius) return v;
  RealVector out = v * (radius / norm);
  // rounding can leave the scaled vector a few ulps outside; pull it in so projection is idempotent
  double factor = 1.0;
  while (out.norm() > radius) {
    factor = std::nextafter(factor, 0.0);
    out = v * (radius / norm * factor);
  }
  return out;
}

RealVector project_feasible(const RealVector& v, double radius,
                            const std::vector<ConstraintSense>& senses) {
  RealVector clamped = v;
  for (Eigen::Index i = 0; i < clamped.size() && i < static_cast<Eigen::Index>(senses.size());
       ++i) {
    if (senses[static_cast<std::size_t>(i)] == ConstraintSense::ge) {
      clamped[i] = std::max(0.0, clamped[i]);
    }
  }
  return project_ball(clamped, radius);
}

SolveReport gradient_ascent(const EnergyProblem& problem, double eps, double radius,
                            const SolverOverrides& overrides) {
  const GdSchedule schedule = schedule_gd(problem, eps, radius, overrides);
  SolveReport report;
  report.mode = SolveMode::exact;
  report.schedule = ScheduleSummary::from(schedule);

  RealVector mu = RealVector::Zero(problem.num_charges());
  ThermalModel model(problem, mu, schedule.temperature);
  report.objective_trace.reserve(static_cast<std::size_t>(schedule.iterations) + 1);
  for (long long m = 0;; ++m) {
    const double f = model.dual_objective();
    require_finite(f, m);
    report.objective_trace.push_back(f);
    track_best(report.diagnostics, mu, f, m);
    if (m == schedule.iterations) break;
    mu += schedule.eta * model.gradient();
    if (problem.has_inequalities()) {
      for (int i = 0; i < problem.num_charges(); ++i) {
        if (problem.senses()[static_cast<std::size_t>(i)] == ConstraintSense::ge) {
          mu[i] = std::max(0.0, mu[i]);
        }
      }
    }
    model = ThermalModel(problem, mu, schedule.temperature);
  }
  report.diagnostics.iterations_run = schedule.iterations;
  report.estimate = model.energy_estimate();
  require_finite(report.estimate, schedule.iterations);
  finish(report, model);
  return report;
}

SolveReport sga(const EnergyProblem& problem, double eps, double delta, double radius, Rng& rng,
                const SolverOverrides& overrides) {
  if (problem.representation() != Representation::pauli) {
    throw RepresentationError("stochastic ascent needs Pauli-encoded observables");
  }
  const SgaSchedule schedule = schedule_sga(problem, eps, delta, radius, overrides);
  const int c = problem.num_charges();
  SolveReport report;
  report.mode = SolveMode::sga;
  report.schedule = ScheduleSummary::from(schedule);
  report.seed = rng.seed();

  const RealVector& q = problem.targets();
  RealVector mu = RealVector::Zero(c);
  RealVector mu_sum = RealVector::Zero(c);
  report.objective_trace.reserve(static_cast<std::size_t>(schedule.iterations) + 1);
  for (long long m = 0;; ++m) {
    const ThermalModel model(problem, mu, schedule.temperature);
    const double f = model.dual_objective();
    require_finite(f, m);
    report.objective_trace.push_back(f);
    track_best(report.diagnostics, mu, f, m);
    if (m == schedule.iterations) break;
    RealVector step(c);
    for (int i = 0; i < c; ++i) {
      const PauliSum& a = *problem.charge(i).pauli;
      step[i] = q[i] - estimate_obs(model, a, eps, delta, rng);
      report.sample_count += observable_shot_count(a, eps, delta);
    }
    mu = project_feasible(mu + schedule.eta * step, radius, problem.senses());
    mu_sum += mu;
  }
  report.diagnostics.iterations_run = schedule.iterations;

  const RealVector mu_avg =
      schedule.iterations > 0 ? RealVector(mu_sum / static_cast<double>(schedule.iterations)) : mu;
  const ThermalModel averaged(problem, mu_avg, schedule.temperature);
  PauliSum g = *problem.hamiltonian().pauli;
  for (int i = 0; i < c; ++i) g = g.combined(1.0, *problem.charge(i).pauli, -mu_avg[i]);
  report.estimate = mu_avg.dot(q) + estimate_obs(averaged, g, eps / 4.0, delta, rng);
  report.sample_count += observable_shot_count(g, eps / 4.0, delta);
  require_finite(report.estimate, schedule.iterations);
  finish(report, averaged);
  return report;
}

std::vector<SolveReport> sga_replicates(const EnergyProblem& problem, double eps, double delta,
                                        double radius, std::uint64_t seed, int replicates,
                                        unsigned threads, const SolverOverrides& overrides) {
  if (replicates < 1) throw DomainError("replicate count must be positive");
  std::vector<SolveReport> out(static_cast<std::size_t>(replicates));
  const Rng root(seed);
  parallel_for(out.size(), threads, [&](std::size_t k) {
    Rng rng = root.substream(k);
    out[k] = sga(problem, eps, delta, radius, rng, overrides);
    out[k].seed = seed;
  });
  return out;
}

SolveReport natural_gradient_ascent(const EnergyProblem& problem, double eps, double radius,
                                    const NewtonOptions& options) {
  check_schedule_inputs(eps, radius);
  if (!(options.eta > 0.0)) throw DomainError("step size must be positive");
  if (options.iterations < 0) throw DomainError("iteration count must be non-negative");
  if (options.ridge && !(*options.ridge >= 0.0)) throw DomainError("ridge must be non-negative");
  const double temperature =
      options.temperature ? *options.temperature : default_temperature(problem, eps);
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  const int c = problem.num_charges();
  const double lipschitz = smoothness(problem, temperature);
  const double metric_scale = sum_squared_norm_bounds(problem) / temperature;

  SolveReport report;
  report.mode = SolveMode::newton;
  report.schedule.temperature = temperature;
  report.schedule.smoothness = lipschitz;
  report.schedule.iterations = options.iterations;
  report.schedule.eta = options.eta;
  report.schedule.radius = radius;
  report.schedule.epsilon = eps;

  RealVector mu = RealVector::Zero(c);
  ThermalModel model(problem, mu, temperature);
  double f = model.dual_objective();
  require_finite(f, 0);
  report.objective_trace.push_back(f);
  track_best(report.diagnostics, mu, f, 0);

  long long m = 0;
  for (; m < options.iterations; ++m) {
    const RealVector g = model.gradient();
    if (g.size() == 0 || g.norm() <= options.tolerance) break;

    const RealMatrix km = model.kubo_mori();
    const double ridge = options.ridge ? *options.ridge : 1e-8 * km.trace() / std::max(c, 1);
    if (m == 0) report.schedule.ridge = ridge;
    const RealMatrix system = km + ridge * RealMatrix::Identity(c, c);
    const Eigen::SelfAdjointEigenSolver<RealMatrix> solver(system);
    const RealVector& lambda = solver.eigenvalues();
    const RealVector fallback = g * (radius / g.norm());
    RealVector candidate;
    auto line_search = [&](const RealVector& direction) {
      double eta = options.eta;
      for (int halving = 0; halving <= 30; ++halving) {
        candidate = project_feasible(mu + eta * direction, radius, problem.senses());
        ThermalModel trial(problem, candidate, temperature);
        const double f_new = trial.dual_objective();
        if (std::isfinite(f_new) && f_new >= f + 1e-4 * g.dot(candidate - mu)) {
          model = std::move(trial);
          f = f_new;
          return true;
        }
        eta *= 0.5;
        ++report.diagnostics.backtracks;
      }
      return false;
    };

    bool accepted = false;
    if (solver.info() == Eigen::Success && lambda[0] > 1e-12 * metric_scale) {
      const RealMatrix& v = solver.eigenvectors();
      accepted = line_search(v * (v.transpose() * g).cwiseQuotient(lambda));
    }
    if (!accepted) {
      // gradient direction, first trial step reaching across the ball
      ++report.diagnostics.fallback_steps;
      accepted = line_search(fallback);
    }
    if (!accepted) break;
    const double moved = (candidate - mu).norm();
    mu = candidate;
    report.objective_trace.push_back(f);
    track_best(report.diagnostics, mu, f, m + 1);
    if (moved <= options.tolerance * std::max(1.0, mu.norm())) {
      ++m;
      break;
    }
  }
  report.diagnostics.iterations_run = m;
  report.estimate = model.energy_estimate();
  require_finite(report.estimate, m);
  finish(report, model);
  return report;
}

}  // namespace thermosdp
