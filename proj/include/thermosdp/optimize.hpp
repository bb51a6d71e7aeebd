#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermosdp/problem.hpp"
#include "thermosdp/random.hpp"
#include "thermosdp/thermal.hpp"

namespace thermosdp {

enum class SolveMode { exact, sga, newton };

std::string to_string(SolveMode mode);
/// Accepts "exact", "sga" or "newton"; throws DomainError otherwise.
SolveMode parse_solve_mode(const std::string& name);

struct GdSchedule {
  double temperature = 0.0;
  double smoothness = 0.0;
  double eta = 0.0;
  double radius = 0.0;
  double epsilon = 0.0;
  long long iterations = 0;
};

struct SgaSchedule {
  double temperature = 0.0;
  double sigma2 = 0.0;
  double eta = 0.0;
  double radius = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  long long iterations = 0;
};

/// Schedule constants as recorded in a report. Fields that a backend does not
/// use stay empty.
struct ScheduleSummary {
  double temperature = 0.0;
  std::optional<double> smoothness;
  long long iterations = 0;
  double eta = 0.0;
  double radius = 0.0;
  double epsilon = 0.0;
  std::optional<double> sigma2;
  std::optional<double> delta;
  std::optional<double> ridge;

  static ScheduleSummary from(const GdSchedule& s);
  static ScheduleSummary from(const SgaSchedule& s);
};

/// Optional replacements for schedule constants.
struct SolverOverrides {
  std::optional<double> temperature;
  std::optional<double> eta;
  std::optional<double> ridge;
  std::optional<long long> iterations;
};

struct SolveDiagnostics {
  RealVector mu_best;             // argmax of f along the run
  long long best_iteration = 0;
  double best_objective = 0.0;
  long long iterations_run = 0;
  int fallback_steps = 0;         // Newton steps that fell back to a gradient step
  int backtracks = 0;             // step halvings
};

struct SolveReport {
  SolveMode mode = SolveMode::exact;
  double estimate = 0.0;
  RealVector mu_final;
  std::vector<double> objective_trace;
  ScheduleSummary schedule;
  long long sample_count = 0;
  std::uint64_t seed = 0;
  /// f at mu_final and q - <Q> there.
  double final_objective = 0.0;
  RealVector residuals;
  SolveDiagnostics diagnostics;
};

/// L = (2/T) sum_i nb_i^2, nb the charge norm bound for the problem's representation.
double smoothness(const EnergyProblem& problem, double temperature);

GdSchedule schedule_gd(const EnergyProblem& problem, double eps, double radius,
                       const SolverOverrides& overrides = {});
SgaSchedule schedule_sga(const EnergyProblem& problem, double eps, double delta, double radius,
                         const SolverOverrides& overrides = {});

/// Euclidean projection onto the ball of radius r.
RealVector project_ball(const RealVector& v, double radius);
/// Projection onto {||mu|| <= r, mu_i >= 0 for ">=" constraints}.
RealVector project_feasible(const RealVector& v, double radius,
                            const std::vector<ConstraintSense>& senses);

/// Exact-gradient ascent from mu = 0; returns the energy read-out at the last iterate.
SolveReport gradient_ascent(const EnergyProblem& problem, double eps, double radius,
                            const SolverOverrides& overrides = {});

/// Projected stochastic gradient ascent with shot-based gradient estimates.
SolveReport sga(const EnergyProblem& problem, double eps, double delta, double radius, Rng& rng,
                const SolverOverrides& overrides = {});

/// Runs `replicates` independent SGA solves; replicate k uses substream k of `seed`.
std::vector<SolveReport> sga_replicates(const EnergyProblem& problem, double eps, double delta,
                                        double radius, std::uint64_t seed, int replicates,
                                        unsigned threads, const SolverOverrides& overrides = {});

struct NewtonOptions {
  double eta = 1.0;
  long long iterations = 50;
  std::optional<double> ridge;        // default 1e-8 tr(KM) / max(c, 1)
  std::optional<double> temperature;  // default eps / (4 ln d)
  double tolerance = 1e-12;
};

/// Damped Newton ascent in the Kubo-Mori metric: (KM + ridge) delta = grad f,
/// mu <- proj(mu + eta delta), halving eta whenever f would decrease.
SolveReport natural_gradient_ascent(const EnergyProblem& problem, double eps, double radius,
                                    const NewtonOptions& options = {});

}  // namespace thermosdp
