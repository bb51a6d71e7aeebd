#include "thermosdp/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "thermosdp/error.hpp"
#include "thermosdp/numeric.hpp"
#include "thermosdp/oracle.hpp"
#include "thermosdp/report.hpp"

namespace thermosdp {

namespace {

using nlohmann::json;

SolverSettings effective_settings(const ProblemFile& file, const SolveFlags& flags) {
  SolverSettings s = file.solver;
  if (flags.mode) s.mode = *flags.mode;
  if (flags.epsilon) s.epsilon = *flags.epsilon;
  if (flags.delta) s.delta = *flags.delta;
  if (flags.radius) s.radius = *flags.radius;
  if (flags.replicates) s.replicates = *flags.replicates;
  if (s.replicates < 1) throw DomainError("replicate count must be positive");
  return s;
}

NewtonOptions newton_options(const SolverOverrides& o) {
  NewtonOptions n;
  if (o.eta) n.eta = *o.eta;
  if (o.iterations) n.iterations = *o.iterations;
  n.ridge = o.ridge;
  n.temperature = o.temperature;
  return n;
}

EnergyProblem stochastic_ready(const EnergyProblem& problem) {
  return problem.representation() == Representation::pauli ? problem
                                                           : problem.with_pauli_decomposition();
}

struct EnergyRun {
  std::vector<SolveReport> reports;  // replicate 0 first
  double radius = 0.0;
  int doublings = 0;
};

EnergyRun run_energy(const EnergyProblem& problem, const SolverSettings& s, std::uint64_t seed,
                     const SolveFlags& flags) {
  const SolveMode mode = parse_solve_mode(s.mode);
  EnergyRun run;
  run.radius = s.radius;
  const EnergyProblem working = mode == SolveMode::sga ? stochastic_ready(problem) : problem;
  auto solve_once = [&](double radius, int replicates) {
    switch (mode) {
      case SolveMode::exact:
        return std::vector<SolveReport>{gradient_ascent(working, s.epsilon, radius, s.overrides)};
      case SolveMode::newton:
        return std::vector<SolveReport>{
            natural_gradient_ascent(working, s.epsilon, radius, newton_options(s.overrides))};
      case SolveMode::sga:
        return sga_replicates(working, s.epsilon, s.delta, radius, seed, replicates,
                              flags.threads, s.overrides);
    }
    return std::vector<SolveReport>{};
  };
  if (flags.double_radius) {
    constexpr int kMaxDoublings = 10;
    while (true) {
      auto first = solve_once(run.radius, 1);
      if (first.front().mu_final.norm() < 0.99 * run.radius || run.doublings == kMaxDoublings) break;
      run.radius *= 2.0;
      ++run.doublings;
    }
  }
  run.reports = solve_once(run.radius, mode == SolveMode::sga ? s.replicates : 1);
  for (auto& r : run.reports) r.seed = seed;
  return run;
}

struct SdpRun {
  std::vector<SdpSolution> solutions;
  double radius = 0.0;
  double trace_bound = 0.0;
  int radius_doublings = 0;
  int trace_doublings = 0;
};

double padding_weight(const SdpProblem& sdp, const SdpSolution& sol) {
  const ReducedProblem reduced =
      sol.reduction == Reduction::direct_sum ? reduce_direct_sum(sdp) : reduce_qubit_embed(sdp);
  const Density rho = thermal_state(reduced.problem, sol.report.mu_final, sol.report.schedule.temperature);
  const RealVector diag = rho.entries().diagonal().real();
  if (sol.reduction == Reduction::direct_sum) return diag[diag.size() - 1];
  double total = 0.0;
  for (Eigen::Index k = 1; k < diag.size(); k += 2) total += diag[k];
  return total;
}

SdpRun run_sdp(const SdpProblem& base, const SolverSettings& s, std::uint64_t seed,
               const SolveFlags& flags) {
  const SolveMode mode = parse_solve_mode(s.mode);
  SdpRun run;
  run.radius = s.radius;
  run.trace_bound = base.trace_bound();
  SdpSolveOptions options;
  options.delta = s.delta;
  options.seed = seed;
  options.overrides = s.overrides;
  options.newton = newton_options(s.overrides);

  auto solve_once = [&](int replicates) {
    const SdpProblem sdp = base.with_trace_bound(run.trace_bound);
    std::vector<SdpSolution> out(static_cast<std::size_t>(replicates));
    parallel_for(out.size(), flags.threads, [&](std::size_t k) {
      SdpSolveOptions o = options;
      o.stream = k;
      out[k] = solve_sdp(sdp, s.epsilon, run.radius, mode, o);
    });
    return out;
  };
  constexpr int kMaxDoublings = 10;
  while (flags.double_radius || flags.double_trace) {
    const SdpSolution first = solve_once(1).front();
    if (flags.double_trace && run.trace_doublings < kMaxDoublings &&
        padding_weight(base.with_trace_bound(run.trace_bound), first) < 0.01) {
      run.trace_bound *= 2.0;
      ++run.trace_doublings;
      continue;
    }
    if (flags.double_radius && run.radius_doublings < kMaxDoublings &&
        first.report.mu_final.norm() >= 0.99 * run.radius) {
      run.radius *= 2.0;
      ++run.radius_doublings;
      continue;
    }
    break;
  }
  run.solutions = solve_once(mode == SolveMode::sga ? s.replicates : 1);
  for (auto& sol : run.solutions) sol.report.seed = seed;
  return run;
}

json replicate_summary(const std::vector<double>& estimates) {
  const double n = static_cast<double>(estimates.size());
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= n;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var = estimates.size() > 1 ? var / (n - 1.0) : 0.0;
  return {{"count", estimates.size()},
          {"estimates", estimates},
          {"mean", mean},
          {"std_error", std::sqrt(var / n)}};
}

std::string format(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

struct Oracle {
  bool available = false;
  double value = 0.0;
  std::string name;
};

Oracle energy_oracle(const EnergyProblem& problem) {
  Oracle o;
  try {
    const auto lp = oracle::lp_diagonal_energy(problem);
    if (lp.feasible) return {true, lp.value, "lp_diagonal"};
  } catch (const DomainError&) {
  }
  if (problem.dim() == 2 && !problem.has_inequalities()) {
    auto bloch = [](const Observable& obs) {
      const PauliSum s = obs.pauli ? *obs.pauli : decompose_pauli(obs.matrix);
      oracle::BlochObservable b;
      for (const auto& t : s.terms()) {
        const int slot = t.index == "X" ? 0 : t.index == "Y" ? 1 : t.index == "Z" ? 2 : -1;
        if (slot < 0) {
          b.identity += t.coeff;
        } else {
          b.vector[static_cast<std::size_t>(slot)] += t.coeff;
        }
      }
      return b;
    };
    std::vector<oracle::BlochObservable> charges;
    for (const auto& q : problem.charges()) charges.push_back(bloch(q));
    const auto r = oracle::bloch_energy(bloch(problem.hamiltonian()), charges, problem.targets());
    if (r.feasible) return {true, r.value, "bloch"};
  }
  return o;
}

void check(std::vector<VerifyCheck>& out, const std::string& name, bool pass,
           const std::string& detail) {
  out.push_back({name, pass, detail});
}

// Duality and derivative invariants at (mu, T) on an energy problem.
void thermal_checks(std::vector<VerifyCheck>& out, const EnergyProblem& problem,
                    const RealVector& mu, double temperature) {
  const ThermalModel model(problem, mu, temperature);
  const double f = model.dual_objective();
  const double primal = free_energy_primal(problem, model.state(), temperature) +
                        mu.dot(problem.targets()) - mu.dot(model.charge_expectations());
  check(out, "duality_identity", std::abs(f - primal) <= 1e-9,
        "|f - primal| = " + format(std::abs(f - primal)));
  if (problem.num_charges() == 0) return;

  const RealVector g = model.gradient();
  const RealVector g_fd = oracle::finite_diff_gradient(problem, mu, temperature);
  const double g_err = (g - g_fd).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff());
  check(out, "gradient_vs_finite_difference", g_err <= 1e-6, "relative error " + format(g_err));

  const RealMatrix hess = model.hessian();
  const RealMatrix hess_fd = oracle::finite_diff_hessian(problem, mu, temperature);
  const double h_scale = std::max(1.0, hess.cwiseAbs().maxCoeff());
  const double h_err = (hess - hess_fd).cwiseAbs().maxCoeff() / h_scale;
  check(out, "hessian_vs_finite_difference", h_err <= 1e-5, "relative error " + format(h_err));

  const RealMatrix km = model.kubo_mori();
  const RealMatrix km_q = oracle::km_quadrature(problem, mu, temperature);
  const double k_err = (km - km_q).cwiseAbs().maxCoeff() / std::max(1.0, km.cwiseAbs().maxCoeff());
  check(out, "kubo_mori_vs_quadrature", k_err <= 1e-8, "relative error " + format(k_err));
  const double min_eig = Eigen::SelfAdjointEigenSolver<RealMatrix>(km).eigenvalues()[0];
  check(out, "kubo_mori_psd", min_eig >= -1e-10 * h_scale, "min eigenvalue " + format(min_eig));

  bool bounded = true;
  for (int i = 0; i < problem.num_charges(); ++i)
    for (int j = 0; j < problem.num_charges(); ++j) {
      const double bound = 2.0 / temperature * problem.charge(i).matrix.spectral_norm() *
                           problem.charge(j).matrix.spectral_norm();
      if (std::abs(hess(i, j)) > bound * (1.0 + 1e-12) + 1e-15) bounded = false;
    }
  check(out, "hessian_entry_bound", bounded, "|H_ij| <= (2/T)|Q_i||Q_j|");
}

void energy_oracle_checks(std::vector<VerifyCheck>& out, const EnergyProblem& problem,
                          const SolveReport& report, double eps, bool stochastic) {
  const Oracle o = energy_oracle(problem);
  if (!o.available) {
    check(out, "oracle", true, "no exact oracle for this instance; skipped");
    return;
  }
  const double temperature = report.schedule.temperature;
  check(out, "weak_duality", report.final_objective <= o.value + 1e-9,
        "f(mu_final) = " + format(report.final_objective) + ", E = " + format(o.value) + " (" +
            o.name + ")");
  if (problem.num_charges() <= 2 && !problem.has_inequalities()) {
    oracle::DualScanOptions scan;
    scan.bound = std::max(10.0, 4.0 * report.mu_final.norm());
    const double free_energy = oracle::dual_scan(problem, temperature, scan).objective;
    const double gap = temperature * std::log(static_cast<double>(problem.dim()));
    check(out, "free_energy_sandwich",
          free_energy <= o.value + 1e-9 && free_energy >= o.value - gap - 1e-9,
          "E - T ln d <= F_T <= E with F_T = " + format(free_energy));
  }
  const double err = std::abs(report.estimate - o.value);
  if (stochastic) {
    check(out, "estimate_accuracy", true,
          "stochastic estimate off by " + format(err) + " (guarantee holds in expectation; not gated)");
  } else {
    check(out, "estimate_accuracy", err <= eps,
          "|estimate - E| = " + format(err) + " vs epsilon " + format(eps));
  }
}

}  // namespace

std::uint64_t resolve_seed(const ProblemFile& file, const SolveFlags& flags) {
  if (flags.seed) return *flags.seed;
  if (file.solver.seed) return *file.solver.seed;
  if (const char* env = std::getenv("THERMOSDP_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw DomainError(std::string("THERMOSDP_SEED is not a non-negative integer: ") + env);
  }
  return 0;
}

json cmd_solve(const ProblemFile& file, const SolveFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const SolverSettings s = effective_settings(file, flags);
  const std::uint64_t seed = resolve_seed(file, flags);

  ProblemFile echo = file;
  echo.solver = s;
  echo.solver.seed = seed;
  json out;
  out["version"] = kVersion;
  out["input"] = to_json(echo);

  std::vector<double> estimates;
  if (file.is_sdp()) {
    const SdpRun run = run_sdp(file.sdp_problem(), s, seed, flags);
    const SdpSolution& main = run.solutions.front();
    out.update(to_json(main.report));
    out["sdp"] = {{"reduction", to_string(main.reduction)},
                  {"R", main.trace_bound},
                  {"reduced_dimension", main.reduced_dim},
                  {"padding_weight", padding_weight(file.sdp_problem().with_trace_bound(run.trace_bound), main)},
                  {"trace_doublings", run.trace_doublings}};
    out["radius_doublings"] = run.radius_doublings;
    for (const auto& sol : run.solutions) estimates.push_back(sol.report.estimate);
  } else {
    const EnergyRun run = run_energy(file.energy_problem(), s, seed, flags);
    out.update(to_json(run.reports.front()));
    out["radius_doublings"] = run.doublings;
    for (const auto& r : run.reports) estimates.push_back(r.estimate);
  }
  if (estimates.size() > 1) out["replicates"] = replicate_summary(estimates);
  out["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<VerifyCheck> cmd_verify(const ProblemFile& file, const SolveFlags& flags) {
  const SolverSettings s = effective_settings(file, flags);
  const std::uint64_t seed = resolve_seed(file, flags);
  const bool stochastic = parse_solve_mode(s.mode) == SolveMode::sga;
  std::vector<VerifyCheck> out;

  if (!file.is_sdp()) {
    const EnergyProblem problem = file.energy_problem();
    SolveFlags single = flags;
    single.replicates = 1;
    const EnergyRun run = run_energy(problem, s, seed, single);
    const SolveReport& report = run.reports.front();
    thermal_checks(out, problem, report.mu_final, report.schedule.temperature);
    energy_oracle_checks(out, problem, report, s.epsilon, stochastic);
    return out;
  }

  const SdpProblem sdp = file.sdp_problem();
  const SdpRun run = run_sdp(sdp, s, seed, flags);
  const SdpSolution& sol = run.solutions.front();
  const SdpProblem used = sdp.with_trace_bound(sol.trace_bound);
  const ReducedProblem reduced =
      sol.reduction == Reduction::direct_sum ? reduce_direct_sum(used) : reduce_qubit_embed(used);
  thermal_checks(out, reduced.problem, sol.report.mu_final, sol.report.schedule.temperature);

  bool diagonal = true;
  RealVector cost;
  RealMatrix rows(sdp.num_constraints(), sdp.dim());
  auto diag_of = [&](const Observable& o) {
    const Matrix& m = o.matrix.entries();
    Matrix off = m;
    off.diagonal().setZero();
    if (off.size() > 0 && off.cwiseAbs().maxCoeff() > 1e-10) diagonal = false;
    return RealVector(m.diagonal().real());
  };
  cost = diag_of(sdp.objective());
  for (int i = 0; i < sdp.num_constraints(); ++i) {
    rows.row(i) = diag_of(sdp.constraints()[static_cast<std::size_t>(i)]).transpose();
  }
  if (!diagonal) {
    check(out, "oracle", true, "SDP is not diagonal; LP oracle skipped");
    return out;
  }
  const auto alpha = oracle::lp_standard_form(cost, rows, sdp.bounds(), sdp.senses());
  const auto alpha_r = oracle::lp_diagonal_energy(reduce_direct_sum(used).problem);
  if (!alpha.feasible || !alpha_r.feasible) {
    check(out, "oracle", true, "LP oracle reports infeasibility at this R; skipped");
    return out;
  }
  const double alpha_r_value = alpha_r.value * sol.trace_bound;
  check(out, "alpha_R_ge_alpha", alpha_r_value >= alpha.value - 1e-9,
        "alpha_R = " + format(alpha_r_value) + ", alpha = " + format(alpha.value));
  const double err = std::abs(sol.report.estimate - alpha_r_value);
  check(out, "estimate_accuracy", stochastic || err <= s.epsilon,
        "|estimate - alpha_R| = " + format(err) + " vs epsilon " + format(s.epsilon) +
            (stochastic ? " (stochastic; not gated)" : ""));
  return out;
}

void cmd_bench(const BenchSpec& spec, std::ostream& csv) {
  const SolveMode mode = parse_solve_mode(spec.mode);
  csv << "mode,d,c,epsilon,radius_r,T,L,M,eta,samples,time_s,estimate,oracle,gap\n";
  csv << std::setprecision(12);
  const Rng rng(spec.seed);
  std::uint64_t row = 0;
  for (int d : spec.dims) {
    if (d < 2) throw DomainError("bench dimensions must be at least 2");
    for (double eps : spec.epsilons) {
      EnergyProblem problem = [&] {
        std::vector<Observable> qs;
        RealVector qt(spec.charges);
        Rng local = rng.substream(row++);
        auto diag = [&] {
          Matrix m = Matrix::Zero(d, d);
          for (int k = 0; k < d; ++k) m(k, k) = 2.0 * local.uniform() - 1.0;
          return m;
        };
        const Matrix hm = diag();
        RealVector w(d);
        for (int k = 0; k < d; ++k) w[k] = 0.5 + local.uniform();
        w /= w.sum();
        for (int i = 0; i < spec.charges; ++i) {
          const Matrix qm = diag();
          qt[i] = qm.diagonal().real().dot(w);
          qs.push_back(Observable::from_dense(SpectralHermitian(qm)));
        }
        return EnergyProblem(Observable::from_dense(SpectralHermitian(hm)), std::move(qs), qt);
      }();

      const auto start = std::chrono::steady_clock::now();
      SolveReport report;
      if (mode == SolveMode::exact) {
        report = gradient_ascent(problem, eps, spec.radius);
      } else if (mode == SolveMode::newton) {
        report = natural_gradient_ascent(problem, eps, spec.radius);
      } else {
        Rng solver_rng(spec.seed);
        report = sga(stochastic_ready(problem), eps, spec.delta, spec.radius, solver_rng);
      }
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const Oracle o = energy_oracle(problem);
      csv << spec.mode << ',' << d << ',' << spec.charges << ',' << eps << ',' << spec.radius
          << ',' << report.schedule.temperature << ','
          << report.schedule.smoothness.value_or(0.0) << ',' << report.schedule.iterations << ','
          << report.schedule.eta << ',' << report.sample_count << ',' << seconds << ','
          << report.estimate << ',';
      if (o.available) {
        csv << o.value << ',' << report.estimate - o.value;
      } else {
        csv << ',';
      }
      csv << '\n';
    }
  }
}

}  // namespace thermosdp

namespace thermosdp {

namespace {

void add_solve_flags(CLI::App& cmd, SolveFlags& flags, std::optional<std::string>& mode,
                     std::optional<double>& eps, std::optional<double>& delta,
                     std::optional<double>& radius, std::optional<std::uint64_t>& seed,
                     std::optional<int>& replicates) {
  cmd.add_option("--mode", mode, "Solver backend")->check(CLI::IsMember({"exact", "sga", "newton"}));
  cmd.add_option("--epsilon", eps, "Target accuracy")->check(CLI::PositiveNumber);
  cmd.add_option("--delta", delta, "Failure probability of each estimate")->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--radius", radius, "Bound r on the optimal chemical potentials")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", seed, "RNG seed (falls back to THERMOSDP_SEED)");
  cmd.add_option("--replicates", replicates, "Independent stochastic runs")->check(CLI::PositiveNumber);
  cmd.add_flag("--double-radius", flags.double_radius, "Double r while |mu_final| >= 0.99 r");
  cmd.add_flag("--double-trace", flags.double_trace, "Double R while the padding weight is below 0.01");
  cmd.add_option("--threads", flags.threads, "Worker threads for replicates")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained energy minimization and SDP solving via thermal-state dual ascent",
               "thermosdp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SolveFlags flags;
  std::optional<std::string> mode;
  std::optional<double> eps, delta, radius;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;

  std::string solve_path, output_path;
  auto* solve = app.add_subcommand("solve", "Solve a problem file and print a JSON report");
  solve->add_option("problem", solve_path, "Problem file (JSON)")->required();
  solve->add_option("-o,--output", output_path, "Write the report here instead of stdout");
  add_solve_flags(*solve, flags, mode, eps, delta, radius, seed, replicates);

  std::vector<std::string> verify_paths;
  auto* verify = app.add_subcommand("verify", "Solve and check invariants against exact oracles");
  verify->add_option("problems", verify_paths, "Problem files (JSON)")->required();
  add_solve_flags(*verify, flags, mode, eps, delta, radius, seed, replicates);

  BenchSpec bench_spec;
  std::string bench_output;
  auto* bench = app.add_subcommand("bench", "Sweep random diagonal instances and print CSV");
  bench->add_option("--dims", bench_spec.dims, "Dimensions to sweep")->delimiter(',');
  bench->add_option("--epsilons", bench_spec.epsilons, "Accuracies to sweep")->delimiter(',');
  bench->add_option("--charges", bench_spec.charges, "Constraints per instance")->check(CLI::NonNegativeNumber);
  bench->add_option("--radius", bench_spec.radius, "Radius r")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_spec.seed, "Instance and solver seed");
  bench->add_option("--mode", bench_spec.mode, "Solver backend")->check(CLI::IsMember({"exact", "sga", "newton"}));
  bench->add_option("--delta", bench_spec.delta, "Failure probability (sga)")->check(CLI::Range(0.0, 1.0));
  bench->add_option("-o,--output", bench_output, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (e.get_name() == "CallForVersion" ? std::string(kVersion) + "\n" : app.help());
      return exit_code::ok;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return exit_code::usage;
  }
  flags.mode = mode;
  flags.epsilon = eps;
  flags.delta = delta;
  flags.radius = radius;
  flags.seed = seed;
  flags.replicates = replicates;

  try {
    if (solve->parsed()) {
      const json report = cmd_solve(parse_problem_file(solve_path), flags);
      if (output_path.empty()) {
        out << dump(report);
      } else {
        std::ofstream file(output_path);
        if (!file) throw DomainError("cannot write " + output_path);
        file << dump(report);
      }
      return exit_code::ok;
    }
    if (verify->parsed()) {
      bool all = true;
      for (const auto& path : verify_paths) {
        out << path << "\n";
        for (const auto& c : cmd_verify(parse_problem_file(path), flags)) {
          out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
          all = all && c.pass;
        }
      }
      out << (all ? "all checks passed" : "some checks failed") << "\n";
      return all ? exit_code::ok : exit_code::verify_failed;
    }
    if (bench->parsed()) {
      if (bench_output.empty()) {
        cmd_bench(bench_spec, out);
      } else {
        std::ofstream file(bench_output);
        if (!file) throw DomainError("cannot write " + bench_output);
        cmd_bench(bench_spec, file);
      }
      return exit_code::ok;
    }
  } catch (const ParseError& e) {
    err << "parse error";
    if (!e.field().empty()) err << " at " << e.field();
    err << ": " << e.what() << "\n";
    return exit_code::parse;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return exit_code::numeric;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << "\n";
    return exit_code::parse;
  }
  return exit_code::usage;
}

}  // namespace thermosdp
