#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermosdp/optimize.hpp"
#include "thermosdp/problem.hpp"

namespace thermosdp {

/// min Tr[C X] s.t. Tr[A_i X] = b_i (or >= b_i), X >= 0, with trace guess R.
class SdpProblem {
 public:
  SdpProblem(Observable objective, std::vector<Observable> constraints, RealVector bounds,
             double trace_bound, std::vector<ConstraintSense> senses = {});

  Eigen::Index dim() const { return objective_.dim(); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const Observable& objective() const { return objective_; }
  const std::vector<Observable>& constraints() const { return constraints_; }
  const RealVector& bounds() const { return bounds_; }
  const std::vector<ConstraintSense>& senses() const { return senses_; }
  double trace_bound() const { return trace_bound_; }
  Representation representation() const;

  SdpProblem with_trace_bound(double trace_bound) const;

 private:
  Observable objective_;
  std::vector<Observable> constraints_;
  RealVector bounds_;
  std::vector<ConstraintSense> senses_;
  double trace_bound_;
};

enum class Reduction { direct_sum, qubit_embed };

std::string to_string(Reduction reduction);

struct ReducedProblem {
  EnergyProblem problem;
  double scale;  // alpha_R = scale * E(reduced)
  Reduction reduction;
};

/// C (+) [0], A_i (+) [0], b_i / R on dimension d + 1.
ReducedProblem reduce_direct_sum(const SdpProblem& sdp);
/// C (x) |0><0|, A_i (x) |0><0|, b_i / R on dimension 2d. Pauli terms sigma
/// become (sigma (x) I + sigma (x) Z) / 2 on an appended last qubit.
ReducedProblem reduce_qubit_embed(const SdpProblem& sdp);

struct SdpSolveOptions {
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // substream of seed used by the stochastic backend
  SolverOverrides overrides;
  NewtonOptions newton;
  /// Default: direct sum for exact/newton, qubit embedding for sga.
  std::optional<Reduction> reduction;
};

struct SdpSolution {
  SolveReport report;  // estimate is the alpha_R estimate; other fields refer to the reduced problem
  Reduction reduction = Reduction::direct_sum;
  double trace_bound = 0.0;
  Eigen::Index reduced_dim = 0;
};

/// Ascent schedule used by the exact backend: the reduced problem at accuracy eps / R.
GdSchedule sdp_schedule(const SdpProblem& sdp, double eps, double radius);

SdpSolution solve_sdp(const SdpProblem& sdp, double eps, double radius, SolveMode mode,
                      const SdpSolveOptions& options = {});

}  // namespace thermosdp
