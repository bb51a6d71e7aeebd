#include "thermosdp/sdp.hpp"

#include <cmath>

#include "thermosdp/error.hpp"

namespace thermosdp {

namespace {

Matrix direct_sum_zero(const Matrix& a) {
  const Eigen::Index d = a.rows();
  Matrix out = Matrix::Zero(d + 1, d + 1);
  out.topLeftCorner(d, d) = a;
  return out;
}

// a (x) |0><0| with the new qubit least significant.
Matrix embed_zero_projector(const Matrix& a) {
  const Eigen::Index d = a.rows();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(2 * i, 2 * j) = a(i, j);
  return out;
}

Observable embed(const Observable& o) {
  if (o.pauli) {
    const PauliSum sum =
        o.pauli->tensor_suffix('I').combined(0.5, o.pauli->tensor_suffix('Z'), 0.5);
    return Observable{SpectralHermitian(embed_zero_projector(o.matrix.entries())), sum};
  }
  return Observable::from_dense(SpectralHermitian(embed_zero_projector(o.matrix.entries())));
}

}  // namespace

SdpProblem::SdpProblem(Observable objective, std::vector<Observable> constraints,
                       RealVector bounds, double trace_bound, std::vector<ConstraintSense> senses)
    : objective_(std::move(objective)),
      constraints_(std::move(constraints)),
      bounds_(std::move(bounds)),
      senses_(std::move(senses)),
      trace_bound_(trace_bound) {
  if (!(trace_bound_ > 0.0) || !std::isfinite(trace_bound_)) {
    throw DomainError("trace bound R must be finite and positive");
  }
  if (bounds_.size() != static_cast<Eigen::Index>(constraints_.size())) {
    throw DomainError("expected one bound per constraint");
  }
  if (!bounds_.allFinite()) throw DomainError("constraint bounds must be finite");
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (constraints_[i].dim() != objective_.dim()) {
      throw DomainError("constraint " + std::to_string(i) + " has dimension " +
                        std::to_string(constraints_[i].dim()) + ", expected " +
                        std::to_string(objective_.dim()));
    }
  }
  if (senses_.empty()) senses_.assign(constraints_.size(), ConstraintSense::eq);
  if (senses_.size() != constraints_.size()) throw DomainError("one sense per constraint is required");
}

Representation SdpProblem::representation() const {
  if (!objective_.pauli) return Representation::dense;
  for (const auto& a : constraints_)
    if (!a.pauli) return Representation::dense;
  return Representation::pauli;
}

SdpProblem SdpProblem::with_trace_bound(double trace_bound) const {
  return SdpProblem(objective_, constraints_, bounds_, trace_bound, senses_);
}

std::string to_string(Reduction reduction) {
  return reduction == Reduction::direct_sum ? "direct_sum" : "qubit_embed";
}

ReducedProblem reduce_direct_sum(const SdpProblem& sdp) {
  const double r = sdp.trace_bound();
  std::vector<Observable> charges;
  charges.reserve(sdp.constraints().size());
  for (const auto& a : sdp.constraints()) {
    charges.push_back(Observable::from_dense(SpectralHermitian(direct_sum_zero(a.matrix.entries()))));
  }
  Observable h = Observable::from_dense(
      SpectralHermitian(direct_sum_zero(sdp.objective().matrix.entries())));
  RealVector targets = sdp.bounds() / r;
  return {EnergyProblem(std::move(h), std::move(charges), std::move(targets), sdp.senses()), r,
          Reduction::direct_sum};
}

ReducedProblem reduce_qubit_embed(const SdpProblem& sdp) {
  const double r = sdp.trace_bound();
  std::vector<Observable> charges;
  charges.reserve(sdp.constraints().size());
  for (const auto& a : sdp.constraints()) charges.push_back(embed(a));
  RealVector targets = sdp.bounds() / r;
  return {EnergyProblem(embed(sdp.objective()), std::move(charges), std::move(targets),
                        sdp.senses()),
          r, Reduction::qubit_embed};
}

GdSchedule sdp_schedule(const SdpProblem& sdp, double eps, double radius) {
  const ReducedProblem reduced = reduce_direct_sum(sdp);
  return schedule_gd(reduced.problem, eps / reduced.scale, radius);
}

SdpSolution solve_sdp(const SdpProblem& sdp, double eps, double radius, SolveMode mode,
                      const SdpSolveOptions& options) {
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
  const Reduction reduction = options.reduction.value_or(
      mode == SolveMode::sga ? Reduction::qubit_embed : Reduction::direct_sum);
  ReducedProblem reduced =
      reduction == Reduction::direct_sum ? reduce_direct_sum(sdp) : reduce_qubit_embed(sdp);
  const double scaled_eps = eps / reduced.scale;

  SdpSolution out;
  out.reduction = reduction;
  out.trace_bound = reduced.scale;
  out.reduced_dim = reduced.problem.dim();
  switch (mode) {
    case SolveMode::exact:
      out.report = gradient_ascent(reduced.problem, scaled_eps, radius, options.overrides);
      break;
    case SolveMode::newton:
      out.report = natural_gradient_ascent(reduced.problem, scaled_eps, radius, options.newton);
      break;
    case SolveMode::sga: {
      if (reduction != Reduction::qubit_embed) {
        throw RepresentationError("stochastic ascent needs the qubit-embedding reduction");
      }
      const EnergyProblem pauli = reduced.problem.representation() == Representation::pauli
                                      ? reduced.problem
                                      : reduced.problem.with_pauli_decomposition();
      Rng rng = Rng(options.seed).substream(options.stream);
      out.report = sga(pauli, scaled_eps, options.delta, radius, rng, options.overrides);
      break;
    }
  }
  out.report.estimate *= reduced.scale;
  return out;
}

}  // namespace thermosdp
