#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermosdp/optimize.hpp"
#include "thermosdp/problem.hpp"
#include "thermosdp/sdp.hpp"

namespace thermosdp {

enum class Encoding { pauli, dense };

struct SolverSettings {
  std::string mode = "exact";
  double epsilon = 0.1;
  double delta = 0.05;
  double radius = 1.0;
  std::optional<std::uint64_t> seed;
  int replicates = 1;
  SolverOverrides overrides;
};

/// In-memory form of a JSON problem file.
///
/// Energy files carry "H", "charges" and "q"; SDP files carry "C", "A", "b"
/// and "R". Observables are either Pauli term lists [{"pauli": "ZX", "coeff": 1}]
/// (with "qubits") or dense row-major matrices of [re, im] pairs (with
/// "dimension"), one encoding per file.
struct ProblemFile {
  std::string kind = "energy";
  Encoding encoding = Encoding::pauli;
  int qubits = 0;
  Eigen::Index dimension = 0;
  Observable hamiltonian;  // H, or C for SDP files
  std::vector<Observable> constraints;
  RealVector targets;
  std::vector<ConstraintSense> senses;
  std::optional<double> trace_bound;
  SolverSettings solver;

  bool is_sdp() const { return kind == "sdp"; }
  EnergyProblem energy_problem() const;
  SdpProblem sdp_problem() const;
};

ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem_file(const std::string& path);

nlohmann::json to_json(const ProblemFile& file);

}  // namespace thermosdp
