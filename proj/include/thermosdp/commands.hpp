#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermosdp/problem_file.hpp"

namespace thermosdp {

/// Command-line settings that override the problem file's solver block.
struct SolveFlags {
  std::optional<std::string> mode;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> radius;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  bool double_radius = false;
  bool double_trace = false;
  unsigned threads = 1;
};

/// Seed precedence: flag, then file, then THERMOSDP_SEED, then 0.
std::uint64_t resolve_seed(const ProblemFile& file, const SolveFlags& flags);

/// Solves the file and returns the report document, including "wall_time_s".
nlohmann::json cmd_solve(const ProblemFile& file, const SolveFlags& flags = {});

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Solves the file, then checks duality, derivative and oracle invariants at the result.
std::vector<VerifyCheck> cmd_verify(const ProblemFile& file, const SolveFlags& flags = {});

struct BenchSpec {
  std::vector<int> dims{2, 4, 8};
  std::vector<double> epsilons{0.1};
  int charges = 1;
  double radius = 1.0;
  std::uint64_t seed = 1;
  std::string mode = "exact";
  double delta = 0.05;
};

/// Writes one CSV row per (d, eps) on random diagonal instances.
void cmd_bench(const BenchSpec& spec, std::ostream& csv);

/// Entry point for the thermosdp executable. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int parse = 2;
inline constexpr int numeric = 3;
inline constexpr int verify_failed = 4;
}  // namespace exit_code

}  // namespace thermosdp
