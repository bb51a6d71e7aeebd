#include "thermosdp/report.hpp"

namespace thermosdp {

using nlohmann::json;

json vector_json(const RealVector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json to_json(const ScheduleSummary& s) {
  json out = {{"T", s.temperature},
              {"M", s.iterations},
              {"eta", s.eta},
              {"radius_r", s.radius},
              {"epsilon", s.epsilon}};
  if (s.smoothness) out["L"] = *s.smoothness;
  if (s.sigma2) out["sigma2"] = *s.sigma2;
  if (s.delta) out["delta"] = *s.delta;
  if (s.ridge) out["ridge"] = *s.ridge;
  return out;
}

json to_json(const SolveReport& r) {
  const auto& d = r.diagnostics;
  return {{"mode", to_string(r.mode)},
          {"seed", r.seed},
          {"schedule", to_json(r.schedule)},
          {"estimate", r.estimate},
          {"mu_final", vector_json(r.mu_final)},
          {"objective_trace", r.objective_trace},
          {"sample_count", r.sample_count},
          {"diagnostics",
           {{"final_objective", r.final_objective},
            {"residuals", vector_json(r.residuals)},
            {"mu_best", vector_json(d.mu_best)},
            {"best_iteration", d.best_iteration},
            {"best_objective", d.best_objective},
            {"iterations_run", d.iterations_run},
            {"fallback_steps", d.fallback_steps},
            {"backtracks", d.backtracks}}}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace thermosdp
