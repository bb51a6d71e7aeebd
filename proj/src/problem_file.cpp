#include "thermosdp/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "thermosdp/error.hpp"

namespace thermosdp {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(path + key, "missing required field");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(field, "expected a finite number");
  return x;
}

bool looks_dense(const json& v) { return v.is_array() && (v.empty() || v.front().is_array()); }

PauliSum parse_pauli(const json& v, int qubits, const std::string& field) {
  if (!v.is_array()) throw ParseError(field, "expected a list of Pauli terms");
  std::vector<PauliTerm> terms;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string at = field + "[" + std::to_string(k) + "]";
    const json& t = v[k];
    if (!t.is_object()) throw ParseError(at, "expected {\"pauli\": ..., \"coeff\": ...}");
    const json& p = require(t, "pauli", at + ".");
    if (!p.is_string()) throw ParseError(at + ".pauli", "expected a string");
    const std::string index = p.get<std::string>();
    try {
      validate_pauli_index(index);
    } catch (const DomainError& e) {
      throw ParseError(at + ".pauli", e.what());
    }
    if (static_cast<int>(index.size()) != qubits) {
      throw ParseError(at + ".pauli", "Pauli string \"" + index + "\" has length " +
                                          std::to_string(index.size()) + ", expected " +
                                          std::to_string(qubits));
    }
    terms.push_back({index, number(require(t, "coeff", at + "."), at + ".coeff")});
  }
  return PauliSum(qubits, std::move(terms));
}

Matrix parse_dense(const json& v, Eigen::Index dim, const std::string& field) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim) {
    throw ParseError(field, "expected " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string at = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw ParseError(at, "expected " + std::to_string(dim) + " entries");
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      const json& e = row[static_cast<std::size_t>(j)];
      const std::string entry = at + "[" + std::to_string(j) + "]";
      if (e.is_number()) {
        m(i, j) = Complex(number(e, entry), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(i, j) = Complex(number(e[0], entry), number(e[1], entry));
      } else {
        throw ParseError(entry, "expected [re, im]");
      }
    }
  }
  const double asym = hermitian_asymmetry(m);
  if (asym > 1e-8) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (relative asymmetry " << asym << ")";
    log_warning(field + ": " + msg.str());
    throw ParseError(field, msg.str());
  }
  return m;
}

json dense_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json pauli_to_json(const PauliSum& s) {
  json terms = json::array();
  for (const auto& t : s.terms()) terms.push_back({{"pauli", t.index}, {"coeff", t.coeff}});
  return terms;
}

SolverSettings parse_solver(const json& v) {
  SolverSettings s;
  if (!v.is_object()) throw ParseError("solver", "expected an object");
  if (v.contains("mode")) {
    if (!v["mode"].is_string()) throw ParseError("solver.mode", "expected a string");
    s.mode = v["mode"].get<std::string>();
    try {
      parse_solve_mode(s.mode);
    } catch (const DomainError& e) {
      throw ParseError("solver.mode", e.what());
    }
  }
  if (v.contains("epsilon")) s.epsilon = number(v["epsilon"], "solver.epsilon");
  if (v.contains("delta")) s.delta = number(v["delta"], "solver.delta");
  if (v.contains("radius_r")) s.radius = number(v["radius_r"], "solver.radius_r");
  if (!(s.epsilon > 0.0)) throw ParseError("solver.epsilon", "must be positive");
  if (!(s.delta > 0.0 && s.delta < 1.0)) throw ParseError("solver.delta", "must lie in (0, 1)");
  if (!(s.radius > 0.0)) throw ParseError("solver.radius_r", "must be positive");
  if (v.contains("seed")) {
    const json& seed = v["seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ParseError("solver.seed", "expected a non-negative integer");
    }
    s.seed = seed.get<std::uint64_t>();
  }
  if (v.contains("replicates")) {
    if (!v["replicates"].is_number_integer() || v["replicates"].get<long long>() < 1) {
      throw ParseError("solver.replicates", "expected a positive integer");
    }
    s.replicates = v["replicates"].get<int>();
  }
  if (v.contains("overrides")) {
    const json& o = v["overrides"];
    if (!o.is_object()) throw ParseError("solver.overrides", "expected an object");
    for (const auto& [key, value] : o.items()) {
      const std::string field = "solver.overrides." + key;
      if (key == "T") {
        s.overrides.temperature = number(value, field);
      } else if (key == "eta") {
        s.overrides.eta = number(value, field);
      } else if (key == "ridge") {
        s.overrides.ridge = number(value, field);
      } else if (key == "M") {
        if (!value.is_number_integer() || value.get<long long>() < 0) {
          throw ParseError(field, "expected a non-negative integer");
        }
        s.overrides.iterations = value.get<long long>();
      } else {
        throw ParseError(field, "unknown override");
      }
    }
  }
  return s;
}

json solver_to_json(const SolverSettings& s) {
  json out = {{"mode", s.mode},
              {"epsilon", s.epsilon},
              {"delta", s.delta},
              {"radius_r", s.radius},
              {"replicates", s.replicates}};
  if (s.seed) out["seed"] = *s.seed;
  json o = json::object();
  if (s.overrides.temperature) o["T"] = *s.overrides.temperature;
  if (s.overrides.iterations) o["M"] = *s.overrides.iterations;
  if (s.overrides.eta) o["eta"] = *s.overrides.eta;
  if (s.overrides.ridge) o["ridge"] = *s.overrides.ridge;
  if (!o.empty()) out["overrides"] = o;
  return out;
}

}  // namespace

EnergyProblem ProblemFile::energy_problem() const {
  if (is_sdp()) throw DomainError("problem file describes an SDP, not an energy problem");
  return EnergyProblem(hamiltonian, constraints, targets, senses);
}

SdpProblem ProblemFile::sdp_problem() const {
  if (!is_sdp()) throw DomainError("problem file describes an energy problem, not an SDP");
  return SdpProblem(hamiltonian, constraints, targets, trace_bound.value_or(1.0), senses);
}

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw ParseError("", "problem file must be a JSON object");
  ProblemFile f;
  const json& kind = require(doc, "kind", "");
  if (!kind.is_string() || (kind != "energy" && kind != "sdp")) {
    throw ParseError("kind", "expected \"energy\" or \"sdp\"");
  }
  f.kind = kind.get<std::string>();
  const bool sdp = f.is_sdp();
  const std::string h_key = sdp ? "C" : "H";
  const std::string c_key = sdp ? "A" : "charges";
  const std::string t_key = sdp ? "b" : "q";

  const json& h = require(doc, h_key, "");
  if (doc.contains("qubits") == doc.contains("dimension")) {
    throw ParseError("qubits", "give exactly one of \"qubits\" (Pauli terms) or \"dimension\" (dense)");
  }
  f.encoding = doc.contains("qubits") ? Encoding::pauli : Encoding::dense;
  if (f.encoding == Encoding::pauli) {
    const json& n = require(doc, "qubits", "");
    if (!n.is_number_integer() || n.get<int>() < 1) throw ParseError("qubits", "expected a positive integer");
    f.qubits = n.get<int>();
    if (f.qubits > kDefaultQubitCap) {
      throw ParseError("qubits", "at most " + std::to_string(kDefaultQubitCap) + " qubits supported");
    }
    f.dimension = Eigen::Index{1} << f.qubits;
  } else {
    const json& n = require(doc, "dimension", "");
    if (!n.is_number_integer() || n.get<long long>() < 1) {
      throw ParseError("dimension", "expected a positive integer");
    }
    f.dimension = n.get<Eigen::Index>();
  }

  auto observable = [&](const json& v, const std::string& field) {
    const bool dense = looks_dense(v) && !v.empty();
    if (!v.empty() && dense != (f.encoding == Encoding::dense)) {
      throw ParseError(field, "observable encodings must not be mixed within one file");
    }
    if (f.encoding == Encoding::pauli) return Observable::from_pauli(parse_pauli(v, f.qubits, field));
    return Observable::from_dense(SpectralHermitian(parse_dense(v, f.dimension, field)));
  };

  f.hamiltonian = observable(h, h_key);
  const json& cs = doc.contains(c_key) ? doc.at(c_key) : json::array();
  if (!cs.is_array()) throw ParseError(c_key, "expected a list of observables");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    f.constraints.push_back(observable(cs[i], c_key + "[" + std::to_string(i) + "]"));
  }
  const json& ts = doc.contains(t_key) ? doc.at(t_key) : json::array();
  if (!ts.is_array() || ts.size() != f.constraints.size()) {
    throw ParseError(t_key, "expected " + std::to_string(f.constraints.size()) + " targets");
  }
  f.targets.resize(static_cast<Eigen::Index>(ts.size()));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    f.targets[static_cast<Eigen::Index>(i)] = number(ts[i], t_key + "[" + std::to_string(i) + "]");
  }

  f.senses.assign(f.constraints.size(), ConstraintSense::eq);
  if (doc.contains("senses")) {
    const json& ss = doc["senses"];
    if (!ss.is_array() || ss.size() != f.constraints.size()) {
      throw ParseError("senses", "expected one sense per constraint");
    }
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const std::string field = "senses[" + std::to_string(i) + "]";
      if (ss[i] == "eq") {
        f.senses[i] = ConstraintSense::eq;
      } else if (ss[i] == "ge") {
        f.senses[i] = ConstraintSense::ge;
      } else {
        throw ParseError(field, "expected \"eq\" or \"ge\"");
      }
    }
  }

  if (doc.contains("R")) {
    f.trace_bound = number(doc["R"], "R");
    if (!(*f.trace_bound > 0.0)) throw ParseError("R", "must be positive");
  } else if (sdp) {
    throw ParseError("R", "missing required field");
  }

  if (doc.contains("solver")) f.solver = parse_solver(doc["solver"]);
  return f;
}

ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemFile parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str());
}

json to_json(const ProblemFile& f) {
  const bool sdp = f.is_sdp();
  json out;
  out["kind"] = f.kind;
  auto encode = [&](const Observable& o) {
    return f.encoding == Encoding::pauli ? pauli_to_json(*o.pauli) : dense_to_json(o.matrix.entries());
  };
  if (f.encoding == Encoding::pauli) {
    out["qubits"] = f.qubits;
  } else {
    out["dimension"] = f.dimension;
  }
  out[sdp ? "C" : "H"] = encode(f.hamiltonian);
  json cs = json::array();
  for (const auto& c : f.constraints) cs.push_back(encode(c));
  out[sdp ? "A" : "charges"] = cs;
  out[sdp ? "b" : "q"] = std::vector<double>(f.targets.data(), f.targets.data() + f.targets.size());
  json senses = json::array();
  for (auto s : f.senses) senses.push_back(s == ConstraintSense::eq ? "eq" : "ge");
  out["senses"] = senses;
  if (f.trace_bound) out["R"] = *f.trace_bound;
  out["solver"] = solver_to_json(f.solver);
  return out;
}

}  // namespace thermosdp
