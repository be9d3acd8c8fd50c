// Copyright 2026 The Unravel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unravel/scenario.hpp"

#include <fstream>
#include <sstream>

namespace unravel {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ScenarioError(key, "missing field");
  return j.at(key);
}

template <class T>
T number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ScenarioError(field, "expected a number");
  if constexpr (std::is_unsigned_v<T>) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ScenarioError(field, "expected a nonnegative integer");
  }
  return j.get<T>();
}

std::vector<double> number_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ScenarioError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number<double>(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

// json_io messages already start with the field name.
[[noreturn]] void rethrow_for(const std::string& field, const std::exception& e) {
  std::string msg = e.what();
  const std::string prefix = field + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  throw ScenarioError(field, msg);
}

Eigen::MatrixXcd matrix_field(const json& j, const std::string& field, Eigen::Index dim) {
  Eigen::MatrixXcd m;
  try {
    m = matrix_from_json(j, field);
  } catch (const std::invalid_argument& e) {
    rethrow_for(field, e);
  }
  if (m.rows() != dim || m.cols() != dim) {
    throw ScenarioError(field, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  }
  return m;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

json model_to_json(const LindbladModel& model) {
  json ops = json::array();
  for (const auto& op : model.lindblad_ops()) ops.push_back(matrix_to_json(op));
  return json{{"dim", model.dim()}, {"hamiltonian", matrix_to_json(model.hamiltonian())}, {"lindblad_ops", ops}};
}

json integration_to_json(const IntegrationConfig& cfg) {
  return json{{"dt", cfg.dt},
              {"t_final", cfg.t_final},
              {"renormalize", cfg.renormalize},
              {"seed", cfg.seed},
              {"record_stride", cfg.record_stride},
              {"noise_refinement", cfg.noise_refinement}};
}

IntegrationConfig integration_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) throw ScenarioError(field, "expected an object");
  IntegrationConfig cfg;
  if (!j.contains("dt")) throw ScenarioError(field + ".dt", "missing field");
  if (!j.contains("t_final")) throw ScenarioError(field + ".t_final", "missing field");
  cfg.dt = number<double>(j["dt"], field + ".dt");
  cfg.t_final = number<double>(j["t_final"], field + ".t_final");
  if (j.contains("renormalize")) {
    if (!j["renormalize"].is_boolean()) throw ScenarioError(field + ".renormalize", "expected true or false");
    cfg.renormalize = j["renormalize"].get<bool>();
  }
  if (j.contains("seed")) cfg.seed = number<std::uint64_t>(j["seed"], field + ".seed");
  if (j.contains("record_stride")) cfg.record_stride = number<std::size_t>(j["record_stride"], field + ".record_stride");
  if (j.contains("noise_refinement")) {
    cfg.noise_refinement = number<unsigned>(j["noise_refinement"], field + ".noise_refinement");
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(field, e.what());
  }
  return cfg;
}

json gks_to_json(const GKSSpec& gks) {
  json basis;
  if (gks.gell_mann_basis) {
    basis = "gell-mann";
  } else {
    basis = json::array();
    for (const auto& f : gks.form.basis()) basis.push_back(matrix_to_json(f));
  }
  return json{{"hamiltonian", matrix_to_json(gks.form.hamiltonian())},
              {"basis", basis},
              {"kossakowski", matrix_to_json(gks.form.kossakowski())},
              {"times", gks.times}};
}

GKSSpec gks_from_json(const json& g, Eigen::Index dim, const std::string& field) {
  if (!g.is_object()) throw ScenarioError(field, "expected an object");
  Operator gh = g.contains("hamiltonian") ? matrix_field(g["hamiltonian"], field + ".hamiltonian", dim)
                                          : Operator::Zero(dim, dim);
  bool gell_mann = true;
  std::vector<Operator> basis;
  if (g.contains("basis") && !(g["basis"].is_string() && g["basis"] == "gell-mann")) {
    if (!g["basis"].is_array()) throw ScenarioError(field + ".basis", "expected \"gell-mann\" or an array of matrices");
    gell_mann = false;
    for (std::size_t i = 0; i < g["basis"].size(); ++i) {
      basis.push_back(matrix_field(g["basis"][i], field + ".basis[" + std::to_string(i) + "]", dim));
    }
  } else {
    basis = gell_mann_basis(dim);
  }
  if (!g.contains("kossakowski")) throw ScenarioError(field + ".kossakowski", "missing field");
  Eigen::MatrixXcd c;
  try {
    c = matrix_from_json(g["kossakowski"], field + ".kossakowski");
  } catch (const std::invalid_argument& e) {
    rethrow_for(field + ".kossakowski", e);
  }
  std::vector<double> times;
  if (g.contains("times")) times = number_list(g["times"], field + ".times");
  try {
    return GKSSpec{GKSForm(std::move(gh), std::move(basis), std::move(c)), gell_mann, std::move(times)};
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(field, e.what());
  }
}

Unraveling ScenarioFile::unraveling(Fault fault) const {
  return Unraveling(model, UnitaryFreedom::parse(freedom, model.size()), fault);
}

ScenarioFile scenario_from_json(const json& j) {
  if (!j.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  ScenarioFile s;

  const json& dim_j = require(j, "dim");
  const auto dim = static_cast<Eigen::Index>(number<std::size_t>(dim_j, "dim"));
  if (dim < 1 || static_cast<std::size_t>(dim) > kMaxDim) {
    throw ScenarioError("dim", "must lie in [1, " + std::to_string(kMaxDim) + "]");
  }

  Operator h = matrix_field(require(j, "hamiltonian"), "hamiltonian", dim);
  const double herm = hermiticity_violation(h);
  if (herm > kTol.hermitian) {
    throw ScenarioError("hamiltonian", "not Hermitian (max violation " + std::to_string(herm) + ")");
  }
  std::vector<Operator> ops;
  if (j.contains("lindblad_ops")) {
    const json& lj = j["lindblad_ops"];
    if (!lj.is_array()) throw ScenarioError("lindblad_ops", "expected an array of matrices");
    for (std::size_t k = 0; k < lj.size(); ++k) {
      ops.push_back(matrix_field(lj[k], "lindblad_ops[" + std::to_string(k) + "]", dim));
    }
  }
  try {
    s.model = LindbladModel(std::move(h), std::move(ops));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("lindblad_ops", e.what());
  }

  if (j.contains("freedom")) {
    if (!j["freedom"].is_string()) throw ScenarioError("freedom", "expected a string");
    s.freedom = j["freedom"].get<std::string>();
  }
  try {
    s.unraveling();
  } catch (const ValidationError& e) {
    throw ScenarioError("freedom", e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("freedom", e.what());
  }

  try {
    s.psi0 = vector_from_json(require(j, "psi0"), "psi0");
  } catch (const std::invalid_argument& e) {
    rethrow_for("psi0", e);
  }
  if (s.psi0.size() != dim) throw ScenarioError("psi0", "expected " + std::to_string(dim) + " amplitudes");
  const double nv = normalization_violation(s.psi0);
  if (nv > kTol.unit_norm) {
    throw ScenarioError("psi0", "not normalized (|norm^2 - 1| = " + std::to_string(nv) + ")");
  }

  s.integration = integration_from_json(require(j, "integration"), "integration");
  if (j.contains("trajectories")) {
    s.trajectories = number<std::size_t>(j["trajectories"], "trajectories");
    if (s.trajectories == 0) throw ScenarioError("trajectories", "must be at least 1");
  }
  if (j.contains("checkpoints")) {
    s.checkpoints = number_list(j["checkpoints"], "checkpoints");
    for (double t : s.checkpoints) {
      if (t < 0.0 || t > s.integration.t_final) throw ScenarioError("checkpoints", "outside [0, t_final]");
    }
  }
  if (j.contains("observable")) {
    s.observable = number<std::size_t>(j["observable"], "observable");
    if (s.observable >= std::max<std::size_t>(s.model.size(), 1)) {
      throw ScenarioError("observable", "index out of range");
    }
  }
  if (j.contains("variance_phases")) s.variance_phases = number_list(j["variance_phases"], "variance_phases");

  if (j.contains("gks")) s.gks = gks_from_json(j["gks"], dim, "gks");

  if (j.contains("suite")) {
    if (!j["suite"].is_array()) throw ScenarioError("suite", "expected an array of checks");
    for (std::size_t i = 0; i < j["suite"].size(); ++i) {
      const json& e = j["suite"][i];
      if (!e.is_object() || !e.contains("check") || !e["check"].is_string()) {
        throw ScenarioError("suite[" + std::to_string(i) + "]", "each entry needs a string field 'check'");
      }
    }
    s.suite = j["suite"];
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) throw ScenarioError("outputs", "expected an object");
    auto read = [&](const char* key, std::string& dst) {
      if (!o.contains(key)) return;
      if (!o[key].is_string()) throw ScenarioError(std::string("outputs.") + key, "expected a string");
      dst = o[key].get<std::string>();
    };
    read("ensemble_csv", s.outputs.ensemble_csv);
    read("trajectory_csv", s.outputs.trajectory_csv);
    read("summary_json", s.outputs.summary_json);
    read("report_json", s.outputs.report_json);
    read("variance_csv", s.outputs.variance_csv);
    read("choi_json", s.outputs.choi_json);
    read("diagonalize_json", s.outputs.diagonalize_json);
  }
  return s;
}

json scenario_to_json(const ScenarioFile& s) {
  json j = model_to_json(s.model);
  j["freedom"] = s.freedom;
  j["psi0"] = vector_to_json(s.psi0);
  j["integration"] = integration_to_json(s.integration);
  j["trajectories"] = s.trajectories;
  j["checkpoints"] = s.checkpoints;
  j["observable"] = s.observable;
  j["variance_phases"] = s.variance_phases;
  if (s.gks) j["gks"] = gks_to_json(*s.gks);
  j["suite"] = s.suite;
  j["outputs"] = json{{"ensemble_csv", s.outputs.ensemble_csv},
                      {"trajectory_csv", s.outputs.trajectory_csv},
                      {"summary_json", s.outputs.summary_json},
                      {"report_json", s.outputs.report_json},
                      {"variance_csv", s.outputs.variance_csv},
                      {"choi_json", s.outputs.choi_json},
                      {"diagonalize_json", s.outputs.diagonalize_json}};
  return j;
}

ScenarioFile parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", e.what(), line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  return scenario_from_json(j);
}

ScenarioFile parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

}  // namespace unravel
