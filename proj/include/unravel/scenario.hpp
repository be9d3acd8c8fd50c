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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unravel/json_io.hpp"
#include "unravel/lindblad.hpp"
#include "unravel/sde.hpp"
#include "unravel/unraveling.hpp"

namespace unravel {

/// Parse or validation failure in a scenario file. `field` names the
/// offending key (dotted path); `line` is set for syntax errors.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message, int line = 0)
      : std::runtime_error(compose(field, message, line)), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string compose(const std::string& field, const std::string& message, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }
  std::string field_;
  int line_;
};

struct GKSSpec {
  GKSForm form;
  bool gell_mann_basis = true;  // serialize the basis by name
  std::vector<double> times;    // Choi evaluation times
};

struct OutputPaths {
  std::string ensemble_csv = "ensemble.csv";
  std::string trajectory_csv = "trajectory.csv";
  std::string summary_json = "summary.json";
  std::string report_json = "report.json";
  std::string variance_csv = "variance_scan.csv";
  std::string choi_json = "choi.json";
  std::string diagonalize_json = "diagonalize.json";
};

/// Everything a CLI run needs: model, freedom, initial state, integration
/// settings, ensemble size, checkpoints, optional GKS data, verification
/// suite and output file names.
struct ScenarioFile {
  LindbladModel model{Operator::Zero(1, 1), {}};
  std::string freedom = "standard";
  StateVector psi0;
  IntegrationConfig integration;
  std::size_t trajectories = 1;
  std::vector<double> checkpoints;
  std::size_t observable = 0;              // Lindblad index used by variance and Born checks
  std::vector<double> variance_phases;     // phase grid of the variance scan
  std::optional<GKSSpec> gks;
  json suite = json::array();              // verification entries, see verify.hpp
  OutputPaths outputs;

  Unraveling unraveling(Fault fault = Fault::None) const;
};

ScenarioFile parse_scenario(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text);
ScenarioFile scenario_from_json(const json& j);
json scenario_to_json(const ScenarioFile& s);

json model_to_json(const LindbladModel& model);
json integration_to_json(const IntegrationConfig& cfg);
IntegrationConfig integration_from_json(const json& j, const std::string& field);
json gks_to_json(const GKSSpec& gks);
GKSSpec gks_from_json(const json& j, Eigen::Index dim, const std::string& field);

}  // namespace unravel
