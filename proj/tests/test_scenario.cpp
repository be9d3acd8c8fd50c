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

#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "support.hpp"
#include "unravel/output.hpp"
#include "unravel/scenario.hpp"

using namespace unravel;
using namespace unravel::testing;

namespace {

std::string data_path(const char* name) { return std::string(UNRAVEL_DATA_DIR) + "/" + name; }

json base_json() {
  return json::parse(R"({
    "dim": 2,
    "hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
    "lindblad_ops": [[[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]],
    "psi0": [[1, 0], [0, 0]],
    "integration": {"dt": 0.01, "t_final": 1.0}
  })");
}

// Field named by the error, with the message for diagnostics.
std::string error_field(const json& j) {
  try {
    scenario_from_json(j);
  } catch (const ScenarioError& e) {
    return e.field() + " | " + e.what();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("bundled scenarios load and round-trip") {
  for (const char* name : {"qubit_dephasing.json", "born_rule.json"}) {
    const ScenarioFile s = parse_scenario(data_path(name));
    const json once = scenario_to_json(s);
    const json twice = scenario_to_json(scenario_from_json(once));
    CHECK(once == twice);
    CHECK(once.dump() == twice.dump());
  }
  const ScenarioFile s = parse_scenario(data_path("qubit_dephasing.json"));
  CHECK(s.model.dim() == 2);
  CHECK(s.integration.seed == 7);
  REQUIRE(s.gks.has_value());
  CHECK(s.gks->gell_mann_basis);
  CHECK(s.suite.size() == 7);
}

TEST_CASE("minimal scenario defaults") {
  const ScenarioFile s = scenario_from_json(base_json());
  CHECK(s.freedom == "standard");
  CHECK(s.trajectories == 1);
  CHECK(s.integration.renormalize);
  CHECK(s.integration.record_stride == 1);
  CHECK(s.suite.empty());
  CHECK(s.outputs.ensemble_csv == "ensemble.csv");
}

TEST_CASE("scenario errors name the offending field") {
  json j = base_json();
  j.erase("psi0");
  CHECK(error_field(j).rfind("psi0 |", 0) == 0);

  j = base_json();
  j["hamiltonian"][0][1] = json::array({0.5, 0});
  const std::string herm = error_field(j);
  CHECK(herm.rfind("hamiltonian |", 0) == 0);
  CHECK(herm.find("0.5") != std::string::npos);

  j = base_json();
  j["lindblad_ops"].push_back(json::parse("[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]"));
  j["freedom"] = "phase:1.5707963";
  const std::string phase = error_field(j);
  CHECK(phase.rfind("freedom |", 0) == 0);
  CHECK(phase.find("scalar phase requires n=1") != std::string::npos);

  j = base_json();
  j["freedom"] = "unitary:[[[2,0]]]";
  CHECK(error_field(j).rfind("freedom |", 0) == 0);

  j = base_json();
  j["psi0"] = json::array({json::array({1, 0}), json::array({1, 0})});
  const std::string norm = error_field(j);
  CHECK(norm.rfind("psi0 |", 0) == 0);
  CHECK(norm.find("1.0") != std::string::npos);

  j = base_json();
  j["psi0"] = json::array({json::array({1, 0})});
  CHECK(error_field(j).rfind("psi0 |", 0) == 0);

  j = base_json();
  j["hamiltonian"][0][0] = "zero";
  CHECK(error_field(j).rfind("hamiltonian |", 0) == 0);

  j = base_json();
  j["integration"]["dt"] = -1;
  CHECK(error_field(j).rfind("integration |", 0) == 0);

  j = base_json();
  j["integration"].erase("t_final");
  CHECK(error_field(j).rfind("integration.t_final |", 0) == 0);

  j = base_json();
  j["checkpoints"] = {0.5, 2.0};
  CHECK(error_field(j).rfind("checkpoints |", 0) == 0);

  j = base_json();
  j["dim"] = 0;
  CHECK(error_field(j).rfind("dim |", 0) == 0);

  j = base_json();
  j["trajectories"] = 0;
  CHECK(error_field(j).rfind("trajectories |", 0) == 0);

  j = base_json();
  j["suite"] = json::array({json{{"samples", 3}}});
  CHECK(error_field(j).rfind("suite[0] |", 0) == 0);

  j = base_json();
  j["gks"] = json{{"kossakowski", json::array({json::array({json::array({1, 0}), json::array({0, 1})}),
                                                json::array({json::array({0, 0}), json::array({1, 0})})})}};
  CHECK(error_field(j).rfind("gks", 0) == 0);
}

TEST_CASE("syntax errors report a line number") {
  try {
    parse_scenario_text("{\n  \"dim\": 2,\n  \"hamiltonian\": [,\n}");
    FAIL("expected a syntax error");
  } catch (const ScenarioError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).rfind("line 3:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_scenario("/nonexistent/file.json"), ScenarioError);
}

TEST_CASE("complex JSON helpers") {
  CHECK(complex_from_json(json::array({1.5, -2}), "z") == cplx(1.5, -2));
  CHECK(complex_to_json(cplx(0.25, 3)) == json::array({0.25, 3.0}));
  CHECK_THROWS_AS(complex_from_json(json::array({1}), "z"), std::invalid_argument);
  CHECK_THROWS_AS(complex_from_json("1+2i", "z"), std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1,0]],[[1,0],[2,0]]]"), "m"), std::invalid_argument);
  const Operator m = mat2(cplx(1, 2), 3, cplx(0, -1), 0.125);
  CHECK(matrix_from_json(matrix_to_json(m), "m") == m);
  const StateVector v = vec2(cplx(0.1, 0.2), -0.3);
  CHECK(vector_from_json(vector_to_json(v), "v") == v);
}

TEST_CASE("FNV-1a reference vectors and config hash") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  const json a = json::parse(R"({"x": 1, "y": [1, 2]})");
  const json b = json::parse(R"({"y": [1, 2], "x": 1})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash(json::parse(R"({"x": 2, "y": [1, 2]})")));
}

TEST_CASE("number formatting is lossless") {
  std::mt19937_64 rng(60);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = g(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV writers embed the stamp") {
  const OutputStamp stamp{"0123456789abcdef", 42};
  CHECK(header_line(stamp) == "# config_hash=0123456789abcdef seed=42");

  EnsembleEstimate est;
  est.times = {0.0, 0.5};
  est.rho_hat = {mat2(1, 0, 0, 0), mat2(0.5, cplx(0, 0.25), cplx(0, -0.25), 0.5)};
  est.std_error = {0.0, 0.01};
  std::ostringstream out;
  write_ensemble_csv(out, est, stamp);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == header_line(stamp));
  std::getline(in, line);
  CHECK(line ==
        "t,rho_0_0_re,rho_0_0_im,rho_0_1_re,rho_0_1_im,rho_1_0_re,rho_1_0_im,rho_1_1_re,rho_1_1_im,std_error");
  std::getline(in, line);
  CHECK(line == "0,1,0,0,0,0,0,0,0,0");
  std::getline(in, line);
  CHECK(line == "0.5,0.5,0,0,0.25,0,-0.25,0.5,0,0.01");

  Trajectory tr;
  tr.times = {0.0};
  tr.states = {vec2(cplx(0.6, 0), cplx(0, 0.8))};
  std::ostringstream t;
  write_trajectory_csv(t, tr, stamp);
  CHECK(t.str() == header_line(stamp) + "\nt,psi_0_re,psi_0_im,psi_1_re,psi_1_im\n0,0.59999999999999998,0,0,0.80000000000000004\n");

  std::ostringstream s;
  CHECK_THROWS_AS(write_series_csv(s, {0.0}, {"a", "b"}, {{1.0}}, stamp), std::invalid_argument);
}
