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

#include <numbers>

#include "support.hpp"
#include "unravel/verify.hpp"

using namespace unravel;
using namespace unravel::testing;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

LindbladModel dephasing(const Operator& h = Operator::Zero(2, 2)) { return LindbladModel(h, {pauli::z()}); }

UnravelingChoice standard(Fault fault = Fault::None) { return {UnitaryFreedom::standard(1), fault}; }

IntegrationConfig config(double dt, double t_final, std::uint64_t seed = 5) {
  IntegrationConfig cfg;
  cfg.dt = dt;
  cfg.t_final = t_final;
  cfg.seed = seed;
  return cfg;
}

ScenarioFile small_scenario() {
  ScenarioFile s;
  s.model = dephasing();
  s.psi0 = vec2(kS, kS);
  s.integration = config(1e-3, 1.0);
  s.trajectories = 500;
  s.checkpoints = {0.5, 1.0};
  return s;
}

}  // namespace

TEST_CASE("ensemble tolerance formula") {
  CHECK(ensemble_tolerance(10000, 1e-3, 2) == doctest::Approx(0.065).epsilon(1e-12));
  CHECK(ensemble_tolerance(100, 0.01, 3) == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("ensemble vs exact on the dephasing qubit") {
  const auto r = check_ensemble_vs_exact(dephasing(), standard(), vec2(kS, kS), config(1e-3, 1.0), 1000,
                                         {0.0, 0.5, 1.0});
  CHECK(r.pass);
  REQUIRE(r.measured.size() == 3);
  CHECK(r.measured[0] <= 1e-15);
  CHECK(r.tolerance == doctest::Approx(ensemble_tolerance(1000, 1e-3, 2)));
  CHECK(r.config_hash.size() == 16);
  CHECK_THROWS_AS(check_ensemble_vs_exact(dephasing(), standard(), vec2(kS, kS), config(1e-3, 1.0), 10, {0.0005}),
                  std::invalid_argument);
}

TEST_CASE("ensemble vs exact with a Hamiltonian") {
  const auto r = check_ensemble_vs_exact(dephasing(pauli::x()), standard(), vec2(kS, kS), config(1e-3, 1.0), 1000,
                                         {1.0});
  CHECK(r.pass);
}

TEST_CASE("checks are reproducible") {
  const auto a = check_ensemble_vs_exact(dephasing(), standard(), vec2(kS, kS), config(1e-3, 0.3), 200, {0.3});
  const auto b = check_ensemble_vs_exact(dephasing(), standard(), vec2(kS, kS), config(1e-3, 0.3), 200, {0.3}, 3);
  CHECK(a.measured == b.measured);
  CHECK(a.config_hash == b.config_hash);
  const auto c = check_ensemble_vs_exact(dephasing(), standard(), vec2(kS, kS), config(1e-3, 0.3, 6), 200, {0.3});
  CHECK(c.config_hash != a.config_hash);
}

TEST_CASE("generator identity check") {
  std::mt19937_64 rng(50);
  const LindbladModel m = random_model(rng, 3, 2);
  CHECK(check_generator_identity(m, {UnitaryFreedom::standard(2)}, 200).pass);
  CHECK(check_generator_identity(m, {UnitaryFreedom::unitary(random_unitary(rng, 4))}, 200).pass);

  const auto broken = check_generator_identity(m, {UnitaryFreedom::standard(2), Fault::ZeroEllInDiffusion}, 200);
  CHECK_FALSE(broken.pass);
  CHECK(broken.check_failed);
  CHECK(broken.measured[0] > 1e-3);
}

TEST_CASE("complete positivity check") {
  const Operator z2 = Operator::Zero(2, 2);
  const std::vector<Operator> xy = {kS * pauli::x(), kS * pauli::y()};
  const auto cp = check_complete_positivity(GKSForm(z2, xy, mat2(1, 0, 0, 2)), {0.1, 1.0});
  CHECK(cp.pass);
  CHECK(cp.measured.back() == doctest::Approx(1.0));

  const auto neg = check_complete_positivity(GKSForm(z2, xy, mat2(1, 0, 0, -0.5)), {1.0, 0.05});
  CHECK(neg.pass);
  CHECK(neg.measured[1] < -1e-6);
  CHECK(neg.measured.back() == doctest::Approx(-0.5));

  std::mt19937_64 rng(51);
  for (int i = 0; i < 10; ++i) {
    const Eigen::MatrixXcd a = random_matrix(rng, 3);
    CHECK(check_complete_positivity(GKSForm(random_hermitian(rng, 2), a * a.adjoint()), {0.1, 1.0}).pass);
  }
  CHECK_THROWS_AS(check_complete_positivity(GKSForm(z2, xy, mat2(1, 0, 0, 2)), {}), std::invalid_argument);
}

TEST_CASE("unravelling equivalence check") {
  const std::vector<UnravelingChoice> same = {standard(), standard()};
  const auto r = check_unraveling_equivalence(dephasing(), same, vec2(kS, kS), config(1e-3, 1.0), 1000, 1.0);
  CHECK(r.pass);
  REQUIRE(r.measured.size() == 3);
  CHECK(r.measured[0] > 0.0);

  IntegrationConfig raw = config(1e-3, 1.0);
  raw.renormalize = false;
  const std::vector<UnravelingChoice> faulty = {standard(), standard(Fault::DropEllSquaredInDrift)};
  const auto f = check_unraveling_equivalence(dephasing(), faulty, vec2(kS, kS), raw, 1000, 1.0);
  CHECK_FALSE(f.pass);
  CHECK_THROWS_AS(check_unraveling_equivalence(dephasing(), {standard()}, vec2(kS, kS), raw, 10, 1.0),
                  std::invalid_argument);
}

TEST_CASE("born rule check on a short run") {
  IntegrationConfig cfg = config(2e-3, 6.0);
  cfg.record_stride = 500;
  const auto r = check_born_rule(dephasing(), standard(), vec2(std::sqrt(0.3), std::sqrt(0.7)), cfg, 1000);
  CHECK(r.pass);
  REQUIRE(r.measured.size() == 4);
  CHECK(std::abs(r.measured[0] - 0.3) <= 3.0 * std::sqrt(0.21 / 1000));
  CHECK_THROWS_AS(check_born_rule(dephasing(), standard(), vec2(kS, kS), cfg, 10, 3), std::invalid_argument);
}

TEST_CASE("variance drift check") {
  const auto r0 = check_variance_drift(dephasing(), 0.0, vec2(kS, kS), config(1e-3, 1.0), 500);
  CHECK(r0.pass);
  CHECK(r0.measured[0] == doctest::Approx(1.0).epsilon(0.1));
  const auto r2 = check_variance_drift(dephasing(), std::numbers::pi / 2, vec2(kS, kS), config(1e-3, 1.0), 100);
  CHECK(r2.pass);
  CHECK(std::abs(r2.measured[1]) <= 1e-9);
  const LindbladModel two(Operator::Zero(2, 2), {pauli::z(), pauli::x()});
  CHECK_THROWS_AS(check_variance_drift(two, 0.0, vec2(kS, kS), config(1e-3, 1.0), 1), std::invalid_argument);
}

TEST_CASE("run_suite basics") {
  ScenarioFile s = small_scenario();
  CHECK(run_suite(s).empty());

  s.suite = json::array({json{{"check", "generator_identity"}, {"samples", 50}},
                         json{{"check", "generator_identity"},
                              {"fault", "zero-ell-in-diffusion"},
                              {"samples", 50},
                              {"expect_failure", true},
                              {"name", "negated"}},
                         json{{"check", "generator_identity"}, {"samples", 50}, {"expect_failure", true}}});
  const auto reports = run_suite(s);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].pass);
  CHECK(reports[1].pass);
  CHECK(reports[1].check == "negated");
  CHECK(reports[1].check_failed);
  CHECK_FALSE(reports[2].pass);

  const json j = suite_report_json(reports);
  for (const char* key : {"check", "pass", "measured", "tolerance", "seconds", "config_hash"}) {
    CHECK(j[0].contains(key));
  }
}

TEST_CASE("run_suite overrides and errors") {
  ScenarioFile s = small_scenario();
  s.suite = json::array({json{{"check", "ensemble_vs_exact"},
                              {"trajectories", 64},
                              {"integration", {{"dt", 0.01}}},
                              {"checkpoints", {0.5}}}});
  const auto r = run_suite(s);
  CHECK(r[0].tolerance == doctest::Approx(ensemble_tolerance(64, 0.01, 2)));

  s.suite = json::array({json{{"check", "nonsense"}}});
  CHECK_THROWS_AS(run_suite(s), ScenarioError);
  s.suite = json::array({json{{"check", "complete_positivity"}}});
  CHECK_THROWS_AS(run_suite(s), ScenarioError);
  s.suite = json::array({json{{"check", "unraveling_equivalence"}}});
  CHECK_THROWS_AS(run_suite(s), ScenarioError);
  s.suite = json::array({json{{"check", "generator_identity"}, {"freedom", "phase:x"}}});
  CHECK_THROWS_AS(run_suite(s), ScenarioError);
}
