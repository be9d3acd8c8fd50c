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

#include <string>
#include <vector>

#include "unravel/json_io.hpp"
#include "unravel/lindblad.hpp"
#include "unravel/scenario.hpp"
#include "unravel/sde.hpp"
#include "unravel/unraveling.hpp"

namespace unravel {

/// Outcome of one check. For expected-failure entries `pass` is true exactly
/// when the underlying check failed (`check_failed`).
struct VerificationReport {
  std::string check;
  bool pass = false;
  std::vector<double> measured;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string config_hash;
  bool expect_failure = false;
  bool check_failed = false;
  std::string detail;

  /// {check, pass, measured, tolerance, seconds, config_hash, ...}
  json to_json() const;
};

/// A freedom plus an optional injected fault.
struct UnravelingChoice {
  UnitaryFreedom freedom;
  Fault fault = Fault::None;
};

/// 3 d / sqrt(M) + 5 dt: Monte Carlo error plus weak order-one bias.
double ensemble_tolerance(std::size_t trajectories, double dt, Eigen::Index dim);

/// Trace distance between the ensemble estimate and the exact propagator at
/// every checkpoint; passes iff each distance is within ensemble_tolerance.
/// Checkpoints are placed on the recording grid automatically.
VerificationReport check_ensemble_vs_exact(const LindbladModel& model, const UnravelingChoice& choice,
                                           const StateVector& psi0, const IntegrationConfig& cfg,
                                           std::size_t trajectories, const std::vector<double>& checkpoints,
                                           unsigned threads = 1);

/// Runs every choice (choice i on base seed cfg.seed + i) and compares the
/// ensemble states at time t pairwise (tolerance 2 tol) and against the exact
/// propagator (tolerance tol). `measured` lists the pairwise distances in
/// (0,1), (0,2), ..., (1,2), ... order followed by the distances to the exact
/// state.
VerificationReport check_unraveling_equivalence(const LindbladModel& model,
                                                const std::vector<UnravelingChoice>& choices,
                                                const StateVector& psi0, const IntegrationConfig& cfg,
                                                std::size_t trajectories, double t, unsigned threads = 1);

/// Deterministic: max-entry deviation between the Ito generator of |psi><psi|
/// and lindblad_rhs at `samples` random unit states; passes at
/// kTol.generator_match.
VerificationReport check_generator_identity(const LindbladModel& model, const UnravelingChoice& choice,
                                            std::size_t samples, std::uint64_t seed = 0);

/// Diagonalizes the GKS form. With all rates >= -kTol.negative_rate the Choi
/// matrix must stay PSD (min eigenvalue >= -kTol.positivity) at every time;
/// otherwise the Choi minimum eigenvalue at the smallest time must fall below
/// -1e-6. `measured` holds the Choi minimum eigenvalue per time, then the
/// smallest rate.
VerificationReport check_complete_positivity(const GKSForm& gks, const std::vector<double>& times);

/// Born statistics for a Hermitian Lindblad operator (index `observable`)
/// with H = 0 in mind. Passes iff each sector frequency lies within three
/// standard errors of ||P_n psi0||^2 and Tr(P_n rho_hat(t)) stays within
/// 3 / sqrt(M) of its initial value at every recorded time. `measured` holds
/// frequencies, then max martingale deviation, then the unclassified fraction.
VerificationReport check_born_rule(const LindbladModel& model, const UnravelingChoice& choice,
                                   const StateVector& psi0, const IntegrationConfig& cfg,
                                   std::size_t trajectories, std::size_t observable = 0,
                                   double tol = kTol.born_classification, unsigned threads = 1);

/// Fits the empirical variance rate against -4 cos^2(f) V^2 for the scalar
/// phase freedom f (single Hermitian operator). For cos^2 f > 1e-12 passes
/// iff |slope - 1| <= 0.1; otherwise iff |mean rate| <= 0.02. `measured`
/// holds slope, mean empirical rate and mean predicted rate.
VerificationReport check_variance_drift(const LindbladModel& model, double f, const StateVector& psi0,
                                        const IntegrationConfig& cfg, std::size_t trajectories,
                                        unsigned threads = 1);

/// Executes scenario.suite in declaration order. Entries are objects with a
/// "check" name and optional overrides of the scenario defaults:
///
///   ensemble_vs_exact       freedom, fault, trajectories, integration, checkpoints
///   unraveling_equivalence  freedoms (strings or {freedom, fault}), trajectories, integration, t
///   generator_identity      freedom, fault, samples, seed
///   complete_positivity     gks (defaults to scenario.gks), times
///   born_rule               freedom, fault, trajectories, integration, observable, tol
///   variance_drift          phase, trajectories, integration
///
/// Every entry may set "expect_failure": true and a display "name".
/// Throws ScenarioError for malformed entries.
std::vector<VerificationReport> run_suite(const ScenarioFile& scenario, unsigned threads = 1);

json suite_report_json(const std::vector<VerificationReport>& reports);

}  // namespace unravel
