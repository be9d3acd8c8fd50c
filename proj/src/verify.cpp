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

#include "unravel/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "unravel/observables.hpp"

namespace unravel {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json choice_to_json(const UnravelingChoice& c) {
  return json{{"freedom", c.freedom.to_string()}, {"fault", std::string(to_string(c.fault))}};
}

// Step indices of the checkpoints; each must lie on the dt grid.
std::vector<std::size_t> checkpoint_steps(const std::vector<double>& checkpoints, double dt) {
  std::vector<std::size_t> steps;
  for (double t : checkpoints) {
    if (t < 0.0) throw std::invalid_argument("checkpoint times must be nonnegative");
    const double s = std::round(t / dt);
    if (std::abs(s * dt - t) > 1e-9 * std::max(1.0, t)) {
      throw std::invalid_argument("checkpoint " + std::to_string(t) + " is not a multiple of dt");
    }
    steps.push_back(static_cast<std::size_t>(s));
  }
  return steps;
}

// Integration settings that end at the last checkpoint and record every
// checkpoint.
IntegrationConfig grid_config(IntegrationConfig cfg, const std::vector<std::size_t>& steps) {
  std::size_t last = 0;
  std::size_t stride = 0;
  for (auto s : steps) {
    last = std::max(last, s);
    if (s > 0) stride = std::gcd(stride, s);
  }
  last = std::max<std::size_t>(last, 1);
  cfg.t_final = static_cast<double>(last) * cfg.dt;
  cfg.record_stride = stride > 0 ? stride : 1;
  return cfg;
}

StateVector random_unit_state(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  StateVector psi(d);
  for (Eigen::Index i = 0; i < d; ++i) psi(i) = cplx(g(rng), g(rng));
  return psi / psi.norm();
}

VerificationReport finish(VerificationReport r, bool ok, Clock::time_point start) {
  r.check_failed = !ok;
  r.pass = r.expect_failure ? !ok : ok;
  r.seconds = elapsed(start);
  return r;
}

VerificationReport blown_up(VerificationReport r, const BlowUpError& e, Clock::time_point start) {
  r.measured.clear();
  r.detail = std::string("integration blew up: ") + e.what();
  return finish(std::move(r), false, start);
}

}  // namespace

json VerificationReport::to_json() const {
  return json{{"check", check},
              {"pass", pass},
              {"measured", measured},
              {"tolerance", tolerance},
              {"seconds", seconds},
              {"config_hash", config_hash},
              {"expect_failure", expect_failure},
              {"check_failed", check_failed},
              {"detail", detail}};
}

double ensemble_tolerance(std::size_t trajectories, double dt, Eigen::Index dim) {
  return 3.0 * static_cast<double>(dim) / std::sqrt(static_cast<double>(trajectories)) + 5.0 * dt;
}

VerificationReport check_ensemble_vs_exact(const LindbladModel& model, const UnravelingChoice& choice,
                                           const StateVector& psi0, const IntegrationConfig& cfg,
                                           std::size_t trajectories, const std::vector<double>& checkpoints,
                                           unsigned threads) {
  const auto start = Clock::now();
  VerificationReport r;
  r.check = "ensemble_vs_exact";
  r.config_hash = config_hash(json{{"check", r.check},
                                   {"model", model_to_json(model)},
                                   {"choice", choice_to_json(choice)},
                                   {"psi0", vector_to_json(psi0)},
                                   {"integration", integration_to_json(cfg)},
                                   {"trajectories", trajectories},
                                   {"checkpoints", checkpoints}});
  r.tolerance = ensemble_tolerance(trajectories, cfg.dt, model.dim());

  const auto steps = checkpoint_steps(checkpoints, cfg.dt);
  const IntegrationConfig run = grid_config(cfg, steps);
  const Unraveling u(model, choice.freedom, choice.fault);
  EnsembleOptions opts;
  opts.threads = threads;
  EnsembleEstimate est;
  try {
    est = simulate_ensemble(u, psi0, run, trajectories, opts);
  } catch (const BlowUpError& e) {
    return blown_up(std::move(r), e, start);
  }

  const Superoperator gen = liouvillian(model);
  const DensityMatrix rho0 = outer(psi0, psi0);
  bool ok = true;
  for (auto s : steps) {
    const std::size_t idx = s / run.record_stride;
    const DensityMatrix exact = propagate_exact(gen, rho0, est.times[idx]);
    const double dist = trace_distance(est.rho_hat[idx], exact);
    r.measured.push_back(dist);
    ok = ok && dist <= r.tolerance;
  }
  r.detail = "trace distance to the exact propagator per checkpoint";
  return finish(std::move(r), ok, start);
}

VerificationReport check_unraveling_equivalence(const LindbladModel& model,
                                                const std::vector<UnravelingChoice>& choices,
                                                const StateVector& psi0, const IntegrationConfig& cfg,
                                                std::size_t trajectories, double t, unsigned threads) {
  if (choices.size() < 2) throw std::invalid_argument("unraveling equivalence needs at least two freedoms");
  const auto start = Clock::now();
  VerificationReport r;
  r.check = "unraveling_equivalence";
  json cj = json::array();
  for (const auto& c : choices) cj.push_back(choice_to_json(c));
  r.config_hash = config_hash(json{{"check", r.check},
                                   {"model", model_to_json(model)},
                                   {"choices", cj},
                                   {"psi0", vector_to_json(psi0)},
                                   {"integration", integration_to_json(cfg)},
                                   {"trajectories", trajectories},
                                   {"t", t}});
  r.tolerance = ensemble_tolerance(trajectories, cfg.dt, model.dim());

  const auto steps = checkpoint_steps({t}, cfg.dt);
  std::vector<DensityMatrix> finals;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    IntegrationConfig run = grid_config(cfg, steps);
    run.seed = cfg.seed + i;
    const Unraveling u(model, choices[i].freedom, choices[i].fault);
    EnsembleOptions opts;
    opts.threads = threads;
    try {
      finals.push_back(simulate_ensemble(u, psi0, run, trajectories, opts).rho_hat.back());
    } catch (const BlowUpError& e) {
      return blown_up(std::move(r), e, start);
    }
  }
  const DensityMatrix exact = propagate_exact(model, outer(psi0, psi0), static_cast<double>(steps[0]) * cfg.dt);

  bool ok = true;
  for (std::size_t a = 0; a < finals.size(); ++a) {
    for (std::size_t b = a + 1; b < finals.size(); ++b) {
      const double dist = trace_distance(finals[a], finals[b]);
      r.measured.push_back(dist);
      ok = ok && dist <= 2.0 * r.tolerance;
    }
  }
  for (const auto& rho : finals) {
    const double dist = trace_distance(rho, exact);
    r.measured.push_back(dist);
    ok = ok && dist <= r.tolerance;
  }
  r.detail = "pairwise distances (tolerance 2x), then distances to the exact state";
  return finish(std::move(r), ok, start);
}

VerificationReport check_generator_identity(const LindbladModel& model, const UnravelingChoice& choice,
                                            std::size_t samples, std::uint64_t seed) {
  const auto start = Clock::now();
  VerificationReport r;
  r.check = "generator_identity";
  r.config_hash = config_hash(json{{"check", r.check},
                                   {"model", model_to_json(model)},
                                   {"choice", choice_to_json(choice)},
                                   {"samples", samples},
                                   {"seed", seed}});
  r.tolerance = kTol.generator_match;
  const Unraveling u(model, choice.freedom, choice.fault);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const StateVector psi = random_unit_state(rng, model.dim());
    const Operator diff = ito_generator(u, psi) - lindblad_rhs(model, outer(psi, psi));
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  r.measured = {worst};
  r.detail = "max-entry deviation of the Ito generator from the Lindblad right-hand side";
  return finish(std::move(r), worst <= r.tolerance, start);
}

VerificationReport check_complete_positivity(const GKSForm& gks, const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("complete positivity check needs at least one time");
  const auto start = Clock::now();
  VerificationReport r;
  r.check = "complete_positivity";
  json basis = json::array();
  for (const auto& f : gks.basis()) basis.push_back(matrix_to_json(f));
  r.config_hash = config_hash(json{{"check", r.check},
                                   {"hamiltonian", matrix_to_json(gks.hamiltonian())},
                                   {"basis", basis},
                                   {"kossakowski", matrix_to_json(gks.kossakowski())},
                                   {"times", times}});
  const LindbladDecomposition dec = gks_to_lindblad(gks);
  const Superoperator gen = liouvillian(dec.generator());
  for (double t : times) r.measured.push_back(min_eigenvalue(choi_matrix(gen, t)));
  const double min_rate = dec.rates.empty() ? 0.0 : *std::min_element(dec.rates.begin(), dec.rates.end());
  r.measured.push_back(min_rate);

  bool ok = true;
  if (dec.completely_positive) {
    r.tolerance = -kTol.positivity;
    for (std::size_t i = 0; i < times.size(); ++i) ok = ok && r.measured[i] >= -kTol.positivity;
    r.detail = "all rates nonnegative; Choi matrix must be PSD at every time";
  } else {
    r.tolerance = -1e-6;
    const auto first = static_cast<std::size_t>(std::min_element(times.begin(), times.end()) - times.begin());
    ok = r.measured[first] < -1e-6;
    r.detail = "negative rate present; Choi matrix must be indefinite at the smallest time";
  }
  return finish(std::move(r), ok, start);
}

VerificationReport check_born_rule(const LindbladModel& model, const UnravelingChoice& choice,
                                   const StateVector& psi0, const IntegrationConfig& cfg,
                                   std::size_t trajectories, std::size_t observable, double tol,
                                   unsigned threads) {
  if (observable >= model.size()) throw std::invalid_argument("born_rule: observable index out of range");
  const auto start = Clock::now();
  VerificationReport r;
  r.check = "born_rule";
  r.config_hash = config_hash(json{{"check", r.check},
                                   {"model", model_to_json(model)},
                                   {"choice", choice_to_json(choice)},
                                   {"psi0", vector_to_json(psi0)},
                                   {"integration", integration_to_json(cfg)},
                                   {"trajectories", trajectories},
                                   {"observable", observable},
                                   {"tol", tol}});
  const Operator& l = model.lindblad_ops()[observable];
  const Unraveling u(model, choice.freedom, choice.fault);
  EnsembleOptions opts;
  opts.threads = threads;
  opts.keep_final_states = true;
  EnsembleEstimate est;
  try {
    est = simulate_ensemble(u, psi0, cfg, trajectories, opts);
  } catch (const BlowUpError& e) {
    return blown_up(std::move(r), e, start);
  }
  const BornReport born = born_statistics(est.final_states, l, psi0, tol);
  const auto sectors = spectral_sectors(l);

  bool ok = true;
  for (std::size_t n = 0; n < born.frequencies.size(); ++n) {
    r.measured.push_back(born.frequencies[n]);
    ok = ok && std::abs(born.frequencies[n] - born.predicted[n]) <= 3.0 * born.standard_errors[n] + 1e-12;
  }
  double martingale = 0.0;
  for (const auto& rho : est.rho_hat) {
    for (std::size_t n = 0; n < sectors.size(); ++n) {
      martingale = std::max(martingale, std::abs((sectors[n].projector * rho).trace().real() - born.predicted[n]));
    }
  }
  const double martingale_tol = 3.0 / std::sqrt(static_cast<double>(trajectories));
  ok = ok && martingale <= martingale_tol;
  r.measured.push_back(martingale);
  r.measured.push_back(born.unclassified_fraction());
  r.tolerance = martingale_tol;
  r.detail = "sector frequencies (3 standard errors), martingale deviation, unclassified fraction";
  return finish(std::move(r), ok, start);
}

VerificationReport check_variance_drift(const LindbladModel& model, double f, const StateVector& psi0,
                                        const IntegrationConfig& cfg, std::size_t trajectories,
                                        unsigned threads) {
  if (model.size() != 1) throw std::invalid_argument("variance_drift: needs exactly one Lindblad operator");
  const auto start = Clock::now();
  VerificationReport r;
  r.check = "variance_drift";
  r.config_hash = config_hash(json{{"check", r.check},
                                   {"model", model_to_json(model)},
                                   {"phase", f},
                                   {"psi0", vector_to_json(psi0)},
                                   {"integration", integration_to_json(cfg)},
                                   {"trajectories", trajectories}});
  const Operator& l = model.lindblad_ops().front();
  const Unraveling u(model, UnitaryFreedom::phase(f));
  std::vector<std::vector<double>> series(trajectories);
  EnsembleOptions opts;
  opts.threads = threads;
  opts.sink = [&](std::size_t i, const Trajectory& tr) {
    auto& v = series[i];
    v.reserve(tr.states.size());
    for (const auto& psi : tr.states) v.push_back(variance(psi, l));
  };
  EnsembleEstimate est;
  try {
    est = simulate_ensemble(u, psi0, cfg, trajectories, opts);
  } catch (const BlowUpError& e) {
    return blown_up(std::move(r), e, start);
  }
  const VarianceDriftFit fit = fit_variance_drift(series, est.times, f);
  r.measured = {fit.slope, fit.mean_rate, fit.mean_predicted};
  const double c2 = std::cos(f) * std::cos(f);
  bool ok = false;
  if (c2 > 1e-12) {
    r.tolerance = 0.1;
    ok = std::abs(fit.slope - 1.0) <= r.tolerance;
    r.detail = "slope of empirical dV/dt against -4 cos^2(f) V^2";
  } else {
    r.tolerance = 0.02;
    ok = std::abs(fit.mean_rate) <= r.tolerance;
    r.detail = "mean empirical dV/dt for a non-collapsing freedom";
  }
  return finish(std::move(r), ok, start);
}

namespace {

UnravelingChoice parse_choice(const json& entry, const ScenarioFile& s, const std::string& field) {
  std::string freedom = s.freedom;
  Fault fault = Fault::None;
  if (entry.is_string()) {
    freedom = entry.get<std::string>();
  } else if (entry.is_object()) {
    if (entry.contains("freedom")) freedom = entry["freedom"].get<std::string>();
    if (entry.contains("fault")) fault = parse_fault(entry["fault"].get<std::string>());
  } else {
    throw ScenarioError(field, "expected a freedom string or an object");
  }
  return UnravelingChoice{UnitaryFreedom::parse(freedom, s.model.size()), fault};
}

IntegrationConfig merged_integration(const json& entry, const ScenarioFile& s, const std::string& field) {
  if (!entry.contains("integration")) return s.integration;
  json base = integration_to_json(s.integration);
  base.update(entry["integration"]);
  return integration_from_json(base, field + ".integration");
}

VerificationReport run_entry(const json& e, const ScenarioFile& s, const std::string& field, unsigned threads) {
  const std::string check = e["check"].get<std::string>();
  const std::size_t trajectories = e.value("trajectories", s.trajectories);
  const IntegrationConfig cfg = merged_integration(e, s, field);

  if (check == "ensemble_vs_exact") {
    const auto checkpoints = e.contains("checkpoints") ? e["checkpoints"].get<std::vector<double>>() : s.checkpoints;
    return check_ensemble_vs_exact(s.model, parse_choice(e, s, field), s.psi0, cfg, trajectories, checkpoints,
                                   threads);
  }
  if (check == "unraveling_equivalence") {
    if (!e.contains("freedoms") || !e["freedoms"].is_array()) {
      throw ScenarioError(field + ".freedoms", "expected an array of freedoms");
    }
    std::vector<UnravelingChoice> choices;
    for (std::size_t i = 0; i < e["freedoms"].size(); ++i) {
      choices.push_back(parse_choice(e["freedoms"][i], s, field + ".freedoms[" + std::to_string(i) + "]"));
    }
    const double t = e.value("t", s.checkpoints.empty() ? cfg.t_final : s.checkpoints.back());
    return check_unraveling_equivalence(s.model, choices, s.psi0, cfg, trajectories, t, threads);
  }
  if (check == "generator_identity") {
    return check_generator_identity(s.model, parse_choice(e, s, field), e.value("samples", std::size_t{1000}),
                                    e.value("seed", cfg.seed));
  }
  if (check == "complete_positivity") {
    std::optional<GKSSpec> gks = s.gks;
    if (e.contains("gks")) gks = gks_from_json(e["gks"], s.model.dim(), field + ".gks");
    if (!gks) throw ScenarioError(field + ".gks", "no GKS form in the entry or the scenario");
    std::vector<double> times = e.contains("times") ? e["times"].get<std::vector<double>>() : gks->times;
    return check_complete_positivity(gks->form, times);
  }
  if (check == "born_rule") {
    return check_born_rule(s.model, parse_choice(e, s, field), s.psi0, cfg, trajectories,
                           e.value("observable", s.observable), e.value("tol", kTol.born_classification), threads);
  }
  if (check == "variance_drift") {
    return check_variance_drift(s.model, e.value("phase", 0.0), s.psi0, cfg, trajectories, threads);
  }
  throw ScenarioError(field + ".check", "unknown check '" + check + "'");
}

}  // namespace

std::vector<VerificationReport> run_suite(const ScenarioFile& scenario, unsigned threads) {
  std::vector<VerificationReport> reports;
  for (std::size_t i = 0; i < scenario.suite.size(); ++i) {
    const json& e = scenario.suite[i];
    const std::string field = "suite[" + std::to_string(i) + "]";
    VerificationReport r;
    try {
      r = run_entry(e, scenario, field, threads);
    } catch (const ScenarioError&) {
      throw;
    } catch (const json::exception& ex) {
      throw ScenarioError(field, ex.what());
    } catch (const std::invalid_argument& ex) {
      throw ScenarioError(field, ex.what());
    }
    if (e.value("expect_failure", false)) {
      r.expect_failure = true;
      r.pass = r.check_failed;
    }
    if (e.contains("name")) r.check = e["name"].get<std::string>();
    reports.push_back(std::move(r));
  }
  return reports;
}

json suite_report_json(const std::vector<VerificationReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr;
}

}  // namespace unravel
