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

// unravel: batch front-end for simulation, verification and GKS analysis.
//
//   unravel simulate      --scenario s.json [--out dir] [--seed n] [--threads n] [--no-renormalize]
//   unravel verify        --scenario s.json ...
//   unravel diagonalize   --scenario s.json ...
//   unravel choi          --scenario s.json ...
//   unravel variance-scan --scenario s.json ...
//
// Exit codes: 0 ok, 1 verification failure, 2 usage, parse or I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unravel/observables.hpp"
#include "unravel/output.hpp"
#include "unravel/scenario.hpp"
#include "unravel/verify.hpp"

namespace fs = std::filesystem;
using namespace unravel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitError = 2;

struct CommonArgs {
  std::string scenario;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool no_renormalize = false;
};

struct Context {
  ScenarioFile scenario;
  OutputStamp stamp;
  fs::path out;
  unsigned threads = 1;

  std::string path(const std::string& name) const { return (out / name).string(); }
};

Context load(const CommonArgs& args, const std::string& command) {
  Context ctx;
  ctx.scenario = parse_scenario(args.scenario);
  if (args.seed) ctx.scenario.integration.seed = *args.seed;
  if (args.no_renormalize) ctx.scenario.integration.renormalize = false;
  json hashed = scenario_to_json(ctx.scenario);
  hashed["command"] = command;
  ctx.stamp = OutputStamp{config_hash(hashed), ctx.scenario.integration.seed};
  ctx.out = args.out;
  fs::create_directories(ctx.out);
  ctx.threads = args.threads;
  return ctx;
}

// JSON outputs carry the stamp as top-level fields next to the payload.
void write_json(const Context& ctx, const std::string& name, json payload) {
  json doc{{"config_hash", ctx.stamp.config_hash}, {"seed", ctx.stamp.seed}};
  doc.update(payload);
  write_text_file(ctx.path(name), doc.dump(2) + "\n");
}

int cmd_simulate(const Context& ctx) {
  const ScenarioFile& s = ctx.scenario;
  const Unraveling u = s.unraveling();
  Trajectory first;
  EnsembleOptions opts;
  opts.threads = ctx.threads;
  opts.sink = [&first](std::size_t i, const Trajectory& tr) {
    if (i == 0) first = tr;
  };
  const EnsembleEstimate est = simulate_ensemble(u, s.psi0, s.integration, s.trajectories, opts);

  std::ostringstream ens;
  write_ensemble_csv(ens, est, ctx.stamp);
  write_text_file(ctx.path(s.outputs.ensemble_csv), ens.str());
  std::ostringstream traj;
  write_trajectory_csv(traj, first, ctx.stamp);
  write_text_file(ctx.path(s.outputs.trajectory_csv), traj.str());

  const Superoperator gen = liouvillian(s.model);
  const DensityMatrix rho0 = outer(s.psi0, s.psi0);
  json checkpoints = json::array();
  for (double t : s.checkpoints) {
    // nearest recorded time
    std::size_t best = 0;
    for (std::size_t r = 1; r < est.times.size(); ++r) {
      if (std::abs(est.times[r] - t) < std::abs(est.times[best] - t)) best = r;
    }
    const double tr_t = est.times[best];
    checkpoints.push_back({{"t", tr_t},
                           {"rho_hat", matrix_to_json(est.rho_hat[best])},
                           {"std_error", est.std_error[best]},
                           {"trace_distance_to_exact",
                            trace_distance(est.rho_hat[best], propagate_exact(gen, rho0, tr_t))}});
  }
  write_json(ctx, s.outputs.summary_json,
             json{{"command", "simulate"},
                  {"freedom", u.freedom().to_string()},
                  {"trajectories", est.trajectories},
                  {"records", est.times.size()},
                  {"norm_drift_max", est.norm_drift_max},
                  {"norm_drift_mean", est.norm_drift_mean},
                  {"checkpoints", checkpoints}});
  std::cout << "simulated " << est.trajectories << " trajectories, " << est.times.size() << " records -> "
            << ctx.path(s.outputs.ensemble_csv) << "\n";
  return kExitOk;
}

int cmd_verify(const Context& ctx) {
  const auto reports = run_suite(ctx.scenario, ctx.threads);
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    std::printf("%-4s %-28s tol=%-12.4g %.2fs%s\n", r.pass ? "PASS" : "FAIL", r.check.c_str(), r.tolerance,
                r.seconds, r.expect_failure ? "  (expected failure)" : "");
  }
  write_json(ctx, ctx.scenario.outputs.report_json, json{{"reports", suite_report_json(reports)}, {"pass", all}});
  return all ? kExitOk : kExitVerifyFailed;
}

json operators_json(const std::vector<Operator>& ops) {
  json arr = json::array();
  for (const auto& op : ops) arr.push_back(matrix_to_json(op));
  return arr;
}

const GKSSpec& require_gks(const ScenarioFile& s) {
  if (!s.gks) throw ScenarioError("gks", "this command needs a 'gks' section");
  return *s.gks;
}

int cmd_diagonalize(const Context& ctx) {
  const GKSSpec& gks = require_gks(ctx.scenario);
  const LindbladDecomposition dec = gks_to_lindblad(gks.form);
  write_json(ctx, ctx.scenario.outputs.diagonalize_json,
             json{{"command", "diagonalize"},
                  {"hamiltonian", matrix_to_json(dec.hamiltonian)},
                  {"rates", dec.rates},
                  {"lindblad_ops", operators_json(dec.ops)},
                  {"unitary", matrix_to_json(dec.unitary)},
                  {"completely_positive", dec.completely_positive}});
  std::cout << "rates:";
  for (double c : dec.rates) std::cout << ' ' << format_number(c);
  std::cout << (dec.completely_positive ? "\ncompletely positive\n" : "\nNOT completely positive\n");
  return kExitOk;
}

// Choi matrices of the GKS generator when present, otherwise of the model.
int cmd_choi(const Context& ctx) {
  const ScenarioFile& s = ctx.scenario;
  Superoperator gen;
  std::vector<double> times;
  std::string source;
  if (s.gks) {
    gen = liouvillian(gks_to_lindblad(s.gks->form).generator());
    times = s.gks->times;
    source = "gks";
  } else {
    gen = liouvillian(s.model);
    source = "model";
  }
  if (times.empty()) {
    for (double t : s.checkpoints) {
      if (t > 0.0) times.push_back(t);
    }
  }
  if (times.empty()) throw ScenarioError("gks.times", "no positive times to evaluate");
  json entries = json::array();
  for (double t : times) {
    const Eigen::MatrixXcd c = choi_matrix(gen, t);
    const double lo = min_eigenvalue(c);
    entries.push_back({{"t", t}, {"choi", matrix_to_json(c)}, {"min_eigenvalue", lo}});
    std::cout << "t=" << format_number(t) << " min eigenvalue " << format_number(lo) << "\n";
  }
  write_json(ctx, s.outputs.choi_json, json{{"command", "choi"}, {"source", source}, {"entries", entries}});
  return kExitOk;
}

int cmd_variance_scan(const Context& ctx) {
  const ScenarioFile& s = ctx.scenario;
  if (s.model.size() != 1) throw ScenarioError("lindblad_ops", "variance-scan needs exactly one Lindblad operator");
  if (s.variance_phases.empty()) throw ScenarioError("variance_phases", "no phases to scan");
  const Operator& l = s.model.lindblad_ops().front();
  if (!is_hermitian(l)) throw ScenarioError("lindblad_ops[0]", "variance-scan needs a Hermitian operator");

  std::vector<double> times;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> names;
  for (double f : s.variance_phases) {
    const Unraveling u(s.model, UnitaryFreedom::phase(f));
    std::vector<std::vector<double>> series(s.trajectories);
    EnsembleOptions opts;
    opts.threads = ctx.threads;
    opts.sink = [&](std::size_t i, const Trajectory& tr) {
      series[i].reserve(tr.states.size());
      for (const auto& psi : tr.states) series[i].push_back(variance(psi, l));
    };
    const EnsembleEstimate est = simulate_ensemble(u, s.psi0, s.integration, s.trajectories, opts);
    times = est.times;
    // index-ordered sum keeps the column independent of the thread count
    std::vector<double> mean(times.size(), 0.0);
    for (const auto& v : series) {
      for (std::size_t r = 0; r < v.size(); ++r) mean[r] += v[r];
    }
    for (double& m : mean) m /= static_cast<double>(s.trajectories);
    names.push_back("mean_V_f=" + format_number(f));
    columns.push_back(std::move(mean));
    std::cout << "f=" << format_number(f) << " mean V(t_final)=" << format_number(columns.back().back()) << "\n";
  }
  std::ostringstream csv;
  write_series_csv(csv, times, names, columns, ctx.stamp);
  write_text_file(ctx.path(s.outputs.variance_csv), csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusive unravellings of Lindblad master equations"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&args](CLI::App* sub) {
    sub->add_option("--scenario", args.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", args.seed, "Override the scenario seed");
    sub->add_option("--threads", args.threads, "Worker threads (0 = all cores)")->capture_default_str();
    sub->add_flag("--no-renormalize", args.no_renormalize, "Disable post-step renormalization");
  };

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Context&);
  };
  const std::vector<Command> commands = {
      {"simulate", "Simulate a trajectory ensemble", cmd_simulate},
      {"verify", "Run the verification suite of the scenario", cmd_verify},
      {"diagonalize", "Diagonalize the GKS form into Lindblad rates and operators", cmd_diagonalize},
      {"choi", "Choi matrices of the propagator", cmd_choi},
      {"variance-scan", "Mean collapse variance for each scalar phase", cmd_variance_scan},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    subs.push_back(app.add_subcommand(c.name, c.help));
    add_common(subs.back());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const Context ctx = load(args, commands[i].name);
      return commands[i].run(ctx);
    } catch (const ScenarioError& e) {
      std::cerr << "scenario error: " << e.what() << "\n";
    } catch (const BlowUpError& e) {
      std::cerr << "integration error: " << e.what() << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
  }
  return kExitError;
}
