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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unravel/lindblad.hpp"
#include "unravel/observables.hpp"
#include "unravel/scenario.hpp"
#include "unravel/sde.hpp"
#include "unravel/unraveling.hpp"
#include "unravel/verify.hpp"

namespace py = pybind11;
using namespace unravel;

namespace {

UnitaryFreedom freedom_from(const py::object& spec, std::size_t n) {
  if (py::isinstance<py::str>(spec)) return UnitaryFreedom::parse(spec.cast<std::string>(), n);
  return UnitaryFreedom::unitary(spec.cast<Eigen::MatrixXcd>());
}

Unraveling make_unraveling(const Operator& h, const std::vector<Operator>& ops, const py::object& freedom,
                           const std::string& fault) {
  LindbladModel model(h, ops);
  const std::size_t n = model.size();
  return Unraveling(std::move(model), freedom_from(freedom, n), parse_fault(fault));
}

py::dict report_dict(const VerificationReport& r) {
  return py::module_::import("json").attr("loads")(r.to_json().dump());
}

}  // namespace

PYBIND11_MODULE(_unravel, m) {
  m.doc() = "Bindings for the unravel quantum-trajectory library";

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_ArithmeticError);

  m.def("lindblad_rhs",
        [](const Operator& h, const std::vector<Operator>& ops, const DensityMatrix& rho) {
          return lindblad_rhs(LindbladModel(h, ops), rho);
        },
        py::arg("hamiltonian"), py::arg("lindblad_ops"), py::arg("rho"));

  m.def("propagate_exact",
        [](const Operator& h, const std::vector<Operator>& ops, const DensityMatrix& rho0, double t) {
          return propagate_exact(LindbladModel(h, ops), rho0, t);
        },
        py::arg("hamiltonian"), py::arg("lindblad_ops"), py::arg("rho0"), py::arg("t"));

  m.def("choi_matrix",
        [](const Operator& h, const std::vector<Operator>& ops, double t) {
          return choi_matrix(LindbladModel(h, ops), t);
        },
        py::arg("hamiltonian"), py::arg("lindblad_ops"), py::arg("t"));

  m.def("gks_to_lindblad",
        [](const Operator& h, const Eigen::MatrixXcd& c, std::optional<std::vector<Operator>> basis) {
          const GKSForm gks = basis ? GKSForm(h, *basis, c) : GKSForm(h, c);
          const LindbladDecomposition dec = gks_to_lindblad(gks);
          py::dict out;
          out["hamiltonian"] = dec.hamiltonian;
          out["rates"] = dec.rates;
          out["ops"] = dec.ops;
          out["unitary"] = dec.unitary;
          out["completely_positive"] = dec.completely_positive;
          return out;
        },
        py::arg("hamiltonian"), py::arg("kossakowski"), py::arg("basis") = py::none());

  m.def("gks_choi_matrix",
        [](const Operator& h, const Eigen::MatrixXcd& c, double t, std::optional<std::vector<Operator>> basis) {
          const GKSForm gks = basis ? GKSForm(h, *basis, c) : GKSForm(h, c);
          return choi_matrix(liouvillian(gks), t);
        },
        py::arg("hamiltonian"), py::arg("kossakowski"), py::arg("t"), py::arg("basis") = py::none());

  m.def("gell_mann_basis", &gell_mann_basis, py::arg("d"));
  m.def("trace_distance", &trace_distance, py::arg("rho"), py::arg("sigma"));

  m.def("drift_diffusion",
        [](const Operator& h, const std::vector<Operator>& ops, const StateVector& psi, const py::object& freedom,
           const std::string& fault) {
          const Unraveling u = make_unraveling(h, ops, freedom, fault);
          const DriftDiffusion dd = u.evaluate(psi);
          return py::make_tuple(dd.drift, dd.diffusion);
        },
        py::arg("hamiltonian"), py::arg("lindblad_ops"), py::arg("psi"), py::arg("freedom") = "standard",
        py::arg("fault") = "none");

  m.def("diffusion_matrix",
        [](const Operator& h, const std::vector<Operator>& ops, const StateVector& psi, const py::object& freedom) {
          return diffusion_matrix(make_unraveling(h, ops, freedom, "none"), psi);
        },
        py::arg("hamiltonian"), py::arg("lindblad_ops"), py::arg("psi"), py::arg("freedom") = "standard");

  m.def("simulate",
        [](const Operator& h, const std::vector<Operator>& ops, const StateVector& psi0, const py::object& freedom,
           double dt, double t_final, std::size_t trajectories, std::uint64_t seed, std::size_t record_stride,
           bool renormalize, unsigned threads, const std::string& fault) {
          const Unraveling u = make_unraveling(h, ops, freedom, fault);
          IntegrationConfig cfg;
          cfg.dt = dt;
          cfg.t_final = t_final;
          cfg.seed = seed;
          cfg.record_stride = record_stride;
          cfg.renormalize = renormalize;
          EnsembleOptions opt;
          opt.threads = threads;
          opt.keep_final_states = true;
          EnsembleEstimate est;
          {
            py::gil_scoped_release release;
            est = simulate_ensemble(u, psi0, cfg, trajectories, opt);
          }
          py::dict out;
          out["times"] = est.times;
          out["rho_hat"] = est.rho_hat;
          out["std_error"] = est.std_error;
          out["final_states"] = est.final_states;
          out["norm_drift_max"] = est.norm_drift_max;
          out["norm_drift_mean"] = est.norm_drift_mean;
          return out;
        },
        py::arg("hamiltonian"), py::arg("lindblad_ops"), py::arg("psi0"), py::arg("freedom") = "standard",
        py::arg("dt") = 1e-3, py::arg("t_final") = 1.0, py::arg("trajectories") = 1000, py::arg("seed") = 0,
        py::arg("record_stride") = 1, py::arg("renormalize") = true, py::arg("threads") = 1,
        py::arg("fault") = "none");

  m.def("born_statistics",
        [](const std::vector<StateVector>& states, const Operator& l, const StateVector& psi0, double tol) {
          const BornReport b = born_statistics(states, l, psi0, tol);
          py::dict out;
          out["eigenvalues"] = b.eigenvalues;
          out["frequencies"] = b.frequencies;
          out["predicted"] = b.predicted;
          out["standard_errors"] = b.standard_errors;
          out["unclassified_fraction"] = b.unclassified_fraction();
          return out;
        },
        py::arg("final_states"), py::arg("observable"), py::arg("psi0"), py::arg("tol") = kTol.born_classification);

  m.def("variance", &variance, py::arg("psi"), py::arg("observable"));

  m.def("verify_scenario",
        [](const std::string& path, unsigned threads) {
          const ScenarioFile s = parse_scenario(path);
          std::vector<VerificationReport> reports;
          {
            py::gil_scoped_release release;
            reports = run_suite(s, threads);
          }
          py::list out;
          for (const auto& r : reports) out.append(report_dict(r));
          return out;
        },
        py::arg("path"), py::arg("threads") = 1);

  m.def("scenario_hash",
        [](const std::string& path) { return config_hash(scenario_to_json(parse_scenario(path))); },
        py::arg("path"));
}
