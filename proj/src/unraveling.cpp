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

#include "unravel/unraveling.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "unravel/json_io.hpp"

namespace unravel {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

UnitaryFreedom UnitaryFreedom::standard(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  return UnitaryFreedom(ConstantUnitary{Eigen::MatrixXcd::Identity(N, N)}, "standard");
}

UnitaryFreedom UnitaryFreedom::diosi_complex(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  for (Eigen::Index k = 0; k < N; ++k) {
    u(k, k) = s;
    u(k, N + k) = -kI * s;
    u(N + k, k) = kI * s;
    u(N + k, N + k) = -s;
  }
  return UnitaryFreedom(ConstantUnitary{std::move(u)}, "diosi-complex");
}

UnitaryFreedom UnitaryFreedom::linear_potential(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  return UnitaryFreedom(ConstantUnitary{kI * Eigen::MatrixXcd::Identity(N, N)}, "linear-potential");
}

UnitaryFreedom UnitaryFreedom::phase(double f) {
  if (!std::isfinite(f)) throw std::invalid_argument("phase freedom: f must be finite");
  return UnitaryFreedom(ScalarPhase{f}, "phase:" + format_double(f));
}

UnitaryFreedom UnitaryFreedom::unitary(Eigen::MatrixXcd u) {
  std::string label = "unitary:" + matrix_to_json(u).dump();
  return UnitaryFreedom(ConstantUnitary{std::move(u)}, std::move(label));
}

UnitaryFreedom UnitaryFreedom::parse(std::string_view spec, std::size_t n) {
  if (spec == "standard") return standard(n);
  if (spec == "diosi-complex") return diosi_complex(n);
  if (spec == "linear-potential") return linear_potential(n);
  if (spec.rfind("phase:", 0) == 0) {
    const std::string_view num = spec.substr(6);
    double f = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), f);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw std::invalid_argument("freedom '" + std::string(spec) + "': malformed phase value");
    }
    if (n != 1) {
      throw std::invalid_argument("freedom '" + std::string(spec) +
                                  "': scalar phase requires n=1 (model has n=" + std::to_string(n) + ")");
    }
    return phase(f);
  }
  if (spec.rfind("unitary:", 0) == 0) {
    json j;
    try {
      j = json::parse(spec.substr(8));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("freedom '" + std::string(spec) + "': " + e.what());
    }
    return unitary(matrix_from_json(j, "freedom unitary"));
  }
  throw std::invalid_argument("unknown freedom '" + std::string(spec) +
                              "' (expected standard, diosi-complex, linear-potential, "
                              "phase:<f> or unitary:<matrix>)");
}

std::size_t UnitaryFreedom::noise_count() const {
  if (const auto* c = std::get_if<ConstantUnitary>(&variant_)) return static_cast<std::size_t>(c->u.rows());
  return 1;
}

Eigen::MatrixXcd UnitaryFreedom::matrix() const {
  if (const auto* c = std::get_if<ConstantUnitary>(&variant_)) return c->u;
  const double f = std::get<ScalarPhase>(variant_).f;
  Eigen::MatrixXcd u(1, 1);
  u(0, 0) = std::polar(1.0, f);
  return u;
}

std::string UnitaryFreedom::to_string() const { return label_; }

std::string_view to_string(Fault fault) {
  switch (fault) {
    case Fault::None: return "none";
    case Fault::DropEllSquaredInDrift: return "drop-ell-squared";
    case Fault::ZeroEllInDiffusion: return "zero-ell-in-diffusion";
  }
  return "none";
}

Fault parse_fault(std::string_view name) {
  if (name == "none") return Fault::None;
  if (name == "drop-ell-squared") return Fault::DropEllSquaredInDrift;
  if (name == "zero-ell-in-diffusion") return Fault::ZeroEllInDiffusion;
  throw std::invalid_argument("unknown fault '" + std::string(name) + "'");
}

Unraveling::Unraveling(LindbladModel model, UnitaryFreedom freedom, Fault fault)
    : model_(std::move(model)), freedom_(std::move(freedom)), fault_(fault) {
  const std::size_t n = model_.size();
  const Eigen::Index d = model_.dim();
  const Eigen::MatrixXcd u = freedom_.matrix();
  const auto N = static_cast<std::size_t>(u.rows());

  if (std::holds_alternative<ScalarPhase>(freedom_.variant()) && n != 1) {
    throw std::invalid_argument("scalar phase freedom requires exactly one Lindblad operator (n=" +
                                std::to_string(n) + ")");
  }
  if (N < n) {
    throw std::invalid_argument("unitary freedom has N=" + std::to_string(N) +
                                " noises but the model has n=" + std::to_string(n) + " operators");
  }
  const double uv = unitarity_violation(u);
  if (uv > kTol.unitary) throw ValidationError("freedom matrix is not unitary", uv);

  padded_ = model_.lindblad_ops();
  padded_.resize(N, Operator::Zero(d, d));

  rotated_.assign(N, Operator::Zero(d, d));
  stacked_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N) * d, d);
  Operator sum_ldl = Operator::Zero(d, d);
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      rotated_[k] += u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * padded_[j];
    }
    stacked_.middleRows(static_cast<Eigen::Index>(k) * d, d) = rotated_[k];
  }
  // The unrotated sum; invariant under unitary mixing.
  for (std::size_t j = 0; j < n; ++j) sum_ldl += padded_[j].adjoint() * padded_[j];
  deterministic_ = -kI * model_.hamiltonian() - 0.5 * sum_ldl;
}

void Unraveling::evaluate_into(const StateVector& psi, Workspace& ws) const {
  const Eigen::Index d = dim();
  const auto N = static_cast<Eigen::Index>(noise_count());
  require_same_dim(psi.size(), d, "unraveling");

  ws.diffusion.noalias() = stacked_ * psi;  // L_k^(u) psi, stacked
  ws.drift.noalias() = deterministic_ * psi;
  ws.ell.resize(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    auto lpsi = ws.diffusion.segment(k * d, d);
    // 1/2 <psi, (L^dag + L) psi> = Re <psi, L psi>
    const double l = psi.dot(lpsi).real();
    ws.ell(k) = l;
    ws.drift += l * lpsi;  // l_k^* L_k^(u) psi with l_k real
    if (fault_ != Fault::DropEllSquaredInDrift) ws.drift -= (0.5 * l * l) * psi;
    if (fault_ != Fault::ZeroEllInDiffusion) lpsi -= l * psi;
  }
}

DriftDiffusion Unraveling::evaluate(const StateVector& psi) const {
  Workspace ws;
  evaluate_into(psi, ws);
  const Eigen::Index d = dim();
  DriftDiffusion out;
  out.drift = ws.drift;
  for (Eigen::Index k = 0; k < ws.ell.size(); ++k) {
    out.diffusion.emplace_back(ws.diffusion.segment(k * d, d));
    out.ell.emplace_back(ws.ell(k), 0.0);
  }
  return out;
}

std::vector<Operator> rotated_ops(const Unraveling& u) { return u.rotated(); }

cplx ell(const StateVector& psi, const Operator& lk) {
  require_same_dim(psi.size(), lk.rows(), "ell");
  return 0.5 * psi.dot((lk.adjoint() + lk) * psi);
}

std::vector<StateVector> diffusion_vectors(const Unraveling& u, const StateVector& psi) {
  return u.evaluate(psi).diffusion;
}

StateVector drift_vector(const Unraveling& u, const StateVector& psi) { return u.evaluate(psi).drift; }

Operator ito_generator(const Unraveling& u, const StateVector& psi) {
  const DriftDiffusion dd = u.evaluate(psi);
  Operator g = dd.drift * psi.adjoint() + psi * dd.drift.adjoint();
  for (const auto& b : dd.diffusion) g += b * b.adjoint();
  return g;
}

}  // namespace unravel
