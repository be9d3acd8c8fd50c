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
#include <string_view>
#include <variant>
#include <vector>

#include "unravel/hilbert.hpp"
#include "unravel/lindblad.hpp"

namespace unravel {

/// Constant N x N unitary mixing the (zero-padded) Lindblad operators.
struct ConstantUnitary {
  Eigen::MatrixXcd u;
};

/// Single global phase e^{if} on a single Lindblad operator (n = N = 1).
struct ScalarPhase {
  double f = 0.0;
};

/// The unitary freedom that selects one member of the family of diffusive
/// unravellings of a fixed Lindblad equation.
///
/// Named presets, for a model with n operators:
///   standard          u = 1_n                                   (N = n)
///   diosi-complex     u = [[1, -i], [i, -1]] / sqrt(2) blockwise (N = 2n)
///   linear-potential  u = i 1_n                                 (N = n)
///   phase:<f>         scalar phase e^{if}, n = 1
///   unitary:<matrix>  explicit N x N unitary, JSON [[[re, im], ...], ...]
class UnitaryFreedom {
 public:
  using Variant = std::variant<ConstantUnitary, ScalarPhase>;

  static UnitaryFreedom standard(std::size_t n);
  static UnitaryFreedom diosi_complex(std::size_t n);
  static UnitaryFreedom linear_potential(std::size_t n);
  static UnitaryFreedom phase(double f);
  static UnitaryFreedom unitary(Eigen::MatrixXcd u);

  /// Parses one of the preset strings above for a model with n operators.
  /// Throws std::invalid_argument with a description on malformed input.
  static UnitaryFreedom parse(std::string_view spec, std::size_t n);

  const Variant& variant() const { return variant_; }
  std::size_t noise_count() const;
  /// The N x N matrix u; for ScalarPhase this is [e^{if}].
  Eigen::MatrixXcd matrix() const;
  /// Canonical string accepted by parse().
  std::string to_string() const;

 private:
  UnitaryFreedom(Variant v, std::string label) : variant_(std::move(v)), label_(std::move(label)) {}
  Variant variant_;
  std::string label_;
};

/// Deliberate departures from the prescribed drift/diffusion pair, used by
/// the verification harness to show that non-conforming unravellings are
/// detected.
enum class Fault {
  None,
  DropEllSquaredInDrift,  // omit the |l_k|^2 psi term of the drift
  ZeroEllInDiffusion,     // B_k = L_k psi while the drift keeps l_k
};

std::string_view to_string(Fault fault);
Fault parse_fault(std::string_view name);

/// Drift A(psi), diffusion vectors B_k(psi) and functionals l_k evaluated at
/// one state. The gauge functionals g and h_k are identically zero.
struct DriftDiffusion {
  StateVector drift;
  std::vector<StateVector> diffusion;
  std::vector<cplx> ell;
};

/// A Lindblad model together with a unitary freedom. Everything that does not
/// depend on psi is precomputed at construction.
class Unraveling {
 public:
  Unraveling(LindbladModel model, UnitaryFreedom freedom, Fault fault = Fault::None);

  const LindbladModel& model() const { return model_; }
  const UnitaryFreedom& freedom() const { return freedom_; }
  Fault fault() const { return fault_; }
  Eigen::Index dim() const { return model_.dim(); }
  std::size_t noise_count() const { return padded_.size(); }

  /// L_1..L_n followed by N - n zero operators.
  const std::vector<Operator>& padded_ops() const { return padded_; }
  /// L_k^(u) = sum_j u_kj L_j.
  const std::vector<Operator>& rotated() const { return rotated_; }

  DriftDiffusion evaluate(const StateVector& psi) const;

  /// Non-allocating evaluation for the integrator. After the call,
  /// `diffusion` holds B_1..B_N stacked (N d entries), `drift` holds A(psi).
  struct Workspace {
    Eigen::VectorXcd diffusion;
    Eigen::VectorXcd drift;
    Eigen::VectorXd ell;
  };
  void evaluate_into(const StateVector& psi, Workspace& ws) const;

 private:
  LindbladModel model_;
  UnitaryFreedom freedom_;
  Fault fault_;
  std::vector<Operator> padded_;
  std::vector<Operator> rotated_;
  Eigen::MatrixXcd stacked_;     // (N d) x d, rotated operators stacked by rows
  Operator deterministic_;       // -iH - 1/2 sum_k L_k^dag L_k
};

std::vector<Operator> rotated_ops(const Unraveling& u);

/// l = 1/2 <psi, (L^dag + L) psi>, real for every L.
cplx ell(const StateVector& psi, const Operator& lk);

/// B_k(psi) = L_k^(u) psi - l_k psi.
std::vector<StateVector> diffusion_vectors(const Unraveling& u, const StateVector& psi);

/// A(psi) = -iH psi - 1/2 sum_k (L_k^dag L_k psi - 2 l_k^* L_k^(u) psi + |l_k|^2 psi).
StateVector drift_vector(const Unraveling& u, const StateVector& psi);

/// |A><psi| + |psi><A| + sum_k |B_k><B_k|, the one-step Ito generator of
/// |psi><psi|. Equals lindblad_rhs(model, |psi><psi|) for every conforming
/// unravelling.
Operator ito_generator(const Unraveling& u, const StateVector& psi);

}  // namespace unravel
