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

#include <vector>

#include "unravel/hilbert.hpp"

namespace unravel {

/// Hamiltonian H plus Lindblad operators L_1..L_n of a Markovian master
/// equation
///
///   d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
///
/// Construction checks that H is Hermitian and that {1, L_1, ..., L_n} is
/// linearly independent. H is not required to be traceless; a trace part only
/// contributes a global phase.
class LindbladModel {
 public:
  LindbladModel(Operator hamiltonian, std::vector<Operator> lindblad_ops);

  Eigen::Index dim() const { return hamiltonian_.rows(); }
  std::size_t size() const { return ops_.size(); }
  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<Operator>& lindblad_ops() const { return ops_; }

 private:
  Operator hamiltonian_;
  std::vector<Operator> ops_;
};

/// Generator with real (possibly negative) rates:
///   -i[H, rho] + sum_k c_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
/// Negative rates describe non completely positive generators, which this
/// type can represent but LindbladModel cannot.
struct WeightedGenerator {
  Operator hamiltonian;
  std::vector<double> rates;
  std::vector<Operator> ops;
};

/// Master equation in a fixed traceless orthonormal operator basis:
///   -i[H, rho] + sum_ij c_ij (F_i rho F_j^dag - 1/2 {F_j^dag F_i, rho}).
/// The coefficient matrix c is Hermitian but not required to be PSD. The basis
/// may be any orthonormal traceless family of at most d^2 - 1 operators.
class GKSForm {
 public:
  GKSForm(Operator hamiltonian, std::vector<Operator> basis, Eigen::MatrixXcd kossakowski);
  /// Uses the normalized generalized Gell-Mann basis of dimension d.
  GKSForm(Operator hamiltonian, Eigen::MatrixXcd kossakowski);

  Eigen::Index dim() const { return hamiltonian_.rows(); }
  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<Operator>& basis() const { return basis_; }
  const Eigen::MatrixXcd& kossakowski() const { return kossakowski_; }

 private:
  Operator hamiltonian_;
  std::vector<Operator> basis_;
  Eigen::MatrixXcd kossakowski_;
};

/// Linear map on column-major vectorized d x d matrices.
struct Superoperator {
  Eigen::Index dim = 0;
  Eigen::MatrixXcd matrix;  // d^2 x d^2

  Operator apply(const Operator& rho) const;
};

/// Traceless Hermitian basis with Tr(F_i^dag F_j) = delta_ij. Ordered as the
/// symmetric and antisymmetric pair for every (j < k), then the d - 1
/// diagonal elements. For d = 2 this is (sigma_x, sigma_y, sigma_z) / sqrt(2).
std::vector<Operator> gell_mann_basis(Eigen::Index d);

Operator lindblad_rhs(const LindbladModel& model, const Operator& rho);
Operator weighted_rhs(const WeightedGenerator& gen, const Operator& rho);
Operator gks_rhs(const GKSForm& gks, const Operator& rho);

Superoperator liouvillian(const LindbladModel& model);
Superoperator liouvillian(const WeightedGenerator& gen);
Superoperator liouvillian(const GKSForm& gks);

/// exp(t * generator) by scaling and squaring. Throws for t < 0.
Superoperator propagator(const Superoperator& generator, double t);

/// rho(t) = unvec(exp(t L) vec(rho0)). Throws for t < 0 or an invalid rho0.
DensityMatrix propagate_exact(const LindbladModel& model, const DensityMatrix& rho0, double t);
DensityMatrix propagate_exact(const Superoperator& generator, const DensityMatrix& rho0, double t);

/// Choi matrix sum_ij |i><j| (x) Phi_t(|i><j|) of Phi_t = exp(t L), with
/// row index i * d + k and column index j * d + l. Throws for t <= 0.
Eigen::MatrixXcd choi_matrix(const LindbladModel& model, double t);
Eigen::MatrixXcd choi_matrix(const Superoperator& generator, double t);

struct LindbladDecomposition {
  Operator hamiltonian;
  std::vector<double> rates;    // descending
  std::vector<Operator> ops;    // L_k = sum_i u_ik F_i
  Eigen::MatrixXcd unitary;     // columns are the eigenvectors u_{., k}
  bool completely_positive = true;

  WeightedGenerator generator() const;
  /// sqrt(c_k) L_k for every rate above tolerance. Throws ValidationError
  /// when the decomposition is not completely positive.
  LindbladModel to_model() const;
};

/// Diagonalizes the coefficient matrix c = u diag(c_k) u^dag. Rates are sorted
/// in descending order; ties are broken by the lexicographic order of the
/// real parts of the eigenvector entries, and each eigenvector is phased so
/// that its largest-modulus entry is real and positive. Negative rates are
/// reported through `completely_positive`, never rejected.
LindbladDecomposition gks_to_lindblad(const GKSForm& gks);

}  // namespace unravel
