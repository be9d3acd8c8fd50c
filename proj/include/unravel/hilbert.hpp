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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "unravel/tolerances.hpp"

namespace unravel {

using cplx = std::complex<double>;

/// Dense d x d complex operator on C^d.
using Operator = Eigen::MatrixXcd;
/// Amplitudes of a (not necessarily normalized) vector in C^d.
using StateVector = Eigen::VectorXcd;
/// Dense d x d complex matrix expected to be Hermitian, unit trace and PSD.
using DensityMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kMaxDim = 64;
inline constexpr cplx kI{0.0, 1.0};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input violates a structural predicate (Hermiticity,
/// normalization, unitarity, ...). The message carries the measured violation.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(const std::string& what, double violation)
      : std::invalid_argument(what + " (violation " + std::to_string(violation) + ")"),
        violation_(violation) {}
  double violation() const noexcept { return violation_; }

 private:
  double violation_;
};

Operator dagger(const Operator& m);

cplx expectation(const StateVector& psi, const Operator& m);

/// |psi><phi|, entries psi_i conj(phi_j).
Operator outer(const StateVector& psi, const StateVector& phi);

/// Half the sum of singular values of (rho - sigma).
double trace_distance(const Operator& rho, const Operator& sigma);

/// True iff the Gram matrix of the vectorized operators (identity prepended
/// when requested) has min eigenvalue > kTol.independence * max eigenvalue.
bool check_linear_independence(const std::vector<Operator>& ops, bool include_identity);

// Diagnostics. Each returns the measured violation; none of them repair input.

/// max_ij |M_ij - conj(M_ji)|
double hermiticity_violation(const Operator& m);
/// |norm^2 - 1|
double normalization_violation(const StateVector& psi);
/// max_ij |(u^dagger u - 1)_ij|, also reports non-square input as +inf.
double unitarity_violation(const Eigen::MatrixXcd& u);
/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const Operator& m);

struct DensityDiagnostics {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool valid(const Tolerances& tol = kTol) const {
    return hermiticity <= tol.hermitian && trace_error <= tol.trace &&
           min_eigenvalue >= -tol.positivity;
  }
};
DensityDiagnostics diagnose_density(const Operator& rho);

bool is_hermitian(const Operator& m, double tol = kTol.hermitian);
bool is_normalized(const StateVector& psi, double tol = kTol.unit_norm);

/// Throws DimensionError unless m is square with 1 <= dim <= kMaxDim.
void require_square(const Operator& m, const char* name);
void require_same_dim(Eigen::Index a, Eigen::Index b, const char* context);

/// Column-major vectorization, vec(rho)[i + d j] = rho(i, j).
Eigen::VectorXcd vec(const Operator& m);
Operator unvec(const Eigen::VectorXcd& v);

namespace pauli {
Operator identity();
Operator x();
Operator y();
Operator z();
}  // namespace pauli

}  // namespace unravel
