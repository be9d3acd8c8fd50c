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

namespace unravel {

/// Every numerical threshold used by validation predicates and checks.
///
/// Library code reads these through `kTol`; tests and the acceptance suite
/// reference the same record so that a tolerance is defined exactly once.
struct Tolerances {
  double hermitian = 1e-12;         // max |M - M^dagger| for Hermitian operators
  double unit_norm = 1e-9;          // |norm^2 - 1| for normalized states
  double trace = 1e-12;             // |Tr rho - 1| for density matrices
  double positivity = 1e-10;        // min eigenvalue floor for PSD checks
  double independence = 1e-10;      // relative Gram-eigenvalue floor
  double unitary = 1e-12;           // max |u^dagger u - 1|
  double orthonormal_basis = 1e-10; // |Tr(F_i^dagger F_j) - delta_ij|
  double generator_match = 1e-10;   // Ito generator vs Lindblad rhs
  double negative_rate = 1e-10;     // rates below -this are non-CP
  double blowup_norm = 1e-6;        // pre-renormalization norm floor in a step
  double projector = 1e-12;         // completeness / orthogonality of P_n
  double projector_weight = 1e-14;  // skip collapse branches below this
  double sector_gap = 1e-9;         // eigenvalues closer than this share a sector
  double born_classification = 1e-3;// default sector-classification threshold
};

inline constexpr Tolerances kTol{};

}  // namespace unravel
