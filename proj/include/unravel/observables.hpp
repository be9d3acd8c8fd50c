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

#include "unravel/unraveling.hpp"

namespace unravel {

/// <L^2> - <L>^2. Throws ValidationError for non-Hermitian L.
double variance(const StateVector& psi, const Operator& l);

/// Deterministic part of dV for the scalar-phase family with H = 0:
/// -4 cos^2(f) V^2.
double variance_drift(const StateVector& psi, const Operator& l, double f);

/// Real 2d x 2d matrix D = sum_k b_k b_k^T, where b_k stacks the real and
/// imaginary parts of B_k(psi). Row/column index 2 i + m, m = 0 real, 1 imag.
RealMatrix diffusion_matrix(const Unraveling& u, const StateVector& psi);

struct SpectralSector {
  double eigenvalue = 0.0;  // mean of the grouped eigenvalues
  Operator projector;
  Eigen::Index multiplicity = 0;
};

/// Eigenspaces of a Hermitian operator, eigenvalues within kTol.sector_gap
/// grouped into one sector, ordered by descending eigenvalue.
std::vector<SpectralSector> spectral_sectors(const Operator& l);

struct BornReport {
  std::vector<double> eigenvalues;       // sector labels
  std::vector<std::size_t> counts;
  std::vector<double> frequencies;       // counts / total
  std::vector<double> predicted;         // ||P_n psi0||^2
  std::vector<double> standard_errors;   // sqrt(p (1 - p) / total) with p predicted
  std::size_t unclassified = 0;
  std::size_t total = 0;
  double tolerance = 0.0;

  double unclassified_fraction() const {
    return total ? static_cast<double>(unclassified) / static_cast<double>(total) : 0.0;
  }
};

/// Assigns each final state to the sector n with <psi, P_n psi> > 1 - tol.
/// Requires distinct sectors to be separated by more than 10 tol.
BornReport born_statistics(const std::vector<StateVector>& final_states, const Operator& l,
                           const StateVector& psi0, double tol = kTol.born_classification);

/// sum_n p_n P_n rho P_n / Tr(P_n rho) for a rank-one rho. Branches with
/// Tr(P_n rho) below kTol.projector_weight are skipped. Throws
/// ValidationError for an incomplete or non-orthogonal projector family or
/// for weights that are negative or do not sum to one.
DensityMatrix projective_collapse(const DensityMatrix& pure, const std::vector<Operator>& projectors,
                                  const std::vector<double>& weights);

/// Born weights ||P_n psi||^2 for the given projectors.
std::vector<double> born_weights(const StateVector& psi, const std::vector<Operator>& projectors);

/// Slope of the pooled least-squares fit (through the origin) of the
/// empirical finite-difference rate (V(t + h) - V(t)) / h against the
/// predicted drift -4 cos^2(f) V(t)^2, over all trajectories and all
/// consecutive record pairs. `series[i][r]` is V of trajectory i at time r.
struct VarianceDriftFit {
  double slope = 0.0;
  double mean_rate = 0.0;       // mean empirical dV/dt over all samples
  double mean_predicted = 0.0;  // mean of -4 cos^2(f) V^2 over the same samples
  std::size_t samples = 0;
};
VarianceDriftFit fit_variance_drift(const std::vector<std::vector<double>>& series,
                                    const std::vector<double>& times, double f);

}  // namespace unravel
