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

// Random inputs and small reference implementations shared by the tests.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "unravel/hilbert.hpp"
#include "unravel/lindblad.hpp"

namespace unravel::testing {

inline Operator random_matrix(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Operator m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline Operator random_hermitian(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  Operator m = random_matrix(rng, d, scale);
  return 0.5 * (m + m.adjoint());
}

// Haar-like unitary: QR of a Ginibre matrix with the phases of R divided out.
inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  const Operator g = random_matrix(rng, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

inline StateVector random_state(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  StateVector psi(d);
  for (Eigen::Index i = 0; i < d; ++i) psi(i) = cplx(g(rng), g(rng));
  return psi / psi.norm();
}

inline DensityMatrix random_density(std::mt19937_64& rng, Eigen::Index d) {
  const Operator a = random_matrix(rng, d);
  const Operator rho = a * a.adjoint();
  return rho / rho.trace().real();
}

// d in [2, 4], 1..3 operators, random H; retries until {1, L} is independent.
inline LindbladModel random_model(std::mt19937_64& rng, Eigen::Index d = 0, std::size_t n = 0) {
  if (d == 0) d = std::uniform_int_distribution<int>(2, 4)(rng);
  if (n == 0) n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  for (;;) {
    std::vector<Operator> ops;
    for (std::size_t k = 0; k < n; ++k) ops.push_back(random_matrix(rng, d, 0.5));
    if (check_linear_independence(ops, true)) return LindbladModel(random_hermitian(rng, d), ops);
  }
}

// Textbook Lindblad right-hand side written out term by term.
inline Operator reference_rhs(const Operator& h, const std::vector<Operator>& ops, const std::vector<double>& rates,
                              const Operator& rho) {
  Operator out = -kI * (h * rho - rho * h);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Operator& l = ops[k];
    const Operator ldl = l.adjoint() * l;
    out += rates[k] * (l * rho * l.adjoint() - 0.5 * ldl * rho - 0.5 * rho * ldl);
  }
  return out;
}

// Classical RK4 on d rho/dt = reference_rhs, an oracle independent of the
// Liouvillian exponential.
inline DensityMatrix rk4_propagate(const LindbladModel& m, DensityMatrix rho, double t, std::size_t steps) {
  const std::vector<double> ones(m.size(), 1.0);
  auto f = [&](const Operator& x) { return reference_rhs(m.hamiltonian(), m.lindblad_ops(), ones, x); };
  const double h = t / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const Operator k1 = f(rho);
    const Operator k2 = f(rho + 0.5 * h * k1);
    const Operator k3 = f(rho + 0.5 * h * k2);
    const Operator k4 = f(rho + h * k3);
    rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

inline Operator mat2(cplx a, cplx b, cplx c, cplx d) {
  Operator m(2, 2);
  m << a, b, c, d;
  return m;
}

inline StateVector vec2(cplx a, cplx b) {
  StateVector v(2);
  v << a, b;
  return v;
}

}  // namespace unravel::testing
