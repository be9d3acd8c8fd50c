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

#include "unravel/hilbert.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace unravel {

void require_square(const Operator& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(name) + ": operator is not square (" +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
  if (m.rows() < 1 || static_cast<std::size_t>(m.rows()) > kMaxDim) {
    throw DimensionError(std::string(name) + ": dimension " + std::to_string(m.rows()) +
                         " outside [1, " + std::to_string(kMaxDim) + "]");
  }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* context) {
  if (a != b) {
    throw DimensionError(std::string(context) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

Operator dagger(const Operator& m) { return m.adjoint(); }

cplx expectation(const StateVector& psi, const Operator& m) {
  require_same_dim(psi.size(), m.rows(), "expectation");
  require_same_dim(m.rows(), m.cols(), "expectation");
  return psi.dot(m * psi);
}

Operator outer(const StateVector& psi, const StateVector& phi) {
  require_same_dim(psi.size(), phi.size(), "outer");
  return psi * phi.adjoint();
}

double trace_distance(const Operator& rho, const Operator& sigma) {
  require_same_dim(rho.rows(), sigma.rows(), "trace_distance");
  require_same_dim(rho.cols(), sigma.cols(), "trace_distance");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rho - sigma);
  return 0.5 * svd.singularValues().sum();
}

bool check_linear_independence(const std::vector<Operator>& ops, bool include_identity) {
  if (ops.empty()) return true;
  const Eigen::Index d = ops.front().rows();
  for (const auto& op : ops) {
    require_same_dim(op.rows(), d, "check_linear_independence");
    require_same_dim(op.cols(), d, "check_linear_independence");
  }
  const Eigen::Index count = static_cast<Eigen::Index>(ops.size()) + (include_identity ? 1 : 0);
  Eigen::MatrixXcd columns(d * d, count);
  Eigen::Index c = 0;
  if (include_identity) columns.col(c++) = vec(Operator::Identity(d, d));
  for (const auto& op : ops) columns.col(c++) = vec(op);

  const Eigen::MatrixXcd gram = columns.adjoint() * columns;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double max_ev = ev.maxCoeff();
  if (max_ev <= 0.0) return false;
  return ev.minCoeff() > kTol.independence * max_ev;
}

double hermiticity_violation(const Operator& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double normalization_violation(const StateVector& psi) { return std::abs(psi.squaredNorm() - 1.0); }

double unitarity_violation(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  if (u.size() == 0) return 0.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Operator& m) {
  const Operator herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityDiagnostics diagnose_density(const Operator& rho) {
  require_square(rho, "density matrix");
  DensityDiagnostics out;
  out.hermiticity = hermiticity_violation(rho);
  out.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  out.min_eigenvalue = min_eigenvalue(rho);
  return out;
}

bool is_hermitian(const Operator& m, double tol) { return hermiticity_violation(m) <= tol; }

bool is_normalized(const StateVector& psi, double tol) { return normalization_violation(psi) <= tol; }

Eigen::VectorXcd vec(const Operator& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Operator unvec(const Eigen::VectorXcd& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw DimensionError("unvec: length is not a perfect square");
  return Eigen::Map<const Operator>(v.data(), d, d);
}

namespace pauli {
Operator identity() { return Operator::Identity(2, 2); }
Operator x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Operator y() {
  Operator m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
Operator z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

}  // namespace unravel
