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

#include "unravel/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace unravel {

namespace {

void check_hamiltonian(const Operator& h) {
  require_square(h, "hamiltonian");
  const double v = hermiticity_violation(h);
  if (v > kTol.hermitian) throw ValidationError("hamiltonian is not Hermitian", v);
}

// -i[H, rho] + sum_k c_k D[L_k](rho)
Operator rhs_impl(const Operator& h, const std::vector<Operator>& ops, const double* rates,
                  const Operator& rho) {
  require_same_dim(h.rows(), rho.rows(), "lindblad_rhs");
  require_same_dim(rho.rows(), rho.cols(), "lindblad_rhs");
  Operator out = -kI * (h * rho - rho * h);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Operator& l = ops[k];
    const Operator ldl = l.adjoint() * l;
    const double c = rates ? rates[k] : 1.0;
    out += c * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Superoperator liouvillian_impl(const Operator& h, const std::vector<Operator>& ops,
                               const double* rates) {
  const Eigen::Index d = h.rows();
  const Operator id = Operator::Identity(d, d);
  // vec(A rho B) = (B^T (x) A) vec(rho)
  Eigen::MatrixXcd gen = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                                Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Operator& l = ops[k];
    const Operator ldl = l.adjoint() * l;
    const double c = rates ? rates[k] : 1.0;
    gen += c * (Eigen::kroneckerProduct(l.conjugate(), l).eval() -
                0.5 * Eigen::kroneckerProduct(id, ldl).eval() -
                0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval());
  }
  return Superoperator{d, std::move(gen)};
}

void check_generator(const WeightedGenerator& gen) {
  require_square(gen.hamiltonian, "hamiltonian");
  if (gen.rates.size() != gen.ops.size()) {
    throw DimensionError("weighted generator: rates and ops differ in length");
  }
  for (const auto& op : gen.ops) require_same_dim(op.rows(), gen.hamiltonian.rows(), "weighted generator");
}

}  // namespace

LindbladModel::LindbladModel(Operator hamiltonian, std::vector<Operator> lindblad_ops)
    : hamiltonian_(std::move(hamiltonian)), ops_(std::move(lindblad_ops)) {
  check_hamiltonian(hamiltonian_);
  for (const auto& op : ops_) {
    require_square(op, "lindblad operator");
    require_same_dim(op.rows(), hamiltonian_.rows(), "lindblad operator");
  }
  if (!check_linear_independence(ops_, true)) {
    throw ValidationError("lindblad operators together with the identity are linearly dependent",
                          0.0);
  }
}

GKSForm::GKSForm(Operator hamiltonian, std::vector<Operator> basis, Eigen::MatrixXcd kossakowski)
    : hamiltonian_(std::move(hamiltonian)),
      basis_(std::move(basis)),
      kossakowski_(std::move(kossakowski)) {
  check_hamiltonian(hamiltonian_);
  const Eigen::Index d = hamiltonian_.rows();
  const auto m = static_cast<Eigen::Index>(basis_.size());
  if (m > d * d - 1) throw DimensionError("GKS basis has more than d^2 - 1 operators");
  if (kossakowski_.rows() != m || kossakowski_.cols() != m) {
    throw DimensionError("kossakowski matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  double trace_err = 0.0;
  double ortho_err = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    require_same_dim(basis_[i].rows(), d, "GKS basis");
    require_same_dim(basis_[i].cols(), d, "GKS basis");
    trace_err = std::max(trace_err, std::abs(basis_[i].trace()));
    for (Eigen::Index j = 0; j < m; ++j) {
      const cplx ip = (basis_[i].adjoint() * basis_[j]).trace();
      ortho_err = std::max(ortho_err, std::abs(ip - cplx(i == j ? 1.0 : 0.0)));
    }
  }
  if (trace_err > kTol.hermitian) throw ValidationError("GKS basis operator is not traceless", trace_err);
  if (ortho_err > kTol.orthonormal_basis) throw ValidationError("GKS basis is not orthonormal", ortho_err);
  const double herm = hermiticity_violation(kossakowski_);
  if (herm > kTol.hermitian) throw ValidationError("kossakowski matrix is not Hermitian", herm);
}

GKSForm::GKSForm(Operator hamiltonian, Eigen::MatrixXcd kossakowski)
    : GKSForm(hamiltonian, gell_mann_basis(hamiltonian.rows()), std::move(kossakowski)) {}

Operator Superoperator::apply(const Operator& rho) const {
  require_same_dim(rho.rows(), dim, "superoperator");
  require_same_dim(rho.cols(), dim, "superoperator");
  return unvec(matrix * vec(rho));
}

std::vector<Operator> gell_mann_basis(Eigen::Index d) {
  if (d < 1) throw DimensionError("gell_mann_basis: dimension must be positive");
  std::vector<Operator> basis;
  basis.reserve(static_cast<std::size_t>(d * d - 1));
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      Operator sym = Operator::Zero(d, d);
      sym(j, k) = s;
      sym(k, j) = s;
      basis.push_back(sym);
      Operator anti = Operator::Zero(d, d);
      anti(j, k) = -kI * s;
      anti(k, j) = kI * s;
      basis.push_back(anti);
    }
  }
  for (Eigen::Index l = 1; l < d; ++l) {
    Operator diag = Operator::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(diag);
  }
  return basis;
}

Operator lindblad_rhs(const LindbladModel& model, const Operator& rho) {
  return rhs_impl(model.hamiltonian(), model.lindblad_ops(), nullptr, rho);
}

Operator weighted_rhs(const WeightedGenerator& gen, const Operator& rho) {
  check_generator(gen);
  return rhs_impl(gen.hamiltonian, gen.ops, gen.rates.data(), rho);
}

Operator gks_rhs(const GKSForm& gks, const Operator& rho) {
  const auto& f = gks.basis();
  const auto& c = gks.kossakowski();
  require_same_dim(gks.dim(), rho.rows(), "gks_rhs");
  const Operator& h = gks.hamiltonian();
  Operator out = -kI * (h * rho - rho * h);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const cplx cij = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (cij == cplx(0.0)) continue;
      const Operator fjd = f[j].adjoint();
      const Operator fjdfi = fjd * f[i];
      out += cij * (f[i] * rho * fjd - 0.5 * (fjdfi * rho + rho * fjdfi));
    }
  }
  return out;
}

Superoperator liouvillian(const LindbladModel& model) {
  return liouvillian_impl(model.hamiltonian(), model.lindblad_ops(), nullptr);
}

Superoperator liouvillian(const WeightedGenerator& gen) {
  check_generator(gen);
  return liouvillian_impl(gen.hamiltonian, gen.ops, gen.rates.data());
}

Superoperator liouvillian(const GKSForm& gks) {
  const Eigen::Index d = gks.dim();
  const Operator id = Operator::Identity(d, d);
  const Operator& h = gks.hamiltonian();
  Eigen::MatrixXcd gen = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                                Eigen::kroneckerProduct(h.transpose(), id).eval());
  const auto& f = gks.basis();
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const cplx cij = gks.kossakowski()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (cij == cplx(0.0)) continue;
      const Operator fjd = f[j].adjoint();
      const Operator fjdfi = fjd * f[i];
      gen += cij * (Eigen::kroneckerProduct(fjd.transpose(), f[i]).eval() -
                    0.5 * Eigen::kroneckerProduct(id, fjdfi).eval() -
                    0.5 * Eigen::kroneckerProduct(fjdfi.transpose(), id).eval());
    }
  }
  return Superoperator{d, std::move(gen)};
}

Superoperator propagator(const Superoperator& generator, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagator: time must be nonnegative");
  if (t == 0.0) {
    const Eigen::Index n = generator.matrix.rows();
    return Superoperator{generator.dim, Eigen::MatrixXcd::Identity(n, n)};
  }
  Eigen::MatrixXcd scaled = t * generator.matrix;
  return Superoperator{generator.dim, scaled.exp()};
}

DensityMatrix propagate_exact(const Superoperator& generator, const DensityMatrix& rho0, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagate_exact: time must be nonnegative");
  require_same_dim(rho0.rows(), generator.dim, "propagate_exact");
  const auto diag = diagnose_density(rho0);
  if (diag.hermiticity > kTol.hermitian) {
    throw ValidationError("initial density matrix is not Hermitian", diag.hermiticity);
  }
  if (diag.trace_error > kTol.unit_norm) {
    throw ValidationError("initial density matrix does not have unit trace", diag.trace_error);
  }
  if (diag.min_eigenvalue < -kTol.positivity) {
    throw ValidationError("initial density matrix is not positive", -diag.min_eigenvalue);
  }
  if (t == 0.0) return rho0;
  return propagator(generator, t).apply(rho0);
}

DensityMatrix propagate_exact(const LindbladModel& model, const DensityMatrix& rho0, double t) {
  return propagate_exact(liouvillian(model), rho0, t);
}

Eigen::MatrixXcd choi_matrix(const Superoperator& generator, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("choi_matrix: time must be positive");
  const Eigen::Index d = generator.dim;
  const Superoperator channel = propagator(generator, t);
  Eigen::MatrixXcd choi(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      // Phi(|i><j|) is column i + d j of the propagator.
      const Operator block = unvec(channel.matrix.col(i + d * j));
      choi.block(i * d, j * d, d, d) = block;
    }
  }
  return choi;
}

Eigen::MatrixXcd choi_matrix(const LindbladModel& model, double t) {
  return choi_matrix(liouvillian(model), t);
}

WeightedGenerator LindbladDecomposition::generator() const {
  return WeightedGenerator{hamiltonian, rates, ops};
}

LindbladModel LindbladDecomposition::to_model() const {
  if (!completely_positive) {
    const double worst = rates.empty() ? 0.0 : -*std::min_element(rates.begin(), rates.end());
    throw ValidationError("generator has negative rates and is not completely positive", worst);
  }
  std::vector<Operator> scaled;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (rates[k] > kTol.negative_rate) scaled.push_back(std::sqrt(rates[k]) * ops[k]);
  }
  return LindbladModel(hamiltonian, std::move(scaled));
}

LindbladDecomposition gks_to_lindblad(const GKSForm& gks) {
  const Eigen::MatrixXcd& c = gks.kossakowski();
  const Eigen::Index m = c.rows();
  LindbladDecomposition out;
  out.hamiltonian = gks.hamiltonian();
  out.unitary = Eigen::MatrixXcd::Zero(m, m);
  if (m == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
  Eigen::MatrixXcd vecs = es.eigenvectors();
  const Eigen::VectorXd vals = es.eigenvalues();

  for (Eigen::Index k = 0; k < m; ++k) {
    auto col = vecs.col(k);
    const double max_mod = col.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(col(pivot)) < max_mod - 1e-12) ++pivot;
    col *= std::conj(col(pivot)) / std::abs(col(pivot));
    col(pivot) = std::abs(col(pivot));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(vals(a) - vals(b)) > 1e-12 * scale) return vals(a) > vals(b);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double ra = vecs(i, a).real();
      const double rb = vecs(i, b).real();
      if (ra != rb) return ra < rb;
    }
    return false;
  });

  const auto& f = gks.basis();
  const Eigen::Index d = gks.dim();
  for (Eigen::Index pos = 0; pos < m; ++pos) {
    const Eigen::Index k = order[static_cast<std::size_t>(pos)];
    out.unitary.col(pos) = vecs.col(k);
    out.rates.push_back(vals(k));
    Operator l = Operator::Zero(d, d);
    for (Eigen::Index i = 0; i < m; ++i) l += vecs(i, k) * f[static_cast<std::size_t>(i)];
    out.ops.push_back(std::move(l));
    if (vals(k) < -kTol.negative_rate) out.completely_positive = false;
  }
  return out;
}

}  // namespace unravel
