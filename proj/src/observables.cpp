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

#include "unravel/observables.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace unravel {

namespace {

void require_hermitian(const Operator& l, const char* what) {
  require_square(l, what);
  const double v = hermiticity_violation(l);
  if (v > kTol.hermitian) throw ValidationError(std::string(what) + " is not Hermitian", v);
}

}  // namespace

double variance(const StateVector& psi, const Operator& l) {
  require_hermitian(l, "variance observable");
  require_same_dim(psi.size(), l.rows(), "variance");
  const StateVector lpsi = l * psi;
  const double mean = psi.dot(lpsi).real();
  return lpsi.squaredNorm() - mean * mean;
}

double variance_drift(const StateVector& psi, const Operator& l, double f) {
  const double v = variance(psi, l);
  const double c = std::cos(f);
  return -4.0 * c * c * v * v;
}

RealMatrix diffusion_matrix(const Unraveling& u, const StateVector& psi) {
  const Eigen::Index d = u.dim();
  const DriftDiffusion dd = u.evaluate(psi);
  RealMatrix out = RealMatrix::Zero(2 * d, 2 * d);
  Eigen::VectorXd b(2 * d);
  for (const auto& bk : dd.diffusion) {
    for (Eigen::Index i = 0; i < d; ++i) {
      b(2 * i) = bk(i).real();
      b(2 * i + 1) = bk(i).imag();
    }
    out.noalias() += b * b.transpose();
  }
  return out;
}

std::vector<SpectralSector> spectral_sectors(const Operator& l) {
  require_hermitian(l, "sector observable");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (l + l.adjoint()));
  const Eigen::VectorXd& vals = es.eigenvalues();  // ascending
  const Eigen::MatrixXcd& vecs = es.eigenvectors();
  std::vector<SpectralSector> sectors;
  Eigen::Index i = vals.size() - 1;
  while (i >= 0) {
    SpectralSector s;
    s.projector = Operator::Zero(l.rows(), l.cols());
    double sum = 0.0;
    Eigen::Index j = i;
    while (j >= 0 && vals(i) - vals(j) <= kTol.sector_gap) {
      s.projector += vecs.col(j) * vecs.col(j).adjoint();
      sum += vals(j);
      --j;
    }
    s.multiplicity = i - j;
    s.eigenvalue = sum / static_cast<double>(s.multiplicity);
    sectors.push_back(std::move(s));
    i = j;
  }
  return sectors;
}

BornReport born_statistics(const std::vector<StateVector>& final_states, const Operator& l,
                           const StateVector& psi0, double tol) {
  const auto sectors = spectral_sectors(l);
  for (std::size_t n = 1; n < sectors.size(); ++n) {
    const double gap = sectors[n - 1].eigenvalue - sectors[n].eigenvalue;
    if (gap <= 10.0 * tol) {
      throw std::invalid_argument("born_statistics: eigenvalue sectors closer than 10 tol");
    }
  }
  BornReport report;
  report.tolerance = tol;
  report.total = final_states.size();
  report.counts.assign(sectors.size(), 0);
  for (const auto& s : sectors) {
    report.eigenvalues.push_back(s.eigenvalue);
    report.predicted.push_back(psi0.dot(s.projector * psi0).real());
  }
  for (const auto& psi : final_states) {
    require_same_dim(psi.size(), l.rows(), "born_statistics");
    bool classified = false;
    for (std::size_t n = 0; n < sectors.size(); ++n) {
      if (psi.dot(sectors[n].projector * psi).real() > 1.0 - tol) {
        ++report.counts[n];
        classified = true;
        break;
      }
    }
    if (!classified) ++report.unclassified;
  }
  const double total = static_cast<double>(report.total);
  for (std::size_t n = 0; n < sectors.size(); ++n) {
    report.frequencies.push_back(report.total ? static_cast<double>(report.counts[n]) / total : 0.0);
    const double p = report.predicted[n];
    report.standard_errors.push_back(report.total ? std::sqrt(std::max(0.0, p * (1.0 - p)) / total) : 0.0);
  }
  return report;
}

std::vector<double> born_weights(const StateVector& psi, const std::vector<Operator>& projectors) {
  std::vector<double> w;
  w.reserve(projectors.size());
  for (const auto& p : projectors) {
    require_same_dim(p.rows(), psi.size(), "born_weights");
    w.push_back((p * psi).squaredNorm());
  }
  return w;
}

DensityMatrix projective_collapse(const DensityMatrix& pure, const std::vector<Operator>& projectors,
                                  const std::vector<double>& weights) {
  require_square(pure, "projective_collapse state");
  const Eigen::Index d = pure.rows();
  if (projectors.empty()) throw ValidationError("projective_collapse: empty projector family", 1.0);
  if (weights.size() != projectors.size()) {
    throw DimensionError("projective_collapse: one weight per projector required");
  }

  Operator sum = Operator::Zero(d, d);
  double ortho = 0.0;
  for (std::size_t n = 0; n < projectors.size(); ++n) {
    require_same_dim(projectors[n].rows(), d, "projective_collapse");
    require_same_dim(projectors[n].cols(), d, "projective_collapse");
    sum += projectors[n];
    for (std::size_t m = 0; m < projectors.size(); ++m) {
      const Operator expected = n == m ? projectors[n] : Operator::Zero(d, d);
      ortho = std::max(ortho, (projectors[n] * projectors[m] - expected).cwiseAbs().maxCoeff());
    }
    ortho = std::max(ortho, hermiticity_violation(projectors[n]));
  }
  const double completeness = (sum - Operator::Identity(d, d)).cwiseAbs().maxCoeff();
  if (completeness > kTol.projector) {
    throw ValidationError("projective_collapse: projectors do not sum to the identity", completeness);
  }
  if (ortho > kTol.projector) {
    throw ValidationError("projective_collapse: projectors are not orthogonal", ortho);
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("projective_collapse: negative weight", -w);
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kTol.projector) {
    throw ValidationError("projective_collapse: weights do not sum to one", std::abs(wsum - 1.0));
  }

  DensityMatrix out = DensityMatrix::Zero(d, d);
  for (std::size_t n = 0; n < projectors.size(); ++n) {
    const Operator branch = projectors[n] * pure * projectors[n];
    const double norm = branch.trace().real();
    if (norm < kTol.projector_weight) continue;
    out += (weights[n] / norm) * branch;
  }
  return out;
}

VarianceDriftFit fit_variance_drift(const std::vector<std::vector<double>>& series,
                                    const std::vector<double>& times, double f) {
  const double c2 = 4.0 * std::cos(f) * std::cos(f);
  double sxy = 0.0;
  double sxx = 0.0;
  double sum_rate = 0.0;
  double sum_pred = 0.0;
  std::size_t count = 0;
  for (const auto& v : series) {
    if (v.size() != times.size()) throw DimensionError("fit_variance_drift: series length differs from times");
    for (std::size_t r = 0; r + 1 < v.size(); ++r) {
      const double h = times[r + 1] - times[r];
      const double rate = (v[r + 1] - v[r]) / h;
      const double pred = -c2 * v[r] * v[r];
      sxy += rate * pred;
      sxx += pred * pred;
      sum_rate += rate;
      sum_pred += pred;
      ++count;
    }
  }
  VarianceDriftFit fit;
  fit.samples = count;
  if (count == 0) return fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.mean_rate = sum_rate / static_cast<double>(count);
  fit.mean_predicted = sum_pred / static_cast<double>(count);
  return fit;
}

}  // namespace unravel
