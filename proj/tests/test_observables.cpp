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

#include <doctest.h>

#include <numbers>

#include "support.hpp"
#include "unravel/observables.hpp"

using namespace unravel;
using namespace unravel::testing;

namespace {

const double kPi = std::numbers::pi;
const double kS = 1.0 / std::sqrt(2.0);

Operator projector_up() { return mat2(1, 0, 0, 0); }
Operator projector_down() { return mat2(0, 0, 0, 1); }

Operator diag3(double a, double b, double c) {
  Operator m = Operator::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST_CASE("variance examples") {
  CHECK(variance(vec2(1, 0), pauli::z()) == 0.0);
  CHECK(variance(vec2(kS, kS), pauli::z()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(variance(vec2(std::sqrt(0.3), std::sqrt(0.7)), pauli::z()) == doctest::Approx(0.84).epsilon(1e-14));
  CHECK_THROWS_AS(variance(vec2(1, 0), mat2(0, 1, 0, 0)), ValidationError);
}

TEST_CASE("variance is nonnegative and vanishes only at eigenvectors") {
  std::mt19937_64 rng(40);
  const Operator l = diag3(2.0, -0.5, 1.0);
  for (int i = 0; i < 100; ++i) {
    const StateVector psi = random_state(rng, 3);
    CHECK(variance(psi, l) > 1e-6);
    CHECK(variance(psi, random_hermitian(rng, 3)) >= -1e-12);
  }
  for (int k = 0; k < 3; ++k) {
    const StateVector e = StateVector::Unit(3, k) * std::polar(1.0, 0.3 * k);
    CHECK(variance(e, l) <= 1e-12);
  }
}

TEST_CASE("variance_drift examples") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(variance_drift(random_state(rng, 2), pauli::z(), kPi / 2)) <= 1e-30);
  CHECK(variance_drift(vec2(kS, kS), pauli::z(), 0.0) == doctest::Approx(-4.0).epsilon(1e-14));
  // -4 cos^2(pi/3) 0.84^2 = -0.7056
  CHECK(variance_drift(vec2(std::sqrt(0.3), std::sqrt(0.7)), pauli::z(), kPi / 3) ==
        doctest::Approx(-0.7056).epsilon(1e-12));
}

TEST_CASE("diffusion matrix examples") {
  const LindbladModel m(pauli::x(), {pauli::z()});
  const Unraveling standard(m, UnitaryFreedom::standard(1));
  CHECK(diffusion_matrix(standard, vec2(0, 1)).cwiseAbs().maxCoeff() == 0.0);

  // B = (1, -1)/sqrt(2) is real; B = i(1, -1)/sqrt(2) is imaginary. Index 2 i + m.
  const Unraveling linear(m, UnitaryFreedom::linear_potential(1));
  const RealMatrix ds = diffusion_matrix(standard, vec2(kS, kS));
  const RealMatrix dl = diffusion_matrix(linear, vec2(kS, kS));
  RealMatrix want_s = RealMatrix::Zero(4, 4), want_l = RealMatrix::Zero(4, 4);
  const double b[] = {kS, -kS};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      want_s(2 * i, 2 * j) = b[i] * b[j];
      want_l(2 * i + 1, 2 * j + 1) = b[i] * b[j];
    }
  CHECK((ds - want_s).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((dl - want_l).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((ds - dl).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("diffusion matrix is symmetric PSD and invariant under real orthogonal mixing") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    const LindbladModel m = random_model(rng);
    const auto n = static_cast<Eigen::Index>(m.size());
    const Eigen::MatrixXcd u = random_unitary(rng, n);
    const Eigen::MatrixXcd ou = random_orthogonal(rng, n).cast<cplx>() * u;
    const StateVector psi = random_state(rng, m.dim());
    const RealMatrix d1 = diffusion_matrix(Unraveling(m, UnitaryFreedom::unitary(u)), psi);
    const RealMatrix d2 = diffusion_matrix(Unraveling(m, UnitaryFreedom::unitary(ou)), psi);
    CHECK((d1 - d1.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d1.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() >= -1e-10);
    CHECK((d1 - d2).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("spectral sectors") {
  const auto z = spectral_sectors(pauli::z());
  REQUIRE(z.size() == 2);
  CHECK(z[0].eigenvalue == doctest::Approx(1.0));
  CHECK(z[1].eigenvalue == doctest::Approx(-1.0));
  CHECK(max_abs(z[0].projector - projector_up()) <= 1e-12);

  const auto deg = spectral_sectors(diag3(1.0, -1.0, 1.0 + 1e-11));
  REQUIRE(deg.size() == 2);
  CHECK(deg[0].multiplicity == 2);
  CHECK(max_abs(deg[0].projector + deg[1].projector - Operator::Identity(3, 3)) <= 1e-12);
  CHECK_THROWS_AS(spectral_sectors(mat2(0, 1, 0, 0)), ValidationError);
}

TEST_CASE("born statistics on collapsed states") {
  const StateVector psi0 = vec2(std::sqrt(0.3), std::sqrt(0.7));
  std::vector<StateVector> finals;
  for (int i = 0; i < 3; ++i) finals.push_back(vec2(1, 0));
  for (int i = 0; i < 7; ++i) finals.push_back(vec2(0, kI));
  const BornReport r = born_statistics(finals, pauli::z(), psi0);
  CHECK(r.total == 10);
  CHECK(r.unclassified == 0);
  CHECK(r.counts == std::vector<std::size_t>{3, 7});
  CHECK(r.frequencies[0] == doctest::Approx(0.3));
  CHECK(r.predicted[0] == doctest::Approx(0.3));
  CHECK(r.predicted[1] == doctest::Approx(0.7));
  CHECK(r.standard_errors[0] == doctest::Approx(std::sqrt(0.21 / 10)));
}

TEST_CASE("born statistics counts superpositions as unclassified") {
  const std::vector<StateVector> finals = {vec2(kS, kS), vec2(1, 0), vec2(std::sqrt(1 - 5e-4), std::sqrt(5e-4))};
  const BornReport r = born_statistics(finals, pauli::z(), vec2(kS, kS), 1e-3);
  CHECK(r.unclassified == 1);
  CHECK(r.counts[0] == 2);
  CHECK(r.unclassified_fraction() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(born_statistics(finals, diag3(1, 1.005, -1), StateVector::Unit(3, 0), 1e-3),
                  std::invalid_argument);
}

TEST_CASE("projective collapse examples") {
  const StateVector psi = vec2(std::sqrt(0.3), std::sqrt(0.7));
  const std::vector<Operator> ps = {projector_up(), projector_down()};
  const DensityMatrix out = projective_collapse(outer(psi, psi), ps, born_weights(psi, ps));
  CHECK(max_abs(out - mat2(0.3, 0, 0, 0.7)) <= 1e-15);

  const StateVector up = vec2(1, 0);
  CHECK(max_abs(projective_collapse(outer(up, up), ps, {1.0, 0.0}) - outer(up, up)) <= 1e-15);
}

TEST_CASE("Born weights make the collapse map ensemble-linear") {
  const std::vector<Operator> ps = {projector_up(), projector_down()};
  const std::vector<StateVector> basis = {vec2(1, 0), vec2(0, 1)};
  const std::vector<StateVector> diagonal = {vec2(kS, kS), vec2(kS, -kS)};

  auto average = [&](const std::vector<StateVector>& ensemble, const std::vector<double>* fixed) {
    DensityMatrix acc = DensityMatrix::Zero(2, 2);
    for (const auto& psi : ensemble) {
      const auto w = fixed ? *fixed : born_weights(psi, ps);
      acc += projective_collapse(outer(psi, psi), ps, w) / static_cast<double>(ensemble.size());
    }
    return acc;
  };
  const DensityMatrix half = mat2(0.5, 0, 0, 0.5);
  CHECK(max_abs(average(basis, nullptr) - half) <= 1e-12);
  CHECK(max_abs(average(diagonal, nullptr) - half) <= 1e-12);

  // eigenstates admit only their own outcome, so constant weights act on the
  // superposition ensemble alone and the two averages split
  const std::vector<double> skew = {0.9, 0.1};
  CHECK(max_abs(average(diagonal, &skew) - mat2(0.9, 0, 0, 0.1)) <= 1e-12);
  CHECK(max_abs(average(basis, nullptr) - average(diagonal, &skew)) > 0.3);
}

TEST_CASE("projective collapse is trace preserving with Born weights") {
  std::mt19937_64 rng(43);
  const Operator l = diag3(1.0, 1.0, -2.0);
  const auto sectors = spectral_sectors(l);
  std::vector<Operator> ps;
  for (const auto& s : sectors) ps.push_back(s.projector);
  for (int i = 0; i < 50; ++i) {
    const StateVector psi = random_state(rng, 3);
    const DensityMatrix out = projective_collapse(outer(psi, psi), ps, born_weights(psi, ps));
    CHECK(std::abs(out.trace() - cplx(1.0)) <= 1e-12);
  }
}

TEST_CASE("projective collapse validation") {
  const StateVector psi = vec2(kS, kS);
  const DensityMatrix p = outer(psi, psi);
  CHECK_THROWS_AS(projective_collapse(p, {projector_up()}, {1.0}), ValidationError);
  CHECK_THROWS_AS(projective_collapse(p, {projector_up(), mat2(0.5, 0.5, 0.5, 0.5)}, {0.5, 0.5}),
                  ValidationError);
  CHECK_THROWS_AS(projective_collapse(p, {projector_up(), projector_down()}, {0.7, 0.7}), ValidationError);
  CHECK_THROWS_AS(projective_collapse(p, {projector_up(), projector_down()}, {1.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(projective_collapse(p, {projector_up(), projector_down()}, {1.0}), DimensionError);
}

TEST_CASE("fit_variance_drift recovers the exact solution") {
  // V(t) = V0 / (1 + 4 c V0 t) solves dV/dt = -4 c V^2 with c = cos^2 f
  const double f = kPi / 4, c = 0.5, v0 = 0.9, dt = 1e-4;
  std::vector<double> times;
  std::vector<std::vector<double>> series(3);
  for (int r = 0; r <= 2000; ++r) {
    const double t = r * dt;
    times.push_back(t);
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double v = v0 * (1.0 - 0.2 * static_cast<double>(k));
      series[k].push_back(v / (1.0 + 4.0 * c * v * t));
    }
  }
  const VarianceDriftFit fit = fit_variance_drift(series, times, f);
  CHECK(fit.samples == 3 * 2000);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-3));

  const std::vector<std::vector<double>> flat = {std::vector<double>(times.size(), 0.7)};
  const VarianceDriftFit none = fit_variance_drift(flat, times, kPi / 2);
  CHECK(none.mean_rate == 0.0);
  CHECK_THROWS_AS(fit_variance_drift({{1.0}}, times, 0.0), DimensionError);
}
