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

#include "unravel/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace unravel {

namespace {

constexpr std::size_t kBlockSize = 32;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::size_t> recorded_steps(const IntegrationConfig& cfg) {
  const std::size_t n = cfg.step_count();
  std::vector<std::size_t> steps;
  for (std::size_t s = 0; s <= n; s += cfg.record_stride) steps.push_back(s);
  if (steps.back() != n) steps.push_back(n);
  return steps;
}

struct BlockSum {
  std::vector<Operator> first;            // sum of |psi><psi|
  std::vector<Eigen::MatrixXd> second;    // sum of ||psi><psi|_ij|^2
  double drift_max = 0.0;
  double drift_mean_sum = 0.0;

  BlockSum(std::size_t records, Eigen::Index d)
      : first(records, Operator::Zero(d, d)), second(records, Eigen::MatrixXd::Zero(d, d)) {}

  void add(const Trajectory& tr) {
    for (std::size_t r = 0; r < first.size(); ++r) {
      const auto& psi = tr.states[r];
      const Operator p = psi * psi.adjoint();
      first[r] += p;
      second[r] += p.cwiseAbs2();
    }
    drift_max = std::max(drift_max, tr.norm_drift_max);
    drift_mean_sum += tr.norm_drift_mean;
  }

  void merge(const BlockSum& other) {
    for (std::size_t r = 0; r < first.size(); ++r) {
      first[r] += other.first[r];
      second[r] += other.second[r];
    }
    drift_max = std::max(drift_max, other.drift_max);
    drift_mean_sum += other.drift_mean_sum;
  }
};

}  // namespace

void IntegrationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integration: dt must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw std::invalid_argument("integration: t_final must be positive");
  }
  if (dt > t_final) throw std::invalid_argument("integration: dt exceeds t_final");
  if (t_final / dt > 1e8) throw std::invalid_argument("integration: more than 1e8 steps requested");
  if (record_stride == 0) throw std::invalid_argument("integration: record_stride must be positive");
  if (noise_refinement > 20) throw std::invalid_argument("integration: noise_refinement above 20");
}

std::size_t IntegrationConfig::step_count() const {
  // Guard against t_final / dt landing a rounding error above an integer.
  return static_cast<std::size_t>(std::ceil(t_final / dt * (1.0 - 1e-12)));
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) + index * 0xd1342543de82ef95ULL);
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t index) : engine_(split_seed(seed, index)) {}

std::vector<double> wiener_increments(NoiseStream& rng, std::size_t n, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("wiener_increments: dt must be positive");
  const double scale = std::sqrt(dt);
  std::vector<double> dw(n);
  for (auto& x : dw) x = scale * rng.gaussian();
  return dw;
}

Integrator::Integrator(const Unraveling& u) : u_(&u), next_(u.dim()) {}

double Integrator::advance(StateVector& psi, double dt, std::span<const double> dw, bool renormalize) {
  const Eigen::Index d = u_->dim();
  const auto N = static_cast<Eigen::Index>(u_->noise_count());
  if (static_cast<Eigen::Index>(dw.size()) != N) {
    throw DimensionError("step: expected " + std::to_string(N) + " Wiener increments, got " +
                         std::to_string(dw.size()));
  }
  u_->evaluate_into(psi, ws_);
  next_ = psi;
  next_ += dt * ws_.drift;
  for (Eigen::Index k = 0; k < N; ++k) next_ += dw[static_cast<std::size_t>(k)] * ws_.diffusion.segment(k * d, d);
  const double norm2 = next_.squaredNorm();
  if (!(std::sqrt(norm2) >= kTol.blowup_norm) || !std::isfinite(norm2)) throw BlowUpError(0, std::sqrt(norm2));
  if (renormalize) next_ /= std::sqrt(norm2);
  psi.swap(next_);
  return norm2;
}

StateVector step(const Unraveling& u, const StateVector& psi, double dt, std::span<const double> dw,
                 bool renormalize) {
  require_same_dim(psi.size(), u.dim(), "step");
  Integrator integrator(u);
  StateVector out = psi;
  integrator.advance(out, dt, dw, renormalize);
  return out;
}

Trajectory simulate_trajectory(const Unraveling& u, const StateVector& psi0, const IntegrationConfig& cfg,
                               std::uint64_t stream) {
  cfg.validate();
  require_same_dim(psi0.size(), u.dim(), "simulate_trajectory");
  const double nv = normalization_violation(psi0);
  if (nv > kTol.unit_norm) throw ValidationError("initial state is not normalized", nv);

  const std::size_t n_steps = cfg.step_count();
  const std::size_t N = u.noise_count();
  const std::size_t subs = std::size_t{1} << cfg.noise_refinement;
  const double sub_scale = std::sqrt(cfg.dt / static_cast<double>(subs));

  Trajectory tr;
  tr.seed = cfg.seed;
  tr.stream = stream;
  const std::size_t expected_records = n_steps / cfg.record_stride + 2;
  tr.times.reserve(expected_records);
  tr.states.reserve(expected_records);
  tr.times.push_back(0.0);
  tr.states.push_back(psi0);

  NoiseStream rng(cfg.seed, stream);
  Integrator integrator(u);
  StateVector psi = psi0;
  std::vector<double> dw(N);
  double drift_sum = 0.0;

  for (std::size_t s = 1; s <= n_steps; ++s) {
    std::fill(dw.begin(), dw.end(), 0.0);
    for (std::size_t r = 0; r < subs; ++r) {
      for (std::size_t k = 0; k < N; ++k) dw[k] += sub_scale * rng.gaussian();
    }
    double norm2 = 0.0;
    try {
      norm2 = integrator.advance(psi, cfg.dt, dw, cfg.renormalize);
    } catch (const BlowUpError& e) {
      throw BlowUpError(s, e.norm());
    }
    const double drift = std::abs(norm2 - 1.0);
    tr.norm_drift_max = std::max(tr.norm_drift_max, drift);
    drift_sum += drift;
    if (s % cfg.record_stride == 0 || s == n_steps) {
      tr.times.push_back(static_cast<double>(s) * cfg.dt);
      tr.states.push_back(psi);
    }
  }
  tr.norm_drift_mean = n_steps ? drift_sum / static_cast<double>(n_steps) : 0.0;
  return tr;
}

EnsembleEstimate simulate_ensemble(const Unraveling& u, const StateVector& psi0, const IntegrationConfig& cfg,
                                   std::size_t trajectories, const EnsembleOptions& options) {
  cfg.validate();
  if (trajectories == 0) throw std::invalid_argument("simulate_ensemble: need at least one trajectory");
  const Eigen::Index d = u.dim();
  const auto steps = recorded_steps(cfg);
  const std::size_t records = steps.size();

  EnsembleEstimate est;
  est.trajectories = trajectories;
  for (auto s : steps) est.times.push_back(static_cast<double>(s) * cfg.dt);
  if (options.keep_final_states) est.final_states.resize(trajectories);

  const std::size_t blocks = (trajectories + kBlockSize - 1) / kBlockSize;
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));

  BlockSum total(records, d);
  std::vector<std::optional<BlockSum>> pending(blocks);
  std::size_t next_merge = 0;
  std::mutex merge_mutex;
  std::atomic<std::size_t> next_block{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= blocks) return;
      BlockSum partial(records, d);
      try {
        const std::size_t end = std::min(trajectories, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i) {
          Trajectory tr = simulate_trajectory(u, psi0, cfg, i);
          partial.add(tr);
          if (options.sink) options.sink(i, tr);
          if (options.keep_final_states) est.final_states[i] = tr.states.back();
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(merge_mutex);
        if (!failure) failure = std::current_exception();
        failed.store(true);
        return;
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      pending[b].emplace(std::move(partial));
      while (next_merge < blocks && pending[next_merge]) {
        total.merge(*pending[next_merge]);
        pending[next_merge].reset();
        ++next_merge;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  const double m = static_cast<double>(trajectories);
  est.rho_hat.reserve(records);
  est.std_error.reserve(records);
  for (std::size_t r = 0; r < records; ++r) {
    Operator mean = total.first[r] / m;
    const Eigen::MatrixXd var = (total.second[r] / m - mean.cwiseAbs2()).cwiseMax(0.0);
    est.std_error.push_back(std::sqrt(var.maxCoeff() / m));
    est.rho_hat.push_back(std::move(mean));
  }
  est.norm_drift_max = total.drift_max;
  est.norm_drift_mean = total.drift_mean_sum / m;
  return est;
}

}  // namespace unravel
