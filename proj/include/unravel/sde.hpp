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

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "unravel/unraveling.hpp"

namespace unravel {

/// Fixed-step Ito integration of d psi = A dt + sum_k B_k dW_k.
struct IntegrationConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  bool renormalize = true;
  std::uint64_t seed = 0;
  std::size_t record_stride = 1;
  /// Each increment dW is the sum of 2^noise_refinement Gaussian
  /// sub-increments. A run at dt with refinement r + 1 and a run at dt/2 with
  /// refinement r then see the same Brownian path.
  unsigned noise_refinement = 0;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
  std::size_t step_count() const;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::size_t step, double norm)
      : std::runtime_error("step " + std::to_string(step) + ": state norm " + std::to_string(norm) +
                           " outside the admissible range before renormalization"),
        step_(step),
        norm_(norm) {}
  std::size_t step() const noexcept { return step_; }
  double norm() const noexcept { return norm_; }

 private:
  std::size_t step_;
  double norm_;
};

/// Seed of stream `index` derived from a base seed. A pure function of both
/// arguments (SplitMix64 finalizer over a Weyl-sequence counter).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// Gaussian source for one trajectory.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t index);
  double gaussian() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// N independent N(0, dt) draws.
std::vector<double> wiener_increments(NoiseStream& rng, std::size_t n, double dt);

/// One Euler-Maruyama step: psi + A dt + sum_k B_k dW_k, then normalized if
/// requested. Throws BlowUpError if the norm falls below kTol.blowup_norm or is not finite.
StateVector step(const Unraveling& u, const StateVector& psi, double dt, std::span<const double> dw,
                 bool renormalize);

/// Reusable stepping state for a single trajectory.
class Integrator {
 public:
  explicit Integrator(const Unraveling& u);
  /// Advances psi in place and returns the squared norm before
  /// renormalization.
  double advance(StateVector& psi, double dt, std::span<const double> dw, bool renormalize);

 private:
  const Unraveling* u_;
  Unraveling::Workspace ws_;
  Eigen::VectorXcd next_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  double norm_drift_max = 0.0;   // max |norm^2 - 1| before renormalization
  double norm_drift_mean = 0.0;  // mean over steps of the same quantity
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Integrates over step_count() steps with the noise stream (cfg.seed, stream).
/// States are recorded at step 0, every record_stride steps, and the last step.
Trajectory simulate_trajectory(const Unraveling& u, const StateVector& psi0, const IntegrationConfig& cfg,
                               std::uint64_t stream = 0);

struct EnsembleOptions {
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  unsigned threads = 1;
  bool keep_final_states = false;
  /// Called once per trajectory from a worker thread; must be thread-safe
  /// with respect to distinct indices.
  std::function<void(std::size_t index, const Trajectory&)> sink;
};

struct EnsembleEstimate {
  std::vector<double> times;
  std::vector<DensityMatrix> rho_hat;  // sample mean of |psi><psi| per time
  std::vector<double> std_error;       // max entrywise standard error per time
  std::size_t trajectories = 0;
  std::vector<StateVector> final_states;
  double norm_drift_max = 0.0;
  double norm_drift_mean = 0.0;  // mean over trajectories of Trajectory::norm_drift_mean
};

/// Runs M trajectories, trajectory i on noise stream (cfg.seed, i). Partial
/// sums are formed over fixed blocks of trajectories and combined in block
/// order, so every output bit is independent of the thread count.
EnsembleEstimate simulate_ensemble(const Unraveling& u, const StateVector& psi0, const IntegrationConfig& cfg,
                                   std::size_t trajectories, const EnsembleOptions& options = {});

}  // namespace unravel
