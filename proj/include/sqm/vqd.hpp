// Copyright 2026 The sqm-variational Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sqm/exactdiag.hpp"
#include "sqm/optimize.hpp"
#include "sqm/pauli.hpp"
#include "sqm/simulator.hpp"
#include "sqm/vqe.hpp"

namespace sqm {

struct OverlapEstimate {
  /// Estimate before clamping; lies in [-1, 1].
  double raw = 0.0;
  /// raw clamped to [0, 1].
  double value = 0.0;
  bool clamped = false;
};

/// State of the 2n-qubit DSWAP circuit: `a` on the upper register, `b` on
/// the lower one, then CNOT(a_i -> b_i) and H(a_i) for every i.
Statevector dswap_state(const Statevector& a, const Statevector& b);

/// 1 - 2 P(popcount(a & b) odd) read off a DSWAP measurement outcome.
double dswap_parity_sign(std::uint64_t outcome, int n_qubits);

/// |<a|b>|^2. Exact when `shots` is empty, otherwise the DSWAP estimate from
/// that many samples of the 2n-qubit circuit.
OverlapEstimate dswap_overlap(const Statevector& a, const Statevector& b, ShotCount shots, RngStream& rng);
OverlapEstimate dswap_overlap(const Circuit& a, const Eigen::VectorXd& params_a, const Circuit& b,
                              const Eigen::VectorXd& params_b, ShotCount shots, std::uint64_t seed);

struct VQDConfig {
  int n_levels = 3;
  double beta = 5.0;
  /// Per-level penalty weights for levels 1..n_levels-1; beta when empty.
  std::vector<double> level_betas;
  OptimizerConfig optimizer;
  ShotCount shots;

  void validate() const;
  double beta_for(int level) const;
};

struct VQDLevel {
  Eigen::VectorXd params;
  /// <H> without penalty, re-measured after the optimization.
  double energy = 0.0;
  double penalized_cost = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Objective calls times (1 + level).
  long long evaluations = 0;
};

struct VQDRunRecord {
  std::uint64_t seed = 0;
  /// Levels in the order they were optimized.
  std::vector<VQDLevel> levels;
  /// Level energies sorted ascending.
  std::vector<double> energies;
  int iterations = 0;
  long long evaluations = 0;
  std::optional<double> ratio;
  SusyPhase classification = SusyPhase::Ambiguous;
  long long clamped_overlaps = 0;
  ShotCount shots;

  bool converged() const;
};

/// Levels are found one after another with the earlier ones frozen; each
/// minimizes <H> + sum_i beta_i * overlap_i. Start points are uniform in
/// [0, 2pi) from a stream derived from `seed` per level.
VQDRunRecord run_vqd(const EnergyEstimator& energy, const Ansatz& ansatz, const VQDConfig& config,
                     std::uint64_t seed);
VQDRunRecord run_vqd(const PauliSum& ps, const Ansatz& ansatz, const VQDConfig& config, std::uint64_t seed);

struct VQDBatchSummary {
  int n_runs = 0;
  int converged_count = 0;
  /// Means over all runs, converged or not.
  double mean_iterations = 0.0;
  double mean_evaluations = 0.0;
  long long total_evaluations = 0;
  /// Medians over converged runs, per sorted level.
  std::vector<double> median_energies;
  std::optional<double> median_ratio;
  std::vector<double> exact_energies;
  std::optional<double> exact_ratio;
};

struct VQDBatch {
  std::vector<VQDRunRecord> runs;
  VQDBatchSummary summary;
};

/// Runs seeded with derive_seed(master_seed, i). `exact_energies` are the
/// reference levels reported next to the medians.
VQDBatch run_vqd_batch(const PauliSum& ps, const Ansatz& ansatz, const VQDConfig& config, int n_runs,
                       std::uint64_t master_seed, const std::vector<double>& exact_energies, int jobs = 1);

struct BetaSweepRow {
  double beta = 0.0;
  int converged_count = 0;
  double mean_iterations = 0.0;
  std::optional<double> median_ratio;
  std::optional<double> exact_ratio;
  /// |median R - exact R|.
  std::optional<double> ratio_error;
};

/// Real-amplitudes VQD batches at each beta of the grid.
std::vector<BetaSweepRow> beta_sweep(const Superpotential& sp, int lambda, const std::vector<double>& betas,
                                     int n_runs, const VQDConfig& base, std::uint64_t master_seed, int reps = 1,
                                     int jobs = 1);

/// One row per run, then a summary row with the exact reference levels.
void write_vqd_csv(std::ostream& os, const VQDBatch& batch);
void write_beta_sweep_csv(std::ostream& os, const std::vector<BetaSweepRow>& rows);

}  // namespace sqm
