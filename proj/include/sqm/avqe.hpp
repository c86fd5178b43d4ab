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
#include <string>
#include <vector>

#include "sqm/hamiltonian.hpp"
#include "sqm/optimize.hpp"
#include "sqm/simulator.hpp"
#include "sqm/vqe.hpp"

namespace sqm {

/// RY and RZ on every qubit plus CRY on every ordered (control, target) pair.
/// Enumeration order (also the tie-break order): RY from the highest qubit
/// down, RZ likewise, then CRY by ascending (control, target).
struct OperatorPool {
  std::vector<Gate> candidates;

  static OperatorPool standard(int n_qubits);
  std::size_t size() const { return candidates.size(); }
};

/// |dE/dtheta| at theta = 0 for each candidate appended to the circuit,
/// evaluated with the shift rule of its gate type.
std::vector<double> pool_gradients(const EnergyEstimator& energy, const Circuit& circuit,
                                   const Eigen::VectorXd& params, const OperatorPool& pool);

struct AVQEConfig {
  double energy_threshold = 1e-6;
  int max_gates = 30;
  /// Gradients within this margin of the largest count as tied.
  double tie_tolerance = 1e-10;
  /// Below this every candidate is treated as stationary.
  double gradient_floor = 1e-12;
  OptimizerConfig optimizer;
  std::optional<std::uint64_t> initial_state;
};

struct AVQEStepLog {
  int step = 0;
  Gate gate;
  /// Magnitude.
  double gradient = 0.0;
  double energy = 0.0;
  long long cumulative_evaluations = 0;
  /// False for the final gate when it was dropped by the stopping rule.
  bool accepted = true;
};

struct AVQEResult {
  std::uint64_t seed = 0;
  Ansatz ansatz;
  Eigen::VectorXd params;
  double energy = 0.0;
  double initial_energy = 0.0;
  std::vector<AVQEStepLog> steps;
  long long evaluations = 0;
};

/// Reference starting basis state: |10...0> for HO and AHO, |00...0> for DW
/// except lambda = 4, which starts from |100>.
std::uint64_t default_initial_state(const Superpotential& sp, int lambda);

/// Grows an ansatz gate by gate. Each step appends the candidate with the
/// largest |gradient|, warm-starts from the previous optimum with the new
/// angle at 0 and re-optimizes. Stops once a step changes the energy by less
/// than the threshold (that gate is dropped unless it is the only one), when
/// no candidate has a gradient, or at max_gates.
AVQEResult run_avqe(const Superpotential& sp, int lambda, const AVQEConfig& config, std::uint64_t seed);

/// Repeated constructions seeded with derive_seed(master_seed, i).
std::vector<AVQEResult> run_avqe_batch(const Superpotential& sp, int lambda, const AVQEConfig& config, int n_runs,
                                       std::uint64_t master_seed, int jobs = 1);

/// Index of the lowest final energy (first on ties).
std::size_t best_run(const std::vector<AVQEResult>& runs);

/// First min(k, size) gates, same initial state; renamed Truncated.
Ansatz truncate_ansatz(const Ansatz& full, int k = 4);

/// Line format: `initial <bits>` then one `GATE target[,control]` per line.
void write_ansatz(std::ostream& os, const Ansatz& ansatz);
std::string ansatz_to_text(const Ansatz& ansatz);
Ansatz read_ansatz(std::istream& is, AnsatzName name = AnsatzName::Full);
Ansatz ansatz_from_text(const std::string& text, AnsatzName name = AnsatzName::Full);

}  // namespace sqm
