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
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqm/hamiltonian.hpp"
#include "sqm/optimize.hpp"
#include "sqm/pauli.hpp"
#include "sqm/simulator.hpp"

namespace sqm {

enum class AnsatzName { RealAmplitudes, Full, Truncated };

std::string_view to_string(AnsatzName name);
AnsatzName parse_ansatz_name(std::string_view text);

struct Ansatz {
  AnsatzName name = AnsatzName::RealAmplitudes;
  Circuit circuit;

  int n_params() const { return circuit.n_params; }
  int n_qubits() const { return circuit.n_qubits; }
  /// Gate list in table notation, comma separated.
  std::string describe() const;
};

/// RY layer, CNOT chain q_i -> q_{i+1}, repeated `reps` times, then a final
/// RY layer; starts from |0...0>.
Ansatz real_amplitudes_ansatz(int n_qubits, int reps = 1);

/// Four-gate (one for HO) circuits that carry over to any truncation.
Ansatz truncated_ansatz(const Superpotential& sp, int n_qubits);

/// Builds an ansatz from gates whose parameter slots are renumbered 0..k-1.
Ansatz make_ansatz(AnsatzName name, int n_qubits, std::uint64_t initial_state, const std::vector<Gate>& gates);

/// Measurement mode: exact when empty, otherwise shots per measured circuit.
using ShotCount = std::optional<int>;

std::string mode_label(ShotCount shots);

struct VQERunRecord {
  std::uint64_t seed = 0;
  double energy = 0.0;
  Eigen::VectorXd params;
  int iterations = 0;
  long long evaluations = 0;
  bool converged = false;
  ShotCount shots;
};

struct BatchSummary {
  int n_runs = 0;
  std::optional<double> median_energy;
  double min_energy = 0.0;
  long long total_evaluations = 0;
  int converged_count = 0;
  double exact_reference_energy = 0.0;
  std::optional<double> abs_median_error;
};

struct VQEBatch {
  std::vector<VQERunRecord> runs;
  BatchSummary summary;
};

/// One VQE run. The start point is uniform in [0, 2pi) drawn from `seed`
/// unless `x0` is given; the optimizer and shot sampler get their own
/// streams derived from the same seed.
VQERunRecord run_vqe(const EnergyEstimator& energy, const Ansatz& ansatz, const OptimizerConfig& config,
                     ShotCount shots, std::uint64_t seed, const std::optional<Eigen::VectorXd>& x0 = std::nullopt);
VQERunRecord run_vqe(const PauliSum& ps, const Ansatz& ansatz, const OptimizerConfig& config, ShotCount shots,
                     std::uint64_t seed);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

BatchSummary summarize(const std::vector<VQERunRecord>& runs, double exact_energy);

/// Runs seeded with derive_seed(master_seed, i), i = 0..n_runs-1.
VQEBatch run_vqe_batch(const PauliSum& ps, const Ansatz& ansatz, const OptimizerConfig& config, ShotCount shots,
                       int n_runs, std::uint64_t master_seed, double exact_energy, int jobs = 1);

void write_vqe_csv(std::ostream& os, const VQEBatch& batch);

}  // namespace sqm
