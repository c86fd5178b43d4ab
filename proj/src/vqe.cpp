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
#include "sqm/vqe.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "sqm/parallel.hpp"

namespace sqm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string_view to_string(AnsatzName name) {
  switch (name) {
    case AnsatzName::RealAmplitudes: return "real-amplitudes";
    case AnsatzName::Full: return "full";
    case AnsatzName::Truncated: return "truncated";
  }
  return "?";
}

AnsatzName parse_ansatz_name(std::string_view text) {
  if (text == "real-amplitudes" || text == "ra") return AnsatzName::RealAmplitudes;
  if (text == "full") return AnsatzName::Full;
  if (text == "truncated") return AnsatzName::Truncated;
  throw std::invalid_argument("unknown ansatz '" + std::string(text) + "' (expected real-amplitudes, full or truncated)");
}

std::string Ansatz::describe() const {
  std::string s;
  for (const auto& g : circuit.gates) {
    if (!s.empty()) s += ", ";
    s += g.str();
  }
  return s;
}

Ansatz make_ansatz(AnsatzName name, int n_qubits, std::uint64_t initial_state, const std::vector<Gate>& gates) {
  Ansatz a;
  a.name = name;
  a.circuit.n_qubits = n_qubits;
  a.circuit.initial_state = initial_state;
  for (Gate g : gates) {
    if (g.is_parameterized()) g.param = a.circuit.n_params++;
    a.circuit.gates.push_back(g);
  }
  a.circuit.validate();
  return a;
}

Ansatz real_amplitudes_ansatz(int n_qubits, int reps) {
  if (n_qubits < 1) throw std::invalid_argument("real-amplitudes ansatz needs at least one qubit");
  if (reps < 1) throw std::invalid_argument("real-amplitudes reps must be >= 1");
  std::vector<Gate> gates;
  for (int r = 0; r <= reps; ++r) {
    for (int q = 0; q < n_qubits; ++q) gates.push_back(Gate::ry(q, 0));
    if (r == reps) break;
    for (int q = 0; q + 1 < n_qubits; ++q) gates.push_back(Gate::cnot(q, q + 1));
  }
  return make_ansatz(AnsatzName::RealAmplitudes, n_qubits, 0, gates);
}

Ansatz truncated_ansatz(const Superpotential& sp, int n_qubits) {
  const std::uint64_t fermion_up = n_qubits >= 1 ? std::uint64_t{1} << (n_qubits - 1) : 0;
  switch (sp.kind) {
    case SuperpotentialKind::HO:
      if (n_qubits < 2) throw std::invalid_argument("HO truncated ansatz needs at least 2 qubits");
      return make_ansatz(AnsatzName::Truncated, n_qubits, fermion_up, {Gate::ry(n_qubits - 1, 0)});
    case SuperpotentialKind::AHO:
      if (n_qubits < 4) throw std::invalid_argument("AHO truncated ansatz needs at least 4 qubits");
      return make_ansatz(AnsatzName::Truncated, n_qubits, fermion_up,
                         {Gate::ry(2, 0), Gate::ry(3, 0), Gate::ry(1, 0), Gate::cry(1, 2, 0)});
    case SuperpotentialKind::DW:
      if (n_qubits < 4) throw std::invalid_argument("DW truncated ansatz needs at least 4 qubits");
      return make_ansatz(AnsatzName::Truncated, n_qubits, 0,
                         {Gate::ry(0, 0), Gate::cry(0, 1, 0), Gate::ry(2, 0), Gate::ry(1, 0)});
  }
  throw std::logic_error("unknown superpotential");
}

std::string mode_label(ShotCount shots) { return shots ? "shots" + std::to_string(*shots) : "exact"; }

VQERunRecord run_vqe(const EnergyEstimator& energy, const Ansatz& ansatz, const OptimizerConfig& config,
                     ShotCount shots, std::uint64_t seed, const std::optional<Eigen::VectorXd>& x0) {
  if (energy.n_qubits() != ansatz.n_qubits())
    throw std::invalid_argument("ansatz width does not match the Hamiltonian");
  if (shots && *shots < 1) throw std::invalid_argument("shots must be positive");
  const int n = ansatz.n_params();
  RngStream init_rng(seed);
  Eigen::VectorXd start(n);
  if (x0) {
    if (x0->size() != n) throw std::invalid_argument("start point length does not match the ansatz");
    start = *x0;
  } else {
    for (int i = 0; i < n; ++i) start[i] = init_rng.uniform(0.0, 2 * std::numbers::pi);
  }
  OptimizerConfig cfg = config;
  cfg.seed = derive_seed(seed, 1);
  RngStream shot_rng(derive_seed(seed, 2));

  const Circuit& circuit = ansatz.circuit;
  Objective obj(n, [&](const Eigen::VectorXd& p) { return energy.estimate(run_circuit(circuit, p), shots, shot_rng); });
  const OptimizationResult res = minimize(obj, start, cfg);

  VQERunRecord rec;
  rec.seed = seed;
  rec.params = res.best_params;
  rec.energy = shots ? energy.estimate(run_circuit(circuit, res.best_params), shots, shot_rng) : res.best_value;
  rec.iterations = res.iterations;
  rec.evaluations = res.evaluations;
  rec.converged = res.converged;
  rec.shots = shots;
  return rec;
}

VQERunRecord run_vqe(const PauliSum& ps, const Ansatz& ansatz, const OptimizerConfig& config, ShotCount shots,
                     std::uint64_t seed) {
  return run_vqe(EnergyEstimator(ps), ansatz, config, shots, seed);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

BatchSummary summarize(const std::vector<VQERunRecord>& runs, double exact_energy) {
  if (runs.empty()) throw std::invalid_argument("no runs to summarize");
  BatchSummary s;
  s.n_runs = static_cast<int>(runs.size());
  s.exact_reference_energy = exact_energy;
  s.min_energy = runs.front().energy;
  std::vector<double> converged;
  for (const auto& r : runs) {
    s.total_evaluations += r.evaluations;
    s.min_energy = std::min(s.min_energy, r.energy);
    if (r.converged) converged.push_back(r.energy);
  }
  s.converged_count = static_cast<int>(converged.size());
  if (!converged.empty()) {
    s.median_energy = median(converged);
    s.abs_median_error = std::abs(*s.median_energy - exact_energy);
  }
  return s;
}

VQEBatch run_vqe_batch(const PauliSum& ps, const Ansatz& ansatz, const OptimizerConfig& config, ShotCount shots,
                       int n_runs, std::uint64_t master_seed, double exact_energy, int jobs) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  const EnergyEstimator energy(ps);
  VQEBatch batch;
  batch.runs.resize(static_cast<std::size_t>(n_runs));
  parallel_for(batch.runs.size(), jobs, [&](std::size_t i) {
    batch.runs[i] = run_vqe(energy, ansatz, config, shots, derive_seed(master_seed, i));
  });
  batch.summary = summarize(batch.runs, exact_energy);
  return batch;
}

void write_vqe_csv(std::ostream& os, const VQEBatch& batch) {
  os << "row,seed,energy,iterations,evaluations,converged\n";
  for (std::size_t i = 0; i < batch.runs.size(); ++i) {
    const auto& r = batch.runs[i];
    os << "run" << i << ',' << r.seed << ',' << num(r.energy) << ',' << r.iterations << ',' << r.evaluations << ','
       << (r.converged ? 1 : 0) << '\n';
  }
  const auto& s = batch.summary;
  os << "# summary: n_runs,converged,median_energy,min_energy,exact_energy,abs_median_error,total_evaluations\n";
  os << "summary," << s.n_runs << ',' << s.converged_count << ','
     << (s.median_energy ? num(*s.median_energy) : "nan") << ',' << num(s.min_energy) << ','
     << num(s.exact_reference_energy) << ',' << (s.abs_median_error ? num(*s.abs_median_error) : "nan") << ','
     << s.total_evaluations << '\n';
}

}  // namespace sqm
