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
#include "sqm/vqd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sqm/parallel.hpp"

namespace sqm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

}  // namespace

Statevector dswap_state(const Statevector& a, const Statevector& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("DSWAP registers differ in width");
  const int n = a.n_qubits();
  Statevector s = tensor(a, b);
  for (int i = 0; i < n; ++i) {
    apply_gate(s, Gate::cnot(n + i, i));
    apply_gate(s, Gate::h(n + i));
  }
  return s;
}

double dswap_parity_sign(std::uint64_t outcome, int n_qubits) {
  const std::uint64_t mask = (std::uint64_t{1} << n_qubits) - 1;
  return std::popcount((outcome >> n_qubits) & outcome & mask) % 2 ? -1.0 : 1.0;
}

OverlapEstimate dswap_overlap(const Statevector& a, const Statevector& b, ShotCount shots, RngStream& rng) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("DSWAP registers differ in width");
  OverlapEstimate out;
  if (!shots) {
    out.raw = overlap_squared(a, b);
  } else {
    if (*shots < 1) throw std::invalid_argument("shots must be positive");
    // Sampling the circuit and counting odd parities is a binomial draw on
    // the exact odd-parity probability.
    const Eigen::VectorXd probs = dswap_state(a, b).probabilities();
    double p_odd = 0.0;
    for (Eigen::Index k = 0; k < probs.size(); ++k)
      if (dswap_parity_sign(static_cast<std::uint64_t>(k), a.n_qubits()) < 0) p_odd += probs[k];
    const long long odd = rng.binomial(*shots, std::clamp(p_odd, 0.0, 1.0));
    out.raw = 1.0 - 2.0 * static_cast<double>(odd) / *shots;
  }
  out.value = std::clamp(out.raw, 0.0, 1.0);
  out.clamped = out.value != out.raw;
  return out;
}

OverlapEstimate dswap_overlap(const Circuit& a, const Eigen::VectorXd& params_a, const Circuit& b,
                              const Eigen::VectorXd& params_b, ShotCount shots, std::uint64_t seed) {
  RngStream rng(seed);
  return dswap_overlap(run_circuit(a, params_a), run_circuit(b, params_b), shots, rng);
}

void VQDConfig::validate() const {
  if (n_levels < 2) throw std::invalid_argument("VQD needs at least two levels");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!level_betas.empty() && std::ssize(level_betas) != n_levels - 1)
    throw std::invalid_argument("level_betas needs one weight per excited level");
  for (double b : level_betas)
    if (!(b > 0.0)) throw std::invalid_argument("beta must be positive");
  if (shots && *shots < 1) throw std::invalid_argument("shots must be positive");
  optimizer.validate();
}

double VQDConfig::beta_for(int level) const {
  return level_betas.empty() ? beta : level_betas[static_cast<std::size_t>(level - 1)];
}

bool VQDRunRecord::converged() const {
  return std::all_of(levels.begin(), levels.end(), [](const VQDLevel& l) { return l.converged; });
}

VQDRunRecord run_vqd(const EnergyEstimator& energy, const Ansatz& ansatz, const VQDConfig& config,
                     std::uint64_t seed) {
  config.validate();
  if (energy.n_qubits() != ansatz.n_qubits()) throw std::invalid_argument("ansatz width does not match the Hamiltonian");
  const int n = ansatz.n_params();
  const Circuit& circuit = ansatz.circuit;

  VQDRunRecord rec;
  rec.seed = seed;
  rec.shots = config.shots;
  std::vector<Statevector> found;
  for (int k = 0; k < config.n_levels; ++k) {
    const std::uint64_t level_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
    RngStream init_rng(level_seed);
    Eigen::VectorXd start(n);
    for (int i = 0; i < n; ++i) start[i] = init_rng.uniform(0.0, 2 * std::numbers::pi);
    OptimizerConfig cfg = config.optimizer;
    cfg.seed = derive_seed(level_seed, 1);
    RngStream shot_rng(derive_seed(level_seed, 2));

    long long clamped = 0;
    auto cost = [&](const Eigen::VectorXd& p) {
      const Statevector psi = run_circuit(circuit, p);
      double c = energy.estimate(psi, config.shots, shot_rng);
      for (int i = 0; i < k; ++i) {
        const OverlapEstimate o = dswap_overlap(psi, found[static_cast<std::size_t>(i)], config.shots, shot_rng);
        clamped += o.clamped;
        c += config.beta_for(k) * o.value;
      }
      return c;
    };
    Objective obj(n, cost);
    const OptimizationResult res = minimize(obj, start, cfg);

    VQDLevel level;
    level.params = res.best_params;
    level.penalized_cost = res.best_value;
    level.converged = res.converged;
    level.iterations = res.iterations;
    level.evaluations = res.evaluations * (1 + k);
    const Statevector psi = run_circuit(circuit, res.best_params);
    level.energy = energy.estimate(psi, config.shots, shot_rng);
    found.push_back(psi);

    rec.iterations += level.iterations;
    rec.evaluations += level.evaluations;
    rec.clamped_overlaps += clamped;
    rec.energies.push_back(level.energy);
    rec.levels.push_back(std::move(level));
  }
  std::sort(rec.energies.begin(), rec.energies.end());
  if (rec.energies.size() >= 3) rec.ratio = ratio_r(rec.energies[0], rec.energies[1], rec.energies[2]);
  rec.classification = classify_susy(rec.ratio);
  return rec;
}

VQDRunRecord run_vqd(const PauliSum& ps, const Ansatz& ansatz, const VQDConfig& config, std::uint64_t seed) {
  return run_vqd(EnergyEstimator(ps), ansatz, config, seed);
}

namespace {

VQDBatchSummary summarize_vqd(const std::vector<VQDRunRecord>& runs, const std::vector<double>& exact) {
  VQDBatchSummary s;
  s.n_runs = static_cast<int>(runs.size());
  s.exact_energies = exact;
  if (exact.size() >= 3) s.exact_ratio = ratio_r(exact[0], exact[1], exact[2]);
  std::vector<std::vector<double>> levels;
  std::vector<double> ratios;
  long long iterations = 0;
  for (const auto& r : runs) {
    s.total_evaluations += r.evaluations;
    iterations += r.iterations;
    if (!r.converged()) continue;
    ++s.converged_count;
    levels.resize(std::max(levels.size(), r.energies.size()));
    for (std::size_t k = 0; k < r.energies.size(); ++k) levels[k].push_back(r.energies[k]);
    if (r.ratio) ratios.push_back(*r.ratio);
  }
  if (s.n_runs > 0) {
    s.mean_iterations = static_cast<double>(iterations) / s.n_runs;
    s.mean_evaluations = static_cast<double>(s.total_evaluations) / s.n_runs;
  }
  for (const auto& l : levels) s.median_energies.push_back(median(l));
  if (!ratios.empty()) s.median_ratio = median(ratios);
  return s;
}

}  // namespace

VQDBatch run_vqd_batch(const PauliSum& ps, const Ansatz& ansatz, const VQDConfig& config, int n_runs,
                       std::uint64_t master_seed, const std::vector<double>& exact_energies, int jobs) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  config.validate();
  const EnergyEstimator energy(ps);
  VQDBatch batch;
  batch.runs.resize(static_cast<std::size_t>(n_runs));
  parallel_for(batch.runs.size(), jobs,
               [&](std::size_t i) { batch.runs[i] = run_vqd(energy, ansatz, config, derive_seed(master_seed, i)); });
  batch.summary = summarize_vqd(batch.runs, exact_energies);
  return batch;
}

std::vector<BetaSweepRow> beta_sweep(const Superpotential& sp, int lambda, const std::vector<double>& betas,
                                     int n_runs, const VQDConfig& base, std::uint64_t master_seed, int reps,
                                     int jobs) {
  if (betas.empty()) throw std::invalid_argument("beta grid is empty");
  const PauliSum ps = hamiltonian_pauli_sum(sp, lambda);
  const Ansatz ansatz = real_amplitudes_ansatz(ps.n_qubits(), reps);
  const std::vector<double> exact = hamiltonian_eigenvalues(sp, lambda, base.n_levels);
  std::vector<BetaSweepRow> rows;
  for (double beta : betas) {
    VQDConfig cfg = base;
    cfg.beta = beta;
    cfg.level_betas.clear();
    const VQDBatch batch = run_vqd_batch(ps, ansatz, cfg, n_runs, master_seed, exact, jobs);
    BetaSweepRow row;
    row.beta = beta;
    row.converged_count = batch.summary.converged_count;
    row.mean_iterations = batch.summary.mean_iterations;
    row.median_ratio = batch.summary.median_ratio;
    row.exact_ratio = batch.summary.exact_ratio;
    if (row.median_ratio && batch.summary.exact_ratio)
      row.ratio_error = std::abs(*row.median_ratio - *batch.summary.exact_ratio);
    rows.push_back(row);
  }
  return rows;
}

void write_vqd_csv(std::ostream& os, const VQDBatch& batch) {
  std::size_t n_levels = batch.summary.exact_energies.size();
  for (const auto& r : batch.runs) n_levels = std::max(n_levels, r.energies.size());
  os << "row,seed";
  for (std::size_t k = 0; k < n_levels; ++k) os << ",E" << k;
  os << ",R,classification,iterations,evaluations,converged,clamped_overlaps\n";
  for (std::size_t i = 0; i < batch.runs.size(); ++i) {
    const auto& r = batch.runs[i];
    os << "run" << i << ',' << r.seed;
    for (std::size_t k = 0; k < n_levels; ++k) os << ',' << (k < r.energies.size() ? num(r.energies[k]) : "nan");
    os << ',' << opt_num(r.ratio) << ',' << to_string(r.classification) << ',' << r.iterations << ','
       << r.evaluations << ',' << (r.converged() ? 1 : 0) << ',' << r.clamped_overlaps << '\n';
  }
  const auto& s = batch.summary;
  os << "# summary: n_runs,converged,mean_iterations,mean_evaluations,total_evaluations,median E0..,median_R,"
        "exact E0..,exact_R\n";
  os << "summary," << s.n_runs << ',' << s.converged_count << ',' << num(s.mean_iterations) << ','
     << num(s.mean_evaluations) << ',' << s.total_evaluations;
  for (std::size_t k = 0; k < n_levels; ++k)
    os << ',' << (k < s.median_energies.size() ? num(s.median_energies[k]) : "nan");
  os << ',' << opt_num(s.median_ratio);
  for (std::size_t k = 0; k < n_levels; ++k)
    os << ',' << (k < s.exact_energies.size() ? num(s.exact_energies[k]) : "nan");
  os << ',' << opt_num(s.exact_ratio) << '\n';
}

void write_beta_sweep_csv(std::ostream& os, const std::vector<BetaSweepRow>& rows) {
  os << "beta,converged,mean_iterations,median_R,exact_R,abs_R_error\n";
  for (const auto& r : rows)
    os << num(r.beta) << ',' << r.converged_count << ',' << num(r.mean_iterations) << ','
       << opt_num(r.median_ratio) << ',' << opt_num(r.exact_ratio) << ',' << opt_num(r.ratio_error) << '\n';
}

}  // namespace sqm
