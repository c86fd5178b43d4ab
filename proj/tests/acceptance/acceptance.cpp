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
// Acceptance suite. Each criterion prints its failing checks indented and
// then one "criterion N: PASS|FAIL" line.
//
//   sqm_acceptance              run every criterion
//   sqm_acceptance -c 4 -c 5    run selected criteria
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "reference.hpp"
#include "sqm/avqe.hpp"
#include "sqm/cli.hpp"
#include "sqm/exactdiag.hpp"
#include "sqm/hamiltonian.hpp"
#include "sqm/pauli.hpp"
#include "sqm/rng.hpp"
#include "sqm/simulator.hpp"
#include "sqm/vqd.hpp"
#include "sqm/vqe.hpp"

namespace fs = std::filesystem;
using namespace sqm;

namespace {

int g_jobs = 1;

class Report {
 public:
  void expect(bool cond, const std::string& what) {
    ++checks_;
    if (cond) return;
    ++failures_;
    if (failures_ <= 40) std::cout << "  fail: " << what << '\n';
  }
  void note(const std::string& what) { std::cout << "  " << what << '\n'; }
  bool ok() const { return failures_ == 0; }
  int checks() const { return checks_; }
  int failures() const { return failures_; }

 private:
  int checks_ = 0;
  int failures_ = 0;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Superpotential sp_from(const std::string& name) {
  switch (parse_superpotential_kind(name)) {
    case SuperpotentialKind::HO: return Superpotential::harmonic();
    case SuperpotentialKind::AHO: return Superpotential::anharmonic();
    case SuperpotentialKind::DW: return Superpotential::double_well();
  }
  throw std::logic_error("unknown superpotential");
}

int qubits(int lambda) { return boson_qubits(lambda) + 1; }

double ground_energy(const Superpotential& sp, int lambda) { return hamiltonian_eigenvalues(sp, lambda, 1)[0]; }

const Superpotential kAll[] = {Superpotential::harmonic(), Superpotential::anharmonic(),
                               Superpotential::double_well()};

// 1. Pauli term counts, full and ground-state block.
void pauli_counts(Report& rep) {
  for (const auto& row : reference::kFullCounts) {
    const int got[] = {count_terms(Superpotential::harmonic(), row.lambda),
                       count_terms(Superpotential::double_well(), row.lambda),
                       count_terms(Superpotential::anharmonic(), row.lambda)};
    const int want[] = {row.ho, row.dw, row.aho};
    const char* names[] = {"ho", "dw", "aho"};
    for (int i = 0; i < 3; ++i)
      rep.expect(got[i] == want[i], fmt("full %s lambda=%d: %d != %d", names[i], row.lambda, got[i], want[i]));
  }
  for (const auto& row : reference::kBlockCounts) {
    const Superpotential sps[] = {Superpotential::harmonic(), Superpotential::double_well(),
                                  Superpotential::anharmonic()};
    const int want[] = {row.ho, row.dw, row.aho};
    for (int i = 0; i < 3; ++i) {
      const int got = count_terms(sps[i], row.lambda, ground_state_sector(sps[i], row.lambda));
      rep.expect(got == want[i], fmt("block %s lambda=%d: %d != %d", std::string(to_string(sps[i].kind)).c_str(),
                                     row.lambda, got, want[i]));
    }
  }
}

// 2. Lowest three levels and R up to lambda 1024.
void spectra(Report& rep) {
  const std::pair<Superpotential, const std::vector<reference::LevelRow>*> cases[] = {
      {Superpotential::harmonic(), &reference::kHarmonicLevels},
      {Superpotential::double_well(), &reference::kDoubleWellLevels},
      {Superpotential::anharmonic(), &reference::kAnharmonicLevels},
  };
  for (const auto& [sp, rows] : cases) {
    const std::string name(to_string(sp.kind));
    for (const auto& row : *rows) {
      const auto rep_row = spectrum_report(sp, row.lambda);
      const double want[] = {row.e0, row.e1, row.e2};
      for (int i = 0; i < 3; ++i)
        rep.expect(std::abs(rep_row.energies[i] - want[i]) <= 1e-6,
                   fmt("%s lambda=%d E%d: %.10g vs %.10g", name.c_str(), row.lambda, i, rep_row.energies[i], want[i]));
      rep.expect(rep_row.ratio && std::abs(*rep_row.ratio - row.r) <= 1e-6,
                 fmt("%s lambda=%d R: %.10g vs %.10g", name.c_str(), row.lambda,
                     rep_row.ratio ? *rep_row.ratio : NAN, row.r));
    }
  }
}

// 3. Gaps rounded to three decimals.
void gaps(Report& rep) {
  for (const auto& row : reference::kGaps) {
    const auto r = spectrum_report(sp_from(row.sp), row.lambda);
    // abs() keeps a rounded -0.000 from printing with a sign
    const std::string g01 = fmt("%.3f", std::abs(r.gap01));
    const std::string g12 = fmt("%.3f", std::abs(r.gap12));
    rep.expect(g01 == row.gap01, fmt("%s lambda=%d dE01 %s vs %s", row.sp, row.lambda, g01.c_str(), row.gap01));
    rep.expect(g12 == row.gap12, fmt("%s lambda=%d dE12 %s vs %s", row.sp, row.lambda, g12.c_str(), row.gap12));
  }
}

// 4. Best-of-100 AVQE energies and per-step minima.
void adaptive_energies(Report& rep) {
  for (const auto& row : reference::kAdaptive) {
    const Superpotential sp = sp_from(row.sp);
    const auto runs = run_avqe_batch(sp, row.lambda, AVQEConfig{}, 100, 0, g_jobs);
    const auto& best = runs[best_run(runs)];
    rep.expect(std::abs(best.energy - row.best) <= 1e-4,
               fmt("%s lambda=%d best %.6f vs %.6f", row.sp, row.lambda, best.energy, row.best));
    std::vector<double> step_min;
    for (const auto& r : runs)
      for (std::size_t k = 0; k < r.steps.size(); ++k) {
        if (step_min.size() <= k) step_min.push_back(r.steps[k].energy);
        step_min[k] = std::min(step_min[k], r.steps[k].energy);
      }
    for (const auto& [step, want] : row.steps) {
      const bool have = static_cast<std::size_t>(step) <= step_min.size();
      const double got = have ? step_min[static_cast<std::size_t>(step - 1)] : NAN;
      rep.expect(have && std::abs(got - want) <= 1e-4,
                 fmt("%s lambda=%d step %d: %.6f vs %.6f", row.sp, row.lambda, step, got, want));
    }
    rep.note(fmt("%s lambda=%d best %.6f gates %zu", row.sp, row.lambda, best.energy, best.ansatz.circuit.gates.size()));
  }
}

// 5. First four selected gates at larger cutoffs.
void gate_prefixes(Report& rep) {
  const std::pair<Superpotential, const std::array<std::string, 4>*> cases[] = {
      {Superpotential::anharmonic(), &reference::kAnharmonicPrefix},
      {Superpotential::double_well(), &reference::kDoubleWellPrefix},
  };
  AVQEConfig cfg;
  cfg.max_gates = 4;
  for (const auto& [sp, prefix] : cases)
    for (int lambda : {16, 32, 64}) {
      const auto res = run_avqe(sp, lambda, cfg, 0);
      std::vector<std::string> got;
      for (std::size_t k = 0; k < res.steps.size() && k < 4; ++k) got.push_back(res.steps[k].gate.str());
      std::string joined;
      for (const auto& g : got) joined += g + " ";
      rep.expect(got == std::vector<std::string>(prefix->begin(), prefix->end()),
                 fmt("%s lambda=%d prefix %s", std::string(to_string(sp.kind)).c_str(), lambda, joined.c_str()));
    }
}

// 6. Truncated ansatz, exact mode, 100 runs.
void truncated_vqe(Report& rep) {
  for (const auto& sp : kAll)
    for (int lambda : {8, 16, 32, 64}) {
      const std::string name(to_string(sp.kind));
      const double e0 = ground_energy(sp, lambda);
      const auto batch = run_vqe_batch(hamiltonian_pauli_sum(sp, lambda), truncated_ansatz(sp, qubits(lambda)),
                                       OptimizerConfig{}, std::nullopt, 100, 0, e0, g_jobs);
      const auto& s = batch.summary;
      const double tol = sp.kind == SuperpotentialKind::HO ? 1e-6 : 1e-2;
      const double err = s.abs_median_error.value_or(NAN);
      rep.expect(s.abs_median_error && err <= tol,
                 fmt("%s lambda=%d median error %.3g > %.0e (%d/100 converged)", name.c_str(), lambda, err, tol,
                     s.converged_count));
      rep.note(fmt("%s lambda=%d converged %d/100 median %.6f exact %.6f", name.c_str(), lambda, s.converged_count,
                   s.median_energy.value_or(NAN), e0));
    }
}

VQDBatch vqd_batch(const Superpotential& sp, int lambda, double beta) {
  VQDConfig cfg;
  cfg.beta = beta;
  const auto exact = hamiltonian_eigenvalues(sp, lambda, 3);
  return run_vqd_batch(hamiltonian_pauli_sum(sp, lambda), real_amplitudes_ansatz(qubits(lambda), 1), cfg, 100, 0,
                       exact, g_jobs);
}

// 7. VQD ratio R, exact mode.
void vqd_ratios(Report& rep) {
  auto run = [&](const Superpotential& sp, int lambda, double beta, const std::function<bool(double)>& pass,
                 const char* target) {
    const auto b = vqd_batch(sp, lambda, beta);
    const auto& s = b.summary;
    const std::string name(to_string(sp.kind));
    const double r = s.median_ratio.value_or(NAN);
    rep.expect(s.median_ratio && pass(r),
               fmt("%s lambda=%d beta=%g median R %.4g, want %s (%d/100 converged)", name.c_str(), lambda, beta, r,
                   target, s.converged_count));
    rep.note(fmt("%s lambda=%d beta=%g converged %d/100 median R %.4g", name.c_str(), lambda, beta, s.converged_count,
                 r));
  };
  for (int lambda : {4, 8, 16, 32})
    run(Superpotential::harmonic(), lambda, 5.0, [](double r) { return std::abs(r) <= 1e-3; }, "0 +- 1e-3");
  run(Superpotential::double_well(), 16, 5.0, [](double r) { return std::abs(r - 0.9897) <= 0.02; },
      "0.9897 +- 0.02");
  run(Superpotential::anharmonic(), 16, 5.0, [](double r) { return r <= 0.15; }, "<= 0.15");
  run(Superpotential::harmonic(), 16, 0.5, [](double r) { return r >= 0.4; }, ">= 0.4");
}

Statevector random_state(int n, std::uint64_t seed) {
  const Ansatz a = real_amplitudes_ansatz(n, 2);
  RngStream rng(seed);
  Eigen::VectorXd p(a.n_params());
  for (auto& x : p) x = rng.uniform(0.0, 2 * std::numbers::pi);
  // RZ layer so the state is not purely real
  Statevector s = run_circuit(a.circuit, p);
  for (int q = 0; q < n; ++q) apply_gate(s, Gate::rz(q, 0), rng.uniform(0.0, 2 * std::numbers::pi));
  return s;
}

// 8. Shot-mode properties.
void shot_properties(Report& rep) {
  // (a) unbiased energy estimator
  for (const auto& sp : kAll)
    for (int lambda : {2, 4, 8}) {
      const std::string name(to_string(sp.kind));
      const int kind = sp.kind == SuperpotentialKind::HO ? 0 : sp.kind == SuperpotentialKind::AHO ? 1 : 2;
      const Eigen::MatrixXd h = oracle::sqm_hamiltonian(kind, lambda);
      const EnergyEstimator est(hamiltonian_pauli_sum(sp, lambda));
      const Statevector psi = random_state(qubits(lambda), 11 + static_cast<std::uint64_t>(lambda));
      const Eigen::VectorXcd& v = psi.amplitudes();
      const double exact = (v.adjoint() * h.cast<std::complex<double>>() * v)(0, 0).real();
      RngStream rng(derive_seed(3, static_cast<std::uint64_t>(lambda * 3 + kind)));
      std::vector<double> samples;
      for (int i = 0; i < 200; ++i) samples.push_back(est.shots(psi, 1000, rng));
      const double dev = std::abs(oracle::mean(samples) - exact);
      const double sem = oracle::sem(samples);
      rep.expect(dev <= 5 * sem, fmt("(a) %s lambda=%d |mean-exact| %.3g > 5 SEM %.3g", name.c_str(), lambda, dev,
                                     5 * sem));
    }

  // (b) DSWAP estimate vs statevector overlap
  for (int n : {1, 2, 3, 4}) {
    for (std::uint64_t pair = 0; pair < 4; ++pair) {
      const Statevector a = random_state(n, 100 + pair * 7 + static_cast<std::uint64_t>(n));
      const Statevector b = pair == 0 ? a : random_state(n, 200 + pair * 7 + static_cast<std::uint64_t>(n));
      const double overlap = std::norm(a.amplitudes().dot(b.amplitudes()));
      const int shots = 4000;
      const double p_odd = (1 - overlap) / 2;
      const double sigma = 2 * std::sqrt(p_odd * (1 - p_odd) / shots);
      RngStream rng(derive_seed(17, pair * 10 + static_cast<std::uint64_t>(n)));
      std::vector<double> raws;
      for (int i = 0; i < 200; ++i) raws.push_back(dswap_overlap(a, b, shots, rng).raw);
      int outside = 0;
      for (double r : raws) outside += std::abs(r - overlap) > 5 * sigma + 1e-12;
      rep.expect(outside == 0, fmt("(b) n=%d pair %d: %d of 200 estimates outside 5 sigma", n, static_cast<int>(pair),
                                   outside));
      const double mean_dev = std::abs(oracle::mean(raws) - overlap);
      rep.expect(mean_dev <= 5 * sigma / std::sqrt(200.0) + 1e-12,
                 fmt("(b) n=%d pair %d: mean off by %.3g", n, static_cast<int>(pair), mean_dev));
    }
  }

  // (c) shots degrade the VQE median error. Medians over all runs since
  // shot-mode runs rarely meet a 1e-8 tolerance.
  {
    const Superpotential sp = Superpotential::anharmonic();
    const int lambda = 4;
    const double e0 = ground_energy(sp, lambda);
    const PauliSum ps = hamiltonian_pauli_sum(sp, lambda);
    const Ansatz ansatz = real_amplitudes_ansatz(qubits(lambda), 1);
    auto median_error = [&](ShotCount shots) {
      const auto b = run_vqe_batch(ps, ansatz, OptimizerConfig{}, shots, 50, 0, e0, g_jobs);
      std::vector<double> err;
      for (const auto& r : b.runs) err.push_back(std::abs(r.energy - e0));
      return median(err);
    };
    const double exact_err = median_error(std::nullopt);
    const double shot_err = median_error(1000);
    rep.expect(shot_err > exact_err, fmt("(c) shot median error %.3g <= exact %.3g", shot_err, exact_err));
    rep.note(fmt("(c) aho lambda=4 median |E-E0|: exact %.3g, 1000 shots %.3g", exact_err, shot_err));
  }

  // (d) VQD evaluation accounting: replay each level objective with counters.
  for (ShotCount shots : {ShotCount{}, ShotCount{500}}) {
    const Superpotential sp = Superpotential::double_well();
    const int lambda = 4;
    const PauliSum ps = hamiltonian_pauli_sum(sp, lambda);
    const EnergyEstimator energy(ps);
    const Ansatz ansatz = real_amplitudes_ansatz(qubits(lambda), 1);
    VQDConfig cfg;
    cfg.shots = shots;
    cfg.optimizer.max_iterations = 400;
    const std::uint64_t seed = 21;
    const VQDRunRecord rec = run_vqd(energy, ansatz, cfg, seed);
    const int n = ansatz.n_params();
    std::vector<Statevector> found;
    long long total = 0;
    for (int k = 0; k < cfg.n_levels; ++k) {
      const std::uint64_t level_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
      RngStream init(level_seed);
      Eigen::VectorXd x0(n);
      for (auto& x : x0) x = init.uniform(0.0, 2 * std::numbers::pi);
      OptimizerConfig oc = cfg.optimizer;
      oc.seed = derive_seed(level_seed, 1);
      RngStream shot_rng(derive_seed(level_seed, 2));
      long long energy_calls = 0, overlap_calls = 0;
      Objective obj(n, [&](const Eigen::VectorXd& p) {
        const Statevector psi = run_circuit(ansatz.circuit, p);
        ++energy_calls;
        double c = energy.estimate(psi, shots, shot_rng);
        for (int i = 0; i < k; ++i) {
          ++overlap_calls;
          c += cfg.beta_for(k) * dswap_overlap(psi, found[static_cast<std::size_t>(i)], shots, shot_rng).value;
        }
        return c;
      });
      const auto res = minimize(obj, x0, oc);
      const auto& level = rec.levels[static_cast<std::size_t>(k)];
      const std::string mode = shots ? "shots" : "exact";
      rep.expect(res.best_value == level.penalized_cost,
                 fmt("(d) %s level %d: replayed cost %.12g != %.12g", mode.c_str(), k, res.best_value,
                     level.penalized_cost));
      rep.expect(overlap_calls == k * energy_calls,
                 fmt("(d) %s level %d: %lld overlaps for %lld energies", mode.c_str(), k, overlap_calls, energy_calls));
      rep.expect(level.evaluations == energy_calls + overlap_calls,
                 fmt("(d) %s level %d: reported %lld evaluations, counted %lld", mode.c_str(), k, level.evaluations,
                     energy_calls + overlap_calls));
      total += energy_calls + overlap_calls;
      found.push_back(run_circuit(ansatz.circuit, level.params));
    }
    rep.expect(rec.evaluations == total, fmt("(d) run total %lld != %lld", rec.evaluations, total));
  }
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[e.path().filename().string()] = ss.str();
  }
  return out;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sqm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

// 9. Property suites.
void properties(Report& rep) {
  // Hermiticity of the matrix and of the Pauli reconstruction
  for (const auto& sp : kAll)
    for (int lambda = 2; lambda <= 256; lambda *= 2) {
      const Eigen::MatrixXd h = hamiltonian_matrix<double>(sp, lambda);
      rep.expect((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0,
                 fmt("hermiticity %s lambda=%d", std::string(to_string(sp.kind)).c_str(), lambda));
      if (lambda <= 32) {
        const Eigen::MatrixXcd r = reconstruct(hamiltonian_pauli_sum(sp, lambda));
        rep.expect((r - r.adjoint()).cwiseAbs().maxCoeff() <= 1e-12,
                   fmt("reconstruction hermiticity %s lambda=%d", std::string(to_string(sp.kind)).c_str(), lambda));
      }
    }

  // Pauli round trip. Past lambda 32 the AHO entries pass 1e5 and double
  // rounding of the matrix alone exceeds 1e-10.
  for (const auto& sp : kAll)
    for (int lambda = 2; lambda <= 32; lambda *= 2) {
      const Eigen::MatrixXd h = hamiltonian_matrix<double>(sp, lambda);
      const double err = (reconstruct(hamiltonian_pauli_sum(sp, lambda)) - h.cast<std::complex<double>>())
                             .cwiseAbs()
                             .maxCoeff();
      rep.expect(err <= 1e-10, fmt("round trip %s lambda=%d: %.3g", std::string(to_string(sp.kind)).c_str(), lambda,
                                   err));
    }

  // Norm preservation under random pool circuits
  for (int n = 2; n <= 7; ++n) {
    const OperatorPool pool = OperatorPool::standard(n);
    RngStream rng(derive_seed(5, static_cast<std::uint64_t>(n)));
    Statevector s(n, rng.below(std::uint64_t{1} << n));
    for (int i = 0; i < 60; ++i) {
      apply_gate(s, pool.candidates[rng.below(pool.size())], rng.uniform(-10, 10));
      apply_gate(s, Gate::h(static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))));
    }
    rep.expect(std::abs(s.norm() - 1) <= 1e-12, fmt("norm n=%d: %.3g", n, std::abs(s.norm() - 1)));
  }

  // Parameter shift vs central differences, circuit mixing RY, RZ and CRY
  for (const auto& sp : kAll) {
    const int lambda = 8, n = qubits(lambda);
    const EnergyEstimator energy(hamiltonian_pauli_sum(sp, lambda));
    RngStream rng(derive_seed(9, static_cast<std::uint64_t>(sp.kind)));
    Circuit c;
    c.n_qubits = n;
    for (int q = 0; q < n; ++q) c.gates.push_back(Gate::h(q));
    const OperatorPool pool = OperatorPool::standard(n);
    for (int i = 0; i < 12; ++i) {
      Gate g = pool.candidates[rng.below(pool.size())];
      g.param = c.n_params++;
      c.gates.push_back(g);
    }
    std::vector<double> p(static_cast<std::size_t>(c.n_params));
    for (auto& x : p) x = rng.uniform(0.0, 2 * std::numbers::pi);
    const Eigen::VectorXd grad = parameter_shift_gradient(energy, c, p);
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(p.data(), c.n_params);
    auto f = [&](const Eigen::VectorXd& y) { return energy.exact(run_circuit(c, y)); };
    for (int i = 0; i < c.n_params; ++i) {
      const double fd = oracle::central_difference(f, x, i, 1e-4);
      rep.expect(std::abs(grad[i] - fd) <= 1e-6, fmt("shift rule %s param %d: %.10g vs %.10g",
                                                     std::string(to_string(sp.kind)).c_str(), i, grad[i], fd));
    }
  }

  // Block eigenvalues merge to the full spectrum
  for (const auto& sp : kAll)
    for (int lambda = 2; lambda <= 64; lambda *= 2) {
      std::vector<double> merged = eigenvalues(block_matrix<double>(sp, lambda, FermionSector::Zero));
      const auto one = eigenvalues(block_matrix<double>(sp, lambda, FermionSector::One));
      merged.insert(merged.end(), one.begin(), one.end());
      std::sort(merged.begin(), merged.end());
      const auto full = hamiltonian_eigenvalues(sp, lambda);
      double err = 0;
      for (std::size_t i = 0; i < full.size(); ++i) err = std::max(err, std::abs(full[i] - merged[i]));
      rep.expect(err <= 1e-10, fmt("block merge %s lambda=%d: %.3g", std::string(to_string(sp.kind)).c_str(), lambda,
                                   err));
    }

  // HO pairing over the whole spectrum
  for (int lambda = 2; lambda <= 1024; lambda *= 2) {
    const auto ev = hamiltonian_eigenvalues(Superpotential::harmonic(), lambda);
    std::string odd;
    for (std::size_t i = 0; i < ev.size();) {
      std::size_t j = i;
      while (j < ev.size() && std::abs(ev[j] - ev[i]) <= 1e-9) ++j;
      if (ev[i] > 1e-9 && (j - i) % 2) odd += fmt(" %.6g(x%zu)", ev[i], j - i);
      i = j;
    }
    rep.expect(odd.empty(), fmt("HO pairing lambda=%d odd multiplicity:%s", lambda, odd.c_str()));
  }

  // Variational bound on every reported energy
  for (const auto& sp : kAll)
    for (int lambda : {2, 4, 8}) {
      const std::string name(to_string(sp.kind));
      const double e0 = ground_energy(sp, lambda);
      const PauliSum ps = hamiltonian_pauli_sum(sp, lambda);
      const auto vqe = run_vqe_batch(ps, real_amplitudes_ansatz(qubits(lambda), 2), OptimizerConfig{}, std::nullopt,
                                     20, 1, e0, g_jobs);
      for (const auto& r : vqe.runs)
        rep.expect(r.energy >= e0 - 1e-9, fmt("bound vqe %s lambda=%d: %.12g < %.12g", name.c_str(), lambda, r.energy, e0));
      const auto avqe = run_avqe(sp, lambda, AVQEConfig{}, 1);
      rep.expect(avqe.energy >= e0 - 1e-9, fmt("bound avqe %s lambda=%d: %.12g", name.c_str(), lambda, avqe.energy));
      for (const auto& st : avqe.steps)
        rep.expect(st.energy >= e0 - 1e-9, fmt("bound avqe step %s lambda=%d: %.12g", name.c_str(), lambda, st.energy));
      const auto vqd = run_vqd(ps, real_amplitudes_ansatz(qubits(lambda), 1), VQDConfig{}, 1);
      for (double e : vqd.energies)
        rep.expect(e >= e0 - 1e-9, fmt("bound vqd %s lambda=%d: %.12g", name.c_str(), lambda, e));
    }

  // Byte-identical reruns through the command line
  const fs::path root = fs::temp_directory_path() / fmt("sqm_acceptance_%d", static_cast<int>(::getpid()));
  const std::vector<std::vector<std::string>> commands = {
      {"spectrum", "--sp", "dw", "--lambda", "2..64"},
      {"pauli-count", "--lambda", "2..32"},
      {"vqe", "--sp", "aho", "--lambda", "4,8", "--runs", "5", "--seed", "3", "--shots", "200"},
      {"avqe", "--sp", "dw", "--lambda", "4", "--runs", "3", "--seed", "3"},
      {"vqd", "--sp", "dw", "--lambda", "4", "--runs", "4", "--seed", "3", "--shots", "300"},
      {"beta-sweep", "--sp", "ho", "--lambda", "4", "--runs", "3", "--betas", "0.5,5"},
      {"param-sweep", "--sp", "dw", "--lambda", "8", "--grid", "0.2,0.4"},
  };
  for (const auto& cmd : commands) {
    std::map<std::string, std::string> first;
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path dir = root / fmt("%s_%d", cmd[0].c_str(), pass);
      auto args = cmd;
      args.insert(args.end(), {"--output", dir.string(), "--jobs", pass ? std::to_string(std::max(2, g_jobs)) : "1"});
      const int code = run_cli(args);
      rep.expect(code == 0, fmt("rerun %s exit code %d", cmd[0].c_str(), code));
      if (code != 0) break;
      const auto tree = read_tree(dir);
      if (pass == 0) {
        first = tree;
        rep.expect(!tree.empty(), fmt("rerun %s wrote nothing", cmd[0].c_str()));
      } else {
        rep.expect(tree == first, fmt("rerun %s output differs", cmd[0].c_str()));
      }
    }
  }
  fs::remove_all(root);
}

struct Criterion {
  int id;
  const char* title;
  void (*fn)(Report&);
};

const Criterion kCriteria[] = {
    {1, "Pauli term counts", pauli_counts},
    {2, "exact spectra and R", spectra},
    {3, "energy gaps", gaps},
    {4, "AVQE reference energies", adaptive_energies},
    {5, "AVQE gate prefixes", gate_prefixes},
    {6, "truncated-ansatz VQE", truncated_vqe},
    {7, "VQD ratio R", vqd_ratios},
    {8, "shot-mode properties", shot_properties},
    {9, "property suites", properties},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqm acceptance suite"};
  std::vector<int> selected;
  g_jobs = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  app.add_option("-c,--criterion", selected, "criteria to run (default all)")->check(CLI::Range(1, 9));
  app.add_option("-j,--jobs", g_jobs, "worker threads for batched runs")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  bool all_ok = true;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Report rep;
    std::string verdict;
    try {
      c.fn(rep);
      verdict = rep.ok() ? "PASS" : "FAIL";
    } catch (const std::exception& e) {
      std::cout << "  error: " << e.what() << '\n';
      verdict = "FAIL";
      rep.expect(false, "exception");
    }
    std::cout << "criterion " << c.id << ": " << verdict << " - " << c.title << " (" << rep.checks() - rep.failures()
              << "/" << rep.checks() << " checks)" << std::endl;
    all_ok = all_ok && rep.ok();
  }
  return all_ok ? 0 : 1;
}
