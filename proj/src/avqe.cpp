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
#include "sqm/avqe.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sqm/parallel.hpp"

namespace sqm {

OperatorPool OperatorPool::standard(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("pool needs at least one qubit");
  OperatorPool pool;
  for (int q = n_qubits - 1; q >= 0; --q) pool.candidates.push_back(Gate::ry(q, 0));
  for (int q = n_qubits - 1; q >= 0; --q) pool.candidates.push_back(Gate::rz(q, 0));
  for (int c = 0; c < n_qubits; ++c)
    for (int t = 0; t < n_qubits; ++t)
      if (c != t) pool.candidates.push_back(Gate::cry(c, t, 0));
  return pool;
}

std::vector<double> pool_gradients(const EnergyEstimator& energy, const Circuit& circuit,
                                   const Eigen::VectorXd& params, const OperatorPool& pool) {
  const Statevector psi = run_circuit(circuit, params);
  const double pi = std::numbers::pi;
  const double c_plus = (std::numbers::sqrt2 + 1) / (4 * std::numbers::sqrt2);
  const double c_minus = (std::numbers::sqrt2 - 1) / (4 * std::numbers::sqrt2);
  auto shifted = [&](const Gate& g, double angle) {
    Statevector s = psi;
    apply_gate(s, g, angle);
    return energy.exact(s);
  };
  std::vector<double> out;
  out.reserve(pool.size());
  for (const Gate& g : pool.candidates) {
    if (g.kind == GateKind::CRY)
      out.push_back(std::abs(c_plus * (shifted(g, pi / 2) - shifted(g, -pi / 2)) -
                             c_minus * (shifted(g, 3 * pi / 2) - shifted(g, -3 * pi / 2))));
    else
      out.push_back(std::abs(0.5 * (shifted(g, pi / 2) - shifted(g, -pi / 2))));
  }
  return out;
}

std::uint64_t default_initial_state(const Superpotential& sp, int lambda) {
  detail::check_truncation(lambda);
  const std::uint64_t fermion_up = static_cast<std::uint64_t>(lambda);
  if (sp.kind != SuperpotentialKind::DW) return fermion_up;
  return lambda == 4 ? fermion_up : 0;
}

AVQEResult run_avqe(const Superpotential& sp, int lambda, const AVQEConfig& config, std::uint64_t seed) {
  if (config.max_gates < 1) throw std::invalid_argument("max_gates must be >= 1");
  const PauliSum ps = hamiltonian_pauli_sum(sp, lambda);
  const EnergyEstimator energy(ps);
  const int n = ps.n_qubits();
  const OperatorPool pool = OperatorPool::standard(n);

  AVQEResult res;
  res.seed = seed;
  res.ansatz.name = AnsatzName::Full;
  res.ansatz.circuit.n_qubits = n;
  res.ansatz.circuit.initial_state = config.initial_state.value_or(default_initial_state(sp, lambda));
  res.ansatz.circuit.validate();
  res.params = Eigen::VectorXd(0);
  res.initial_energy = energy.exact(Statevector(n, res.ansatz.circuit.initial_state));
  res.energy = res.initial_energy;

  for (int step = 1; step <= config.max_gates; ++step) {
    const std::vector<double> grads = pool_gradients(energy, res.ansatz.circuit, res.params, pool);
    double top = 0.0;
    for (double g : grads) top = std::max(top, g);
    if (top < config.gradient_floor && step > 1) break;
    std::size_t pick = 0;
    while (grads[pick] < top - config.tie_tolerance) ++pick;

    Gate gate = pool.candidates[pick];
    gate.param = res.ansatz.circuit.n_params;
    Circuit trial = res.ansatz.circuit;
    trial.gates.push_back(gate);
    ++trial.n_params;
    Eigen::VectorXd start(trial.n_params);
    start << res.params, 0.0;

    Ansatz trial_ansatz{AnsatzName::Full, trial};
    const VQERunRecord rec = run_vqe(energy, trial_ansatz, config.optimizer, std::nullopt,
                                     derive_seed(seed, static_cast<std::uint64_t>(step)), start);
    res.evaluations += rec.evaluations;

    AVQEStepLog log;
    log.step = step;
    log.gate = gate;
    log.gradient = grads[pick];
    log.energy = rec.energy;
    log.cumulative_evaluations = res.evaluations;
    const bool stalled = std::abs(res.energy - rec.energy) < config.energy_threshold;
    const bool first = res.ansatz.circuit.gates.empty();
    if (stalled && !first) {
      log.accepted = false;
      res.steps.push_back(log);
      break;
    }
    res.steps.push_back(log);
    res.ansatz.circuit = trial;
    res.params = rec.params;
    res.energy = rec.energy;
    if (stalled) break;
  }
  return res;
}

std::vector<AVQEResult> run_avqe_batch(const Superpotential& sp, int lambda, const AVQEConfig& config, int n_runs,
                                       std::uint64_t master_seed, int jobs) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  std::vector<AVQEResult> out(static_cast<std::size_t>(n_runs));
  parallel_for(out.size(), jobs,
               [&](std::size_t i) { out[i] = run_avqe(sp, lambda, config, derive_seed(master_seed, i)); });
  return out;
}

std::size_t best_run(const std::vector<AVQEResult>& runs) {
  if (runs.empty()) throw std::invalid_argument("no AVQE runs");
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].energy < runs[best].energy) best = i;
  return best;
}

Ansatz truncate_ansatz(const Ansatz& full, int k) {
  if (k < 1) throw std::invalid_argument("truncation length must be >= 1");
  std::vector<Gate> gates(full.circuit.gates.begin(),
                          full.circuit.gates.begin() + std::min<std::ptrdiff_t>(k, std::ssize(full.circuit.gates)));
  return make_ansatz(AnsatzName::Truncated, full.circuit.n_qubits, full.circuit.initial_state, gates);
}

void write_ansatz(std::ostream& os, const Ansatz& ansatz) {
  os << "initial " << ansatz.circuit.initial_label() << '\n';
  for (const auto& g : ansatz.circuit.gates) {
    os << to_string(g.kind) << ' ' << g.target;
    if (g.control) os << ',' << *g.control;
    os << '\n';
  }
}

std::string ansatz_to_text(const Ansatz& ansatz) {
  std::ostringstream os;
  write_ansatz(os, ansatz);
  return os.str();
}

Ansatz read_ansatz(std::istream& is, AnsatzName name) {
  std::string line;
  std::optional<std::string> initial;
  std::vector<Gate> gates;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("ansatz line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word, arg, extra;
    if (!(ls >> word)) continue;
    if (!(ls >> arg)) fail("missing argument");
    if (ls >> extra) fail("trailing text");
    if (word == "initial") {
      if (initial) fail("duplicate initial line");
      initial = arg;
      continue;
    }
    int target = -1;
    std::optional<int> control;
    try {
      const auto comma = arg.find(',');
      std::size_t used = 0;
      target = std::stoi(arg.substr(0, comma), &used);
      if (used != (comma == std::string::npos ? arg.size() : comma)) fail("bad qubit list '" + arg + "'");
      if (comma != std::string::npos) {
        const std::string rest = arg.substr(comma + 1);
        control = std::stoi(rest, &used);
        if (used != rest.size()) fail("bad qubit list '" + arg + "'");
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const std::invalid_argument*>(&e) && std::string(e.what()).rfind("ansatz line", 0) == 0) throw;
      fail("bad qubit list '" + arg + "'");
    }
    if (word == "RY" && !control) gates.push_back(Gate::ry(target, 0));
    else if (word == "RZ" && !control) gates.push_back(Gate::rz(target, 0));
    else if (word == "CRY" && control) gates.push_back(Gate::cry(*control, target, 0));
    else if (word == "X" && !control) gates.push_back(Gate::x(target));
    else if (word == "H" && !control) gates.push_back(Gate::h(target));
    else if (word == "CNOT" && control) gates.push_back(Gate::cnot(*control, target));
    else fail("unknown gate '" + word + "' or wrong qubit count");
  }
  if (!initial) throw std::invalid_argument("ansatz text has no initial line");
  return make_ansatz(name, static_cast<int>(initial->size()), parse_basis_label(*initial), gates);
}

Ansatz ansatz_from_text(const std::string& text, AnsatzName name) {
  std::istringstream is(text);
  return read_ansatz(is, name);
}

}  // namespace sqm
