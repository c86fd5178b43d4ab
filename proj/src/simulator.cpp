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
#include "sqm/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqm {

namespace {

using Cd = std::complex<double>;

struct Mat2 {
  Cd a, b, c, d;  // [[a, b], [c, d]]
};

Mat2 gate_matrix(GateKind kind, double theta) {
  const double ch = std::cos(theta / 2);
  const double sh = std::sin(theta / 2);
  switch (kind) {
    case GateKind::RY:
    case GateKind::CRY:
      return {ch, -sh, sh, ch};
    case GateKind::RZ:
      return {Cd(ch, -sh), 0.0, 0.0, Cd(ch, sh)};
    case GateKind::X:
    case GateKind::CNOT:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::H: {
      const double r = std::numbers::sqrt2 / 2;
      return {r, r, r, -r};
    }
  }
  throw std::logic_error("unknown gate");
}

void apply_1q(Eigen::VectorXcd& v, int target, std::optional<int> control, const Mat2& u) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  const std::uint64_t cbit = control ? std::uint64_t{1} << *control : 0;
  const auto dim = static_cast<std::uint64_t>(v.size());
  Cd* p = v.data();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & tbit) continue;
    if ((i & cbit) != cbit) continue;
    const std::uint64_t j = i | tbit;
    const Cd x0 = p[i];
    const Cd x1 = p[j];
    p[i] = u.a * x0 + u.b * x1;
    p[j] = u.c * x0 + u.d * x1;
  }
}

int checked_width(std::size_t dim) {
  if (dim == 0 || !is_power_of_two(static_cast<long long>(dim)))
    throw std::invalid_argument("statevector dimension must be a power of two");
  return std::countr_zero(static_cast<unsigned long long>(dim));
}

void check_params(const Circuit& c, std::span<const double> params) {
  if (static_cast<int>(params.size()) != c.n_params)
    throw std::invalid_argument("expected " + std::to_string(c.n_params) + " parameters, got " +
                                std::to_string(params.size()));
}

}  // namespace

Statevector::Statevector(int n_qubits, std::uint64_t index) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("qubit count out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (index >= static_cast<std::uint64_t>(dim)) throw std::invalid_argument("basis index out of range");
  amps_ = Eigen::VectorXcd::Zero(dim);
  amps_[static_cast<Eigen::Index>(index)] = 1.0;
}

Statevector::Statevector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (checked_width(static_cast<std::size_t>(amps_.size())) != n_qubits)
    throw std::invalid_argument("amplitude count does not match qubit count");
  if (std::abs(amps_.norm() - 1.0) > 1e-10) throw std::invalid_argument("statevector is not normalized");
}

Statevector Statevector::from_label(std::string_view bits) {
  return Statevector(static_cast<int>(bits.size()), parse_basis_label(bits));
}

double overlap_squared(const Statevector& a, const Statevector& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("overlap of states with different widths");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

Statevector tensor(const Statevector& high, const Statevector& low) {
  const Eigen::Index dl = low.amplitudes().size();
  const Eigen::Index dh = high.amplitudes().size();
  Eigen::VectorXcd out(dl * dh);
  for (Eigen::Index h = 0; h < dh; ++h) out.segment(h * dl, dl) = high.amplitudes()[h] * low.amplitudes();
  return Statevector(high.n_qubits() + low.n_qubits(), std::move(out));
}

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CRY: return "CRY";
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

void Gate::validate(int n_qubits) const {
  const bool controlled = kind == GateKind::CRY || kind == GateKind::CNOT;
  if (target < 0 || target >= n_qubits) throw std::invalid_argument("gate target out of range");
  if (controlled != control.has_value()) throw std::invalid_argument(std::string(to_string(kind)) + ": bad control");
  if (control && (*control < 0 || *control >= n_qubits || *control == target))
    throw std::invalid_argument("gate control out of range or equal to target");
  if (is_parameterized() != param.has_value())
    throw std::invalid_argument(std::string(to_string(kind)) + ": bad parameter slot");
  if (param && *param < 0) throw std::invalid_argument("negative parameter slot");
}

std::string Gate::str() const {
  std::string s(to_string(kind));
  s += "[q";
  if (control) s += std::to_string(*control) + ",q";
  s += std::to_string(target) + "]";
  return s;
}

bool operator==(const Gate& a, const Gate& b) {
  return a.kind == b.kind && a.target == b.target && a.control == b.control && a.param == b.param;
}

bool same_operation(const Gate& a, const Gate& b) {
  return a.kind == b.kind && a.target == b.target && a.control == b.control;
}

void Circuit::validate() const {
  if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("circuit qubit count out of range");
  if (initial_state >> n_qubits) throw std::invalid_argument("initial state out of range");
  for (const auto& g : gates) {
    g.validate(n_qubits);
    if (g.param && *g.param >= n_params) throw std::invalid_argument("parameter slot out of range");
  }
}

std::string Circuit::initial_label() const { return basis_label(initial_state, n_qubits); }

int Circuit::rotation_count() const {
  return static_cast<int>(std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.is_parameterized(); }));
}

std::string basis_label(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int k = 0; k < n_qubits; ++k)
    if ((index >> k) & 1) s[static_cast<std::size_t>(n_qubits - 1 - k)] = '1';
  return s;
}

std::uint64_t parse_basis_label(std::string_view bits) {
  if (bits.empty() || bits.size() > 30 || bits.find_first_not_of("01") != std::string_view::npos)
    throw std::invalid_argument("basis label must be a non-empty string of 0/1");
  std::uint64_t v = 0;
  for (char ch : bits) v = (v << 1) | static_cast<std::uint64_t>(ch == '1');
  return v;
}

void apply_gate(Statevector& state, const Gate& gate, double angle) {
  gate.validate(state.n_qubits());
  apply_1q(state.amplitudes(), gate.target, gate.control, gate_matrix(gate.kind, angle));
}

Statevector run_circuit_shifted(const Circuit& circuit, std::span<const double> params, std::size_t gate_index,
                                double shift) {
  circuit.validate();
  check_params(circuit, params);
  Statevector state(circuit.n_qubits, circuit.initial_state);
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const Gate& g = circuit.gates[i];
    double angle = g.param ? params[static_cast<std::size_t>(*g.param)] : 0.0;
    if (i == gate_index) angle += shift;
    apply_1q(state.amplitudes(), g.target, g.control, gate_matrix(g.kind, angle));
  }
  return state;
}

Statevector run_circuit(const Circuit& circuit, std::span<const double> params) {
  return run_circuit_shifted(circuit, params, circuit.gates.size(), 0.0);
}

Statevector run_circuit(const Circuit& circuit, const Eigen::VectorXd& params) {
  return run_circuit(circuit, std::span<const double>(params.data(), static_cast<std::size_t>(params.size())));
}

std::vector<std::uint64_t> sample_bitstrings(const Statevector& state, int shots, RngStream& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  const Eigen::VectorXd probs = state.probabilities();
  std::vector<double> cdf(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) cdf[static_cast<std::size_t>(i)] = (acc += probs[i]);
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(shots));
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // Never report an outcome of zero probability.
    while (it != cdf.begin() && probs[it - cdf.begin()] == 0.0) --it;
    out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
  }
  return out;
}

EnergyEstimator::EnergyEstimator(PauliSum ps) : ps_(std::move(ps)) {
  const Eigen::MatrixXcd h = reconstruct(ps_);
  real_part_ = h.real();
  imag_part_ = h.imag();
  has_imag_ = imag_part_.cwiseAbs().maxCoeff() > 0.0;
}

std::size_t EnergyEstimator::measured_terms() const {
  return static_cast<std::size_t>(std::count_if(ps_.begin(), ps_.end(), [](const PauliString& t) { return !t.is_identity(); }));
}

double EnergyEstimator::exact(const Statevector& state) const {
  if (state.n_qubits() != ps_.n_qubits()) throw std::invalid_argument("state width does not match the Hamiltonian");
  const Eigen::VectorXd a = state.amplitudes().real();
  const Eigen::VectorXd b = state.amplitudes().imag();
  double e = a.dot(real_part_ * a);
  if (b.squaredNorm() > 0.0) {
    e += b.dot(real_part_ * b);
    if (has_imag_) e -= 2.0 * a.dot(imag_part_ * b);
  }
  return e;
}

// Each term's parity mean is the average of `shots` independent +-1 outcomes
// with P(+1) = (1 + <P>)/2, so the count of +1 outcomes is drawn in one
// binomial step. measure_pauli_term runs the literal measurement circuit and
// is used by the tests to confirm both paths agree in distribution.
double EnergyEstimator::shots(const Statevector& state, int shots, RngStream& rng) const {
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  if (state.n_qubits() != ps_.n_qubits()) throw std::invalid_argument("state width does not match the Hamiltonian");
  double e = 0.0;
  for (const auto& t : ps_) {
    if (t.is_identity()) {
      e += t.coefficient;
      continue;
    }
    const double expval = std::clamp(pauli_expectation(t, state.amplitudes()).real(), -1.0, 1.0);
    const long long plus = rng.binomial(shots, 0.5 * (1.0 + expval));
    e += t.coefficient * static_cast<double>(2 * plus - shots) / shots;
  }
  return e;
}

double EnergyEstimator::estimate(const Statevector& state, std::optional<int> shots_opt, RngStream& rng) const {
  return shots_opt ? shots(state, *shots_opt, rng) : exact(state);
}

double measure_pauli_term(const Statevector& state, const PauliString& term, int shots, RngStream& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  const int n = state.n_qubits();
  if (static_cast<int>(term.label.size()) != n) throw std::invalid_argument("term width does not match the state");
  Statevector rotated = state;
  std::uint64_t support = 0;
  for (int k = 0; k < n; ++k) {
    const char p = term.label[static_cast<std::size_t>(n - 1 - k)];
    if (p == 'I') continue;
    support |= std::uint64_t{1} << k;
    if (p == 'Y') apply_1q(rotated.amplitudes(), k, std::nullopt, {1.0, 0.0, 0.0, Cd(0, -1)});  // S^dagger
    if (p == 'X' || p == 'Y') apply_1q(rotated.amplitudes(), k, std::nullopt, gate_matrix(GateKind::H, 0.0));
  }
  long long total = 0;
  for (auto b : sample_bitstrings(rotated, shots, rng)) total += (std::popcount(b & support) & 1) ? -1 : 1;
  return static_cast<double>(total) / shots;
}

double estimate_energy(const PauliSum& ps, const Circuit& circuit, std::span<const double> params,
                       std::optional<int> shots, RngStream& rng) {
  return EnergyEstimator(ps).estimate(run_circuit(circuit, params), shots, rng);
}

Eigen::VectorXd parameter_shift_gradient(const EnergyEstimator& energy, const Circuit& circuit,
                                         std::span<const double> params) {
  check_params(circuit, params);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(circuit.n_params);
  const double pi = std::numbers::pi;
  const double c_plus = (std::numbers::sqrt2 + 1) / (4 * std::numbers::sqrt2);
  const double c_minus = (std::numbers::sqrt2 - 1) / (4 * std::numbers::sqrt2);
  auto e_at = [&](std::size_t gi, double s) { return energy.exact(run_circuit_shifted(circuit, params, gi, s)); };
  for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
    const Gate& g = circuit.gates[gi];
    if (!g.param) continue;
    double d;
    if (g.kind == GateKind::CRY)
      d = c_plus * (e_at(gi, pi / 2) - e_at(gi, -pi / 2)) - c_minus * (e_at(gi, 3 * pi / 2) - e_at(gi, -3 * pi / 2));
    else
      d = 0.5 * (e_at(gi, pi / 2) - e_at(gi, -pi / 2));
    grad[*g.param] += d;
  }
  return grad;
}

}  // namespace sqm
