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

/**
 * @file
 * Statevector simulation of the small gate set used by the variational
 * drivers. Qubit k is bit k of the basis index; basis labels are written
 * q_{n-1} ... q_0, so the fermion of an SQM register is the leftmost bit.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqm/pauli.hpp"
#include "sqm/rng.hpp"

namespace sqm {

class Statevector {
 public:
  Statevector() = default;
  /// Computational basis state |index>.
  Statevector(int n_qubits, std::uint64_t index);
  Statevector(int n_qubits, Eigen::VectorXcd amplitudes);

  static Statevector from_label(std::string_view bits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  std::complex<double> operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double norm() const { return amps_.norm(); }
  Eigen::VectorXd probabilities() const { return amps_.cwiseAbs2(); }

 private:
  int n_qubits_ = 0;
  Eigen::VectorXcd amps_;
};

/// |<a|b>|^2.
double overlap_squared(const Statevector& a, const Statevector& b);

/// Tensor product with `high` on the most significant qubits.
Statevector tensor(const Statevector& high, const Statevector& low);

enum class GateKind { RY, RZ, CRY, X, H, CNOT };

std::string_view to_string(GateKind kind);

struct Gate {
  GateKind kind = GateKind::X;
  int target = 0;
  std::optional<int> control;
  std::optional<int> param;

  static Gate ry(int target, int slot) { return {GateKind::RY, target, std::nullopt, slot}; }
  static Gate rz(int target, int slot) { return {GateKind::RZ, target, std::nullopt, slot}; }
  static Gate cry(int control, int target, int slot) { return {GateKind::CRY, target, control, slot}; }
  static Gate x(int target) { return {GateKind::X, target, std::nullopt, std::nullopt}; }
  static Gate h(int target) { return {GateKind::H, target, std::nullopt, std::nullopt}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, std::nullopt}; }

  bool is_parameterized() const { return kind == GateKind::RY || kind == GateKind::RZ || kind == GateKind::CRY; }
  /// Throws std::invalid_argument when the kind/control/param combination is malformed.
  void validate(int n_qubits) const;
  /// Table notation, e.g. `RY[q2]` or `CRY[q1,q2]` (control first).
  std::string str() const;
};

bool operator==(const Gate& a, const Gate& b);

/// Same gate type and qubits, ignoring the parameter slot.
bool same_operation(const Gate& a, const Gate& b);

struct Circuit {
  int n_qubits = 0;
  std::uint64_t initial_state = 0;
  std::vector<Gate> gates;
  int n_params = 0;

  void validate() const;
  std::string initial_label() const;
  int rotation_count() const;
};

std::string basis_label(std::uint64_t index, int n_qubits);
std::uint64_t parse_basis_label(std::string_view bits);

/// Applies one gate in place. `angle` is ignored for fixed gates.
void apply_gate(Statevector& state, const Gate& gate, double angle = 0.0);

Statevector run_circuit(const Circuit& circuit, std::span<const double> params);
Statevector run_circuit(const Circuit& circuit, const Eigen::VectorXd& params);

/// Runs the circuit with `shift` added to the angle of gate number `gate_index` only.
Statevector run_circuit_shifted(const Circuit& circuit, std::span<const double> params,
                                std::size_t gate_index, double shift);

/// i.i.d. samples of basis indices from |amplitude|^2.
std::vector<std::uint64_t> sample_bitstrings(const Statevector& state, int shots, RngStream& rng);

/// Energy functional bound to a Pauli sum. Exact values use a dense matrix
/// assembled once; shot estimates measure every non-identity term on its
/// own basis-rotated circuit with `shots` samples each.
class EnergyEstimator {
 public:
  explicit EnergyEstimator(PauliSum ps);

  const PauliSum& pauli_sum() const { return ps_; }
  int n_qubits() const { return ps_.n_qubits(); }
  /// Number of circuits measured per shot-mode estimate.
  std::size_t measured_terms() const;

  double exact(const Statevector& state) const;
  double shots(const Statevector& state, int shots, RngStream& rng) const;
  double estimate(const Statevector& state, std::optional<int> shots, RngStream& rng) const;

 private:
  PauliSum ps_;
  Eigen::MatrixXd real_part_;
  Eigen::MatrixXd imag_part_;
  bool has_imag_ = false;
};

/// Mean of +-1 parities for one term, measured through an explicit basis
/// change (H for X, S^dagger then H for Y) followed by bitstring sampling.
double measure_pauli_term(const Statevector& state, const PauliString& term, int shots, RngStream& rng);

double estimate_energy(const PauliSum& ps, const Circuit& circuit, std::span<const double> params,
                       std::optional<int> shots, RngStream& rng);

/// Gradient of <H> with respect to every parameter slot using shift rules:
/// two-term for RY/RZ, four-term for CRY.
Eigen::VectorXd parameter_shift_gradient(const EnergyEstimator& energy, const Circuit& circuit,
                                         std::span<const double> params);

}  // namespace sqm
