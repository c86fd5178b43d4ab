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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqm/hamiltonian.hpp"

namespace sqm {

class Statevector;

/// One weighted Pauli string. Labels are written most significant qubit
/// first, so `label[0]` acts on qubit n-1 (the fermion for SQM operators).
struct PauliString {
  std::string label;
  double coefficient = 0.0;

  bool is_identity() const { return label.find_first_not_of('I') == std::string::npos; }
  /// Bit k set when qubit k carries X or Y.
  std::uint64_t x_mask() const;
  /// Bit k set when qubit k carries Z or Y.
  std::uint64_t z_mask() const;
  int y_count() const;
};

bool operator==(const PauliString& a, const PauliString& b);

/// Real-weighted sum of distinct Pauli strings on a fixed number of qubits.
class PauliSum {
 public:
  PauliSum() = default;
  /// Validates labels (alphabet, length, distinctness) and drops zero terms.
  PauliSum(int n_qubits, std::vector<PauliString> terms);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<PauliString>& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  /// Sum of coefficients of the all-identity string.
  double identity_coefficient() const;

 private:
  int n_qubits_ = 0;
  std::vector<PauliString> terms_;
};

inline constexpr double kDefaultPauliTolerance = 1e-12;
/// Resource counts ignore strings with |c| <= 1e-5. Beyond lambda = 16 the
/// truncated polynomials produce genuine coefficients of order 1e-6 to 1e-10
/// that the reference resource counts leave out; 1e-5 reproduces them.
inline constexpr double kCountTolerance = 1e-5;

/// Tensorized recursive decomposition. Terms with |c| <= tol are dropped and
/// the remainder is returned in lexicographic order with I < X < Y < Z.
/// Hermiticity is checked to `tol` relative to the largest entry.
PauliSum decompose(const Eigen::MatrixXcd& matrix, double tol = kDefaultPauliTolerance);
PauliSum decompose(const Eigen::MatrixXd& matrix, double tol = kDefaultPauliTolerance);

Eigen::MatrixXcd reconstruct(const PauliSum& ps);

/// Number of Pauli terms of the full Hamiltonian, or of one fermion block
/// when `block` is set. The identity string counts when nonzero.
int count_terms(const Superpotential& sp, int lambda,
                std::optional<FermionSector> block = std::nullopt,
                double tol = kCountTolerance);

/// Sector holding the lowest eigenvalue (ties resolve to FermionSector::One).
FermionSector ground_state_sector(const Superpotential& sp, int lambda);

PauliSum hamiltonian_pauli_sum(const Superpotential& sp, int lambda,
                               double tol = kDefaultPauliTolerance);

/// <psi|P|psi> for a single string.
std::complex<double> pauli_expectation(const PauliString& term, const Eigen::VectorXcd& amplitudes);

/// Term-by-term <psi|H|psi>.
double expectation_exact(const PauliSum& ps, const Statevector& state);
double expectation_exact(const PauliSum& ps, const Eigen::VectorXcd& amplitudes);

/// Text form: one `LABEL coefficient` line per term.
void write_pauli_sum(std::ostream& os, const PauliSum& ps);
std::string to_text(const PauliSum& ps);
PauliSum read_pauli_sum(std::istream& is);
PauliSum pauli_sum_from_text(const std::string& text);

}  // namespace sqm
