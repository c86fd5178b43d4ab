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
#include "sqm/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sqm/simulator.hpp"

namespace sqm {

namespace {

using Cd = std::complex<double>;

int qubit_count_for(Eigen::Index dim) {
  if (dim < 1 || !is_power_of_two(dim))
    throw std::invalid_argument("matrix dimension must be a power of two, got " + std::to_string(dim));
  return std::countr_zero(static_cast<unsigned long long>(dim));
}

void check_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > tol * scale)
    throw std::invalid_argument("matrix is not Hermitian (max |M - M^H| = " + std::to_string(defect) + ")");
}

// Recurse on the leading qubit. Every coefficient below a block is bounded by
// the block's largest entry, so blocks at or below tol are skipped outright.
void decompose_rec(const Eigen::MatrixXcd& m, std::string& prefix, double tol,
                   std::vector<PauliString>& out) {
  if (m.rows() == 1) {
    const double c = m(0, 0).real();
    if (std::abs(c) > tol) out.push_back({prefix, c});
    return;
  }
  if (m.cwiseAbs().maxCoeff() <= tol) return;
  const Eigen::Index h = m.rows() / 2;
  const auto a = m.topLeftCorner(h, h);
  const auto b = m.topRightCorner(h, h);
  const auto c = m.bottomLeftCorner(h, h);
  const auto d = m.bottomRightCorner(h, h);
  const Eigen::MatrixXcd parts[4] = {
      (a + d) * 0.5,
      (b + c) * 0.5,
      (b - c) * Cd(0, 0.5),
      (a - d) * 0.5,
  };
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  for (int k = 0; k < 4; ++k) {
    prefix.push_back(kLetters[k]);
    decompose_rec(parts[k], prefix, tol, out);
    prefix.pop_back();
  }
}

}  // namespace

std::uint64_t PauliString::x_mask() const {
  std::uint64_t mask = 0;
  const std::size_t n = label.size();
  for (std::size_t i = 0; i < n; ++i)
    if (label[i] == 'X' || label[i] == 'Y') mask |= std::uint64_t{1} << (n - 1 - i);
  return mask;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t mask = 0;
  const std::size_t n = label.size();
  for (std::size_t i = 0; i < n; ++i)
    if (label[i] == 'Z' || label[i] == 'Y') mask |= std::uint64_t{1} << (n - 1 - i);
  return mask;
}

int PauliString::y_count() const { return static_cast<int>(std::count(label.begin(), label.end(), 'Y')); }

bool operator==(const PauliString& a, const PauliString& b) {
  return a.label == b.label && a.coefficient == b.coefficient;
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliString> terms) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("qubit count out of range");
  std::set<std::string> seen;
  for (auto& t : terms) {
    if (static_cast<int>(t.label.size()) != n_qubits)
      throw std::invalid_argument("label '" + t.label + "' does not have " + std::to_string(n_qubits) + " qubits");
    if (t.label.find_first_not_of("IXYZ") != std::string::npos)
      throw std::invalid_argument("label '" + t.label + "' has letters outside IXYZ");
    if (!std::isfinite(t.coefficient)) throw std::invalid_argument("non-finite coefficient for " + t.label);
    if (!seen.insert(t.label).second) throw std::invalid_argument("duplicate label " + t.label);
    if (t.coefficient != 0.0) terms_.push_back(std::move(t));
  }
}

double PauliSum::identity_coefficient() const {
  double c = 0.0;
  for (const auto& t : terms_)
    if (t.is_identity()) c += t.coefficient;
  return c;
}

PauliSum decompose(const Eigen::MatrixXcd& matrix, double tol) {
  const int n = qubit_count_for(matrix.rows());
  check_hermitian(matrix, tol);
  std::vector<PauliString> terms;
  std::string prefix;
  decompose_rec(matrix, prefix, tol, terms);
  return PauliSum(n, std::move(terms));
}

PauliSum decompose(const Eigen::MatrixXd& matrix, double tol) {
  return decompose(Eigen::MatrixXcd(matrix.cast<Cd>()), tol);
}

Eigen::MatrixXcd reconstruct(const PauliSum& ps) {
  const Eigen::Index dim = Eigen::Index{1} << ps.n_qubits();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : ps) {
    const std::uint64_t x = t.x_mask();
    const std::uint64_t z = t.z_mask();
    Cd phase(1, 0);
    for (int k = 0; k < t.y_count() % 4; ++k) phase *= Cd(0, 1);
    for (Eigen::Index col = 0; col < dim; ++col) {
      const auto b = static_cast<std::uint64_t>(col);
      const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(b ^ x), col) += t.coefficient * sign * phase;
    }
  }
  return out;
}

PauliSum hamiltonian_pauli_sum(const Superpotential& sp, int lambda, double tol) {
  return decompose(hamiltonian_matrix<double>(sp, lambda), tol);
}

int count_terms(const Superpotential& sp, int lambda, std::optional<FermionSector> block, double tol) {
  if (!block) return static_cast<int>(hamiltonian_pauli_sum(sp, lambda, tol).size());
  return static_cast<int>(decompose(block_matrix<double>(sp, lambda, *block), tol).size());
}

FermionSector ground_state_sector(const Superpotential& sp, int lambda) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> zero(block_matrix<double>(sp, lambda, FermionSector::Zero),
                                                       Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> one(block_matrix<double>(sp, lambda, FermionSector::One),
                                                      Eigen::EigenvaluesOnly);
  return zero.eigenvalues()(0) < one.eigenvalues()(0) ? FermionSector::Zero : FermionSector::One;
}

std::complex<double> pauli_expectation(const PauliString& term, const Eigen::VectorXcd& psi) {
  const std::uint64_t x = term.x_mask();
  const std::uint64_t z = term.z_mask();
  const auto dim = static_cast<std::uint64_t>(psi.size());
  Cd acc(0, 0);
  for (std::uint64_t b = 0; b < dim; ++b) {
    const Cd v = std::conj(psi[static_cast<Eigen::Index>(b ^ x)]) * psi[static_cast<Eigen::Index>(b)];
    acc += (std::popcount(b & z) & 1) ? -v : v;
  }
  switch (term.y_count() % 4) {
    case 1: return acc * Cd(0, 1);
    case 2: return -acc;
    case 3: return acc * Cd(0, -1);
    default: return acc;
  }
}

double expectation_exact(const PauliSum& ps, const Eigen::VectorXcd& amplitudes) {
  if (amplitudes.size() != (Eigen::Index{1} << ps.n_qubits()))
    throw std::invalid_argument("state dimension does not match the Pauli sum");
  double e = 0.0;
  for (const auto& t : ps) e += t.coefficient * pauli_expectation(t, amplitudes).real();
  return e;
}

double expectation_exact(const PauliSum& ps, const Statevector& state) {
  return expectation_exact(ps, state.amplitudes());
}

void write_pauli_sum(std::ostream& os, const PauliSum& ps) {
  char buf[64];
  for (const auto& t : ps) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coefficient);
    os << t.label << ' ' << buf << '\n';
  }
}

std::string to_text(const PauliSum& ps) {
  std::ostringstream os;
  write_pauli_sum(os, ps);
  return os.str();
}

PauliSum read_pauli_sum(std::istream& is) {
  std::vector<PauliString> terms;
  std::string line;
  int n = 0;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    PauliString t;
    if (!(ls >> t.label >> t.coefficient))
      throw std::invalid_argument("malformed Pauli term on line " + std::to_string(lineno));
    std::string extra;
    if (ls >> extra) throw std::invalid_argument("trailing text on line " + std::to_string(lineno));
    if (n == 0) n = static_cast<int>(t.label.size());
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw std::invalid_argument("no Pauli terms in input");
  return PauliSum(n, std::move(terms));
}

PauliSum pauli_sum_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_pauli_sum(is);
}

}  // namespace sqm
