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
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sqm/hamiltonian.hpp"
#include "sqm/simulator.hpp"
#include "sqm/vqe.hpp"

using namespace sqm;

namespace {

constexpr double kPi = std::numbers::pi;

Statevector random_state(int n, std::uint64_t seed) {
  RngStream rng(seed);
  Eigen::VectorXcd v(1 << n);
  for (auto& a : v) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  v.normalize();
  return Statevector(n, v);
}

Eigen::MatrixXcd gate_oracle(const Gate& g, int n, double angle) {
  switch (g.kind) {
    case GateKind::RY: return oracle::embed(oracle::ry(angle), g.target, n);
    case GateKind::RZ: return oracle::embed(oracle::rz(angle), g.target, n);
    case GateKind::X: return oracle::embed(oracle::pauli('X'), g.target, n);
    case GateKind::H: return oracle::embed(oracle::hadamard(), g.target, n);
    case GateKind::CRY: return oracle::controlled(oracle::ry(angle), *g.control, g.target, n);
    case GateKind::CNOT: return oracle::controlled(oracle::pauli('X'), *g.control, g.target, n);
  }
  return {};
}

}  // namespace

TEST(Gates, MatchKroneckerOracle) {
  const int n = 3;
  const Gate gates[] = {Gate::ry(0, 0), Gate::ry(2, 0),    Gate::rz(1, 0),    Gate::x(2),
                        Gate::h(0),     Gate::cry(0, 2, 0), Gate::cry(2, 1, 0), Gate::cnot(1, 0)};
  for (const Gate& g : gates) {
    const Statevector in = random_state(n, 11);
    Statevector out = in;
    apply_gate(out, g, 0.731);
    const Eigen::VectorXcd ref = gate_oracle(g, n, 0.731) * in.amplitudes();
    EXPECT_LT((out.amplitudes() - ref).norm(), 1e-13) << g.str();
  }
}

TEST(Gates, NormPreservedAndInvertible) {
  const Gate gates[] = {Gate::ry(1, 0), Gate::rz(0, 0), Gate::cry(1, 3, 0), Gate::h(2), Gate::cnot(3, 0)};
  for (const Gate& g : gates) {
    const Statevector in = random_state(4, 5);
    Statevector s = in;
    apply_gate(s, g, 1.9);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    if (g.is_parameterized()) {
      apply_gate(s, g, -1.9);
    } else {
      apply_gate(s, g);
    }
    EXPECT_LT((s.amplitudes() - in.amplitudes()).norm(), 1e-12) << g.str();
  }
}

TEST(Gates, Validation) {
  EXPECT_THROW(Gate::cry(1, 1, 0).validate(2), std::invalid_argument);
  EXPECT_THROW(Gate::ry(3, 0).validate(2), std::invalid_argument);
  Gate bad = Gate::x(0);
  bad.param = 0;
  EXPECT_THROW(bad.validate(1), std::invalid_argument);
  EXPECT_EQ(Gate::cry(1, 2, 0).str(), "CRY[q1,q2]");
}

TEST(Circuit, RotationBasics) {
  Circuit c;
  c.n_qubits = 1;
  c.gates = {Gate::ry(0, 0)};
  c.n_params = 1;
  EXPECT_NEAR(std::abs(run_circuit(c, Eigen::VectorXd::Zero(1))[0]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(run_circuit(c, Eigen::VectorXd::Constant(1, kPi))[1]), 1.0, 1e-15);
}

TEST(Circuit, FermionRotationReachesHarmonicGround) {
  for (int lambda : {4, 16}) {
    const Ansatz a = truncated_ansatz(Superpotential::harmonic(), boson_qubits(lambda) + 1);
    const PauliSum ps = hamiltonian_pauli_sum(Superpotential::harmonic(), lambda);
    EXPECT_NEAR(expectation_exact(ps, run_circuit(a.circuit, Eigen::VectorXd::Zero(1))), 0.0, 1e-12);
  }
}

TEST(Circuit, ShiftedRunTouchesOneGate) {
  Circuit c;
  c.n_qubits = 2;
  c.gates = {Gate::ry(0, 0), Gate::ry(1, 0)};
  c.n_params = 1;
  const std::vector<double> p{0.3};
  Statevector ref(2, 0);
  apply_gate(ref, c.gates[0], 0.3);
  apply_gate(ref, c.gates[1], 0.3 + 0.5);
  EXPECT_LT((run_circuit_shifted(c, p, 1, 0.5).amplitudes() - ref.amplitudes()).norm(), 1e-14);
}

TEST(Sampling, BasisStateAndUniform) {
  RngStream rng(3);
  for (auto s : sample_bitstrings(Statevector(2, 0b01), 100, rng)) EXPECT_EQ(s, 0b01u);
  Statevector plus(1, 0);
  apply_gate(plus, Gate::h(0));
  const int shots = 100000;
  const auto samples = sample_bitstrings(plus, shots, rng);
  double ones = 0;
  for (auto s : samples) ones += static_cast<double>(s);
  const double sigma = std::sqrt(0.25 * shots);
  EXPECT_LT(std::abs(ones - 0.5 * shots), 5 * sigma);
}

TEST(Sampling, SeedDeterminism) {
  const Statevector s = random_state(3, 9);
  RngStream a(42), b(42);
  EXPECT_EQ(sample_bitstrings(s, 500, a), sample_bitstrings(s, 500, b));
}

TEST(Energy, IdentityOnlyHasNoVariance) {
  EnergyEstimator e(PauliSum(2, {{"II", -1.25}}));
  RngStream rng(1);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(e.shots(random_state(2, i), 10, rng), -1.25);
}

TEST(Energy, ShotEstimatorUnbiased) {
  const Superpotential sps[] = {Superpotential::harmonic(), Superpotential::anharmonic(),
                                Superpotential::double_well()};
  for (const auto& sp : sps)
    for (int lambda : {2, 4, 8}) {
      const EnergyEstimator e(hamiltonian_pauli_sum(sp, lambda));
      const Statevector psi = random_state(e.n_qubits(), 100 + lambda);
      RngStream rng(derive_seed(7, lambda));
      std::vector<double> est;
      for (int r = 0; r < 200; ++r) est.push_back(e.shots(psi, 1000, rng));
      EXPECT_LT(std::abs(oracle::mean(est) - e.exact(psi)), 5 * oracle::sem(est)) << to_string(sp.kind) << lambda;
    }
}

TEST(Energy, TermMeasurementUsesBasisChange) {
  // <+|X|+> = 1 and <+i|Y|+i> = 1 exactly, so every shot agrees.
  Statevector plus(1, 0);
  apply_gate(plus, Gate::h(0));
  RngStream rng(2);
  EXPECT_EQ(measure_pauli_term(plus, {"X", 1.0}, 50, rng), 1.0);
  Statevector plus_i = plus;
  apply_gate(plus_i, Gate::rz(0, 0), kPi / 2);
  EXPECT_EQ(measure_pauli_term(plus_i, {"Y", 1.0}, 50, rng), 1.0);
}

TEST(Energy, ExactMatchesOracle) {
  const Eigen::MatrixXd h = oracle::sqm_hamiltonian(2, 8);
  const EnergyEstimator e(hamiltonian_pauli_sum(Superpotential::double_well(), 8));
  const Statevector psi = random_state(4, 21);
  const double ref = (psi.amplitudes().adjoint() * h.cast<std::complex<double>>() * psi.amplitudes())(0).real();
  EXPECT_NEAR(e.exact(psi), ref, 1e-12);
}

TEST(Gradient, ShiftRulesMatchFiniteDifference) {
  const PauliSum ps = hamiltonian_pauli_sum(Superpotential::anharmonic(), 8);
  const EnergyEstimator e(ps);
  Circuit c;
  c.n_qubits = 4;
  c.initial_state = 0b1000;
  c.gates = {Gate::ry(2, 0), Gate::rz(1, 1), Gate::ry(1, 2), Gate::cry(1, 2, 3), Gate::cry(3, 0, 4), Gate::h(1),
             Gate::ry(0, 5)};
  c.n_params = 6;
  RngStream rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd p(6);
    for (auto& x : p) x = rng.uniform(0, 2 * kPi);
    const Eigen::VectorXd g = parameter_shift_gradient(e, c, std::span<const double>(p.data(), 6));
    auto f = [&](const Eigen::VectorXd& x) { return e.exact(run_circuit(c, x)); };
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(g[i], oracle::central_difference(f, p, i), 1e-6) << i;
  }
}

TEST(Labels, RoundTrip) {
  EXPECT_EQ(basis_label(0b1000, 4), "1000");
  EXPECT_EQ(parse_basis_label("0110"), 0b0110u);
  const Statevector s = Statevector::from_label("10");
  EXPECT_NEAR(std::abs(s[2]), 1.0, 1e-15);
}

TEST(Rng, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  RngStream a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, BinomialMoments) {
  RngStream rng(8);
  std::vector<double> v;
  for (int i = 0; i < 4000; ++i) v.push_back(static_cast<double>(rng.binomial(1000, 0.3)));
  EXPECT_LT(std::abs(oracle::mean(v) - 300.0), 5 * std::sqrt(210.0 / 4000));
  EXPECT_NEAR(oracle::sample_std(v), std::sqrt(210.0), 1.0);
  EXPECT_EQ(rng.binomial(50, 0.0), 0);
  EXPECT_EQ(rng.binomial(50, 1.0), 50);
}
