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
// Independent reference implementations used only by the tests. None of
// these call into the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

// Cyclic Jacobi rotations on a dense real symmetric matrix. Slow, simple.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-14, int max_sweeps = 100) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) < tol * std::max(1.0, a.norm())) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::Matrix2cd pauli(char c) {
  Eigen::Matrix2cd m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

// Leftmost character acts on the most significant qubit.
inline Eigen::MatrixXcd pauli_string_matrix(const std::string& label) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : label) m = kron(m, pauli(c));
  return m;
}

inline std::vector<std::string> all_labels(int n) {
  std::vector<std::string> out{""};
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> next;
    for (const auto& s : out)
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

struct Term {
  std::string label;
  double coefficient;
};

// c_P = Tr(P M) / 2^n for every string, keeping |c| > tol.
inline std::vector<Term> trace_decompose(const Eigen::MatrixXcd& m, double tol = 1e-12) {
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(m.rows()))));
  std::vector<Term> out;
  for (const auto& label : all_labels(n)) {
    const cd c = (pauli_string_matrix(label) * m).trace() / static_cast<double>(m.rows());
    if (std::abs(c) > tol) out.push_back({label, c.real()});
  }
  return out;
}

// Single-qubit gate u on qubit `target` of an n-qubit register (qubit k is
// bit k of the basis index).
inline Eigen::MatrixXcd embed(const Eigen::Matrix2cd& u, int target, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) m = kron(m, q == target ? Eigen::MatrixXcd(u) : Eigen::MatrixXcd::Identity(2, 2));
  return m;
}

inline Eigen::MatrixXcd controlled(const Eigen::Matrix2cd& u, int control, int target, int n) {
  Eigen::Matrix2cd p0, p1;
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(1, 1), b = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    a = kron(a, q == control ? Eigen::MatrixXcd(p0) : id);
    b = kron(b, q == control ? Eigen::MatrixXcd(p1) : q == target ? Eigen::MatrixXcd(u) : id);
  }
  return a + b;
}

inline Eigen::Matrix2cd ry(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

inline Eigen::Matrix2cd rz(double t) {
  Eigen::Matrix2cd m;
  m << std::polar(1.0, -t / 2), 0, 0, std::polar(1.0, t / 2);
  return m;
}

inline Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

// Fock-basis SQM Hamiltonian from explicit ladder-operator loops, fermion on
// the most significant index. kind: 0 HO, 1 AHO, 2 DW.
inline Eigen::MatrixXd sqm_hamiltonian(int kind, int lambda, double m = 1, double g = 1, double mu = 1) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(lambda, lambda);
  for (int k = 1; k < lambda; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXd ad = a.transpose();
  const Eigen::MatrixXd q = (a + ad) / std::sqrt(2 * m);
  // p = i sqrt(m/2) (a^dag - a), so p^2 = -(m/2)(a^dag - a)^2.
  const Eigen::MatrixXd p2 = -(m / 2) * (ad - a) * (ad - a);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(lambda, lambda);
  Eigen::MatrixXd w1, w2;
  if (kind == 0) {
    w1 = m * q;
    w2 = m * id;
  } else if (kind == 1) {
    w1 = m * q + g * q * q * q;
    w2 = m * id + 3 * g * q * q;
  } else {
    w1 = m * q + g * (q * q + mu * mu * id);
    w2 = m * id + 2 * g * q;
  }
  const Eigen::MatrixXd base = p2 + w1 * w1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * lambda, 2 * lambda);
  h.topLeftCorner(lambda, lambda) = 0.5 * (base + w2);
  h.bottomRightCorner(lambda, lambda) = 0.5 * (base - w2);
  return 0.5 * (h + h.transpose());
}

inline double central_difference(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x, int i,
                                 double h = 1e-5) {
  x[i] += h;
  const double up = f(x);
  x[i] -= 2 * h;
  return (up - f(x)) / (2 * h);
}

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double sem(const std::vector<double>& v) { return sample_std(v) / std::sqrt(static_cast<double>(v.size())); }

}  // namespace oracle
