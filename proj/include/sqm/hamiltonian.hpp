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
 * Truncated single-site supersymmetric quantum mechanics in the Fock basis.
 *
 * All builders are templated on the real scalar type so that the same code
 * path can be evaluated in `double` for production and in `long double` as a
 * higher-precision reference. Polynomials of the position operator are
 * formed from the already truncated matrix (truncate, then compose).
 *
 * Tensor layout: the fermion is the most significant factor, so a basis
 * index is `f * lambda + b` with `f` the fermion occupation and `b` the
 * boson Fock level.
 */
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace sqm {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

enum class SuperpotentialKind { HO, AHO, DW };

/// W(q) = m q^2/2 (HO), + g q^4/4 (AHO), or + g (q^3/3 + mu^2 q) (DW).
struct Superpotential {
  SuperpotentialKind kind = SuperpotentialKind::HO;
  double m = 1.0;
  double g = 1.0;
  double mu = 1.0;

  static Superpotential harmonic(double m = 1.0) {
    return {SuperpotentialKind::HO, m, 1.0, 1.0};
  }
  static Superpotential anharmonic(double m = 1.0, double g = 1.0) {
    return {SuperpotentialKind::AHO, m, g, 1.0};
  }
  static Superpotential double_well(double m = 1.0, double g = 1.0,
                                    double mu = 1.0) {
    return {SuperpotentialKind::DW, m, g, mu};
  }

  /// Degree of W'(q) as a polynomial.
  int derivative_degree() const {
    switch (kind) {
      case SuperpotentialKind::HO: return 1;
      case SuperpotentialKind::AHO: return 3;
      case SuperpotentialKind::DW: return 2;
    }
    return 1;
  }
};

enum class FermionSector { Zero, One };

inline std::string_view to_string(SuperpotentialKind kind) {
  switch (kind) {
    case SuperpotentialKind::HO: return "ho";
    case SuperpotentialKind::AHO: return "aho";
    case SuperpotentialKind::DW: return "dw";
  }
  return "?";
}

/// Accepts "ho"/"aho"/"dw" in any case.
SuperpotentialKind parse_superpotential_kind(std::string_view name);

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

/// Number of qubits encoding the boson for a truncation `lambda`.
inline int boson_qubits(int lambda) {
  int b = 0;
  while ((1 << b) < lambda) ++b;
  return b;
}

namespace detail {

inline void check_truncation(int lambda) {
  if (lambda < 2 || !is_power_of_two(lambda))
    throw std::invalid_argument("truncation lambda must be a power of two >= 2, got " +
                                std::to_string(lambda));
}

inline void check_mass(double m) {
  if (!(m > 0.0))
    throw std::invalid_argument("mass m must be positive, got " + std::to_string(m));
}

// Real anti-symmetric ladder combination A with p = i sqrt(m/2) A.
template <typename Scalar>
Mat<Scalar> momentum_generator(int lambda) {
  Mat<Scalar> a = Mat<Scalar>::Zero(lambda, lambda);
  for (int k = 1; k < lambda; ++k) {
    const Scalar s = std::sqrt(static_cast<Scalar>(k));
    a(k - 1, k) = -s;
    a(k, k - 1) = s;
  }
  return a;
}

template <typename Scalar>
Mat<Scalar> symmetrized(const Mat<Scalar>& m) {
  return (m + m.transpose()) / Scalar(2);
}

}  // namespace detail

template <typename Scalar = double>
Mat<Scalar> position_matrix(int lambda, double m) {
  detail::check_truncation(lambda);
  detail::check_mass(m);
  Mat<Scalar> q = Mat<Scalar>::Zero(lambda, lambda);
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(2) * static_cast<Scalar>(m));
  for (int k = 1; k < lambda; ++k) {
    const Scalar s = std::sqrt(static_cast<Scalar>(k)) * scale;
    q(k - 1, k) = s;
    q(k, k - 1) = s;
  }
  return q;
}

template <typename Scalar = double>
CMat<Scalar> momentum_matrix(int lambda, double m) {
  detail::check_truncation(lambda);
  detail::check_mass(m);
  const Scalar scale = std::sqrt(static_cast<Scalar>(m) / Scalar(2));
  const Mat<Scalar> a = detail::momentum_generator<Scalar>(lambda);
  return (std::complex<Scalar>(0, 1) * scale) * a.template cast<std::complex<Scalar>>();
}

/// p^2 as a real matrix, i.e. -(m/2) A^2 with p = i sqrt(m/2) A.
template <typename Scalar = double>
Mat<Scalar> momentum_squared_matrix(int lambda, double m) {
  detail::check_truncation(lambda);
  detail::check_mass(m);
  const Mat<Scalar> a = detail::momentum_generator<Scalar>(lambda);
  return detail::symmetrized<Scalar>(-(static_cast<Scalar>(m) / Scalar(2)) * (a * a));
}

/// W'(q) evaluated on the truncated position matrix.
template <typename Scalar = double>
Mat<Scalar> superpotential_first_derivative(const Superpotential& sp, const Mat<Scalar>& q) {
  const Scalar m = static_cast<Scalar>(sp.m);
  const Scalar g = static_cast<Scalar>(sp.g);
  const Scalar mu = static_cast<Scalar>(sp.mu);
  const auto id = Mat<Scalar>::Identity(q.rows(), q.cols());
  switch (sp.kind) {
    case SuperpotentialKind::HO:
      return m * q;
    case SuperpotentialKind::AHO: {
      const Mat<Scalar> q2 = q * q;
      return detail::symmetrized<Scalar>(m * q + g * (q2 * q));
    }
    case SuperpotentialKind::DW:
      return detail::symmetrized<Scalar>(m * q + g * (q * q + mu * mu * id));
  }
  throw std::logic_error("unknown superpotential");
}

/// W''(q) evaluated on the truncated position matrix.
template <typename Scalar = double>
Mat<Scalar> superpotential_second_derivative(const Superpotential& sp, const Mat<Scalar>& q) {
  const Scalar m = static_cast<Scalar>(sp.m);
  const Scalar g = static_cast<Scalar>(sp.g);
  const auto id = Mat<Scalar>::Identity(q.rows(), q.cols());
  switch (sp.kind) {
    case SuperpotentialKind::HO:
      return m * id;
    case SuperpotentialKind::AHO:
      return detail::symmetrized<Scalar>(m * id + Scalar(3) * g * (q * q));
    case SuperpotentialKind::DW:
      return m * id + Scalar(2) * g * q;
  }
  throw std::logic_error("unknown superpotential");
}

/// 1/2 (p^2 + W'^2 +- W''); `+` for FermionSector::Zero.
template <typename Scalar = double>
Mat<Scalar> block_matrix(const Superpotential& sp, int lambda, FermionSector sector) {
  detail::check_mass(sp.m);
  const Mat<Scalar> q = position_matrix<Scalar>(lambda, sp.m);
  const Mat<Scalar> w1 = superpotential_first_derivative<Scalar>(sp, q);
  const Mat<Scalar> w2 = superpotential_second_derivative<Scalar>(sp, q);
  const Mat<Scalar> kinetic_potential = momentum_squared_matrix<Scalar>(lambda, sp.m) + w1 * w1;
  const Scalar sign = sector == FermionSector::Zero ? Scalar(1) : Scalar(-1);
  return detail::symmetrized<Scalar>(Scalar(0.5) * (kinetic_potential + sign * w2));
}

/// Full 2 lambda x 2 lambda Hamiltonian, block diagonal in the fermion number.
template <typename Scalar = double>
Mat<Scalar> hamiltonian_matrix(const Superpotential& sp, int lambda) {
  const Mat<Scalar> upper = block_matrix<Scalar>(sp, lambda, FermionSector::Zero);
  const Mat<Scalar> lower = block_matrix<Scalar>(sp, lambda, FermionSector::One);
  Mat<Scalar> h = Mat<Scalar>::Zero(2 * lambda, 2 * lambda);
  h.topLeftCorner(lambda, lambda) = upper;
  h.bottomRightCorner(lambda, lambda) = lower;
  return h;
}

/// Q = b (i p + W'(q)) with b = |0><1| on the fermion.
template <typename Scalar = double>
CMat<Scalar> supercharge_matrix(const Superpotential& sp, int lambda) {
  using C = std::complex<Scalar>;
  const Mat<Scalar> q = position_matrix<Scalar>(lambda, sp.m);
  const CMat<Scalar> boson = C(0, 1) * momentum_matrix<Scalar>(lambda, sp.m) +
                             superpotential_first_derivative<Scalar>(sp, q).template cast<C>();
  CMat<Scalar> out = CMat<Scalar>::Zero(2 * lambda, 2 * lambda);
  out.topRightCorner(lambda, lambda) = boson;
  return out;
}

}  // namespace sqm
