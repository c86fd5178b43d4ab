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
#include "sqm/exactdiag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqm {

namespace {

template <typename M>
void check_hermitian(const M& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix is not square");
  if (m.size() == 0) throw std::invalid_argument("eigenvalues: empty matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("eigenvalues: matrix is not Hermitian");
}

std::vector<double> take(const Eigen::VectorXd& ev, std::optional<int> k) {
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  if (k) {
    if (*k < 1) throw std::invalid_argument("eigenvalues: k must be positive");
    if (static_cast<std::size_t>(*k) < out.size()) out.resize(static_cast<std::size_t>(*k));
  }
  return out;
}

}  // namespace

std::string_view to_string(SusyPhase phase) {
  switch (phase) {
    case SusyPhase::Preserved: return "preserved";
    case SusyPhase::Broken: return "broken";
    case SusyPhase::Ambiguous: return "ambiguous";
  }
  return "?";
}

std::vector<double> eigenvalues(const Eigen::MatrixXd& matrix, std::optional<int> k) {
  check_hermitian(matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver did not converge");
  return take(es.eigenvalues(), k);
}

std::vector<double> eigenvalues(const Eigen::MatrixXcd& matrix, std::optional<int> k) {
  check_hermitian(matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver did not converge");
  return take(es.eigenvalues(), k);
}

std::vector<double> hamiltonian_eigenvalues(const Superpotential& sp, int lambda, std::optional<int> k) {
  std::vector<double> all = eigenvalues(block_matrix<double>(sp, lambda, FermionSector::Zero));
  const std::vector<double> lower = eigenvalues(block_matrix<double>(sp, lambda, FermionSector::One));
  all.insert(all.end(), lower.begin(), lower.end());
  std::sort(all.begin(), all.end());
  if (k && static_cast<std::size_t>(*k) < all.size()) all.resize(static_cast<std::size_t>(std::max(*k, 1)));
  return all;
}

std::optional<double> ratio_r(double e0, double e1, double e2) {
  if (!(e2 > e0)) return std::nullopt;
  return (e2 - e1) / (e2 - e0);
}

SusyPhase classify_susy(std::optional<double> r) {
  if (!r || !std::isfinite(*r)) return SusyPhase::Ambiguous;
  if (*r <= 0.2) return SusyPhase::Preserved;
  if (*r >= 0.8) return SusyPhase::Broken;
  return SusyPhase::Ambiguous;
}

SpectrumReport spectrum_report(const Superpotential& sp, int lambda, int levels, int max_lambda) {
  if (levels < 3) throw std::invalid_argument("spectrum report needs at least 3 levels");
  if (lambda > max_lambda)
    throw std::invalid_argument("lambda " + std::to_string(lambda) + " exceeds the cap " + std::to_string(max_lambda));
  SpectrumReport r;
  r.lambda = lambda;
  r.superpotential = sp;
  r.energies = hamiltonian_eigenvalues(sp, lambda, levels);
  r.gap01 = r.energies[1] - r.energies[0];
  r.gap12 = r.energies[2] - r.energies[1];
  r.ratio = ratio_r(r.energies[0], r.energies[1], r.energies[2]);
  r.classification = classify_susy(r.ratio);
  return r;
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::M: return "m";
    case SweepParameter::G: return "g";
    case SweepParameter::Mu: return "mu";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "m") return SweepParameter::M;
  if (name == "g") return SweepParameter::G;
  if (name == "mu") return SweepParameter::Mu;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "' (expected m, g or mu)");
}

std::vector<SpectrumReport> parameter_sweep(const Superpotential& base, int lambda, SweepParameter parameter,
                                            const std::vector<double>& grid, int levels, int max_lambda) {
  if (grid.empty()) throw std::invalid_argument("parameter grid is empty");
  std::vector<SpectrumReport> out;
  out.reserve(grid.size());
  for (double v : grid) {
    Superpotential sp = base;
    switch (parameter) {
      case SweepParameter::M: sp.m = v; break;
      case SweepParameter::G: sp.g = v; break;
      case SweepParameter::Mu: sp.mu = v; break;
    }
    out.push_back(spectrum_report(sp, lambda, levels, max_lambda));
  }
  return out;
}

}  // namespace sqm
