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

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqm/hamiltonian.hpp"

namespace sqm {

enum class SusyPhase { Preserved, Broken, Ambiguous };

std::string_view to_string(SusyPhase phase);

inline constexpr int kDefaultMaxLambda = 1024;

/// Ascending eigenvalues of a real symmetric or complex Hermitian matrix
/// (all of them, or the lowest k). Rejects input that is not Hermitian to
/// 1e-10 relative to its largest entry.
std::vector<double> eigenvalues(const Eigen::MatrixXd& matrix, std::optional<int> k = std::nullopt);
std::vector<double> eigenvalues(const Eigen::MatrixXcd& matrix, std::optional<int> k = std::nullopt);

/// Lowest k levels of H(sp, lambda), solved block by block and merged.
std::vector<double> hamiltonian_eigenvalues(const Superpotential& sp, int lambda,
                                            std::optional<int> k = std::nullopt);

/// (E2 - E1) / (E2 - E0); empty when E2 <= E0.
std::optional<double> ratio_r(double e0, double e1, double e2);

/// R <= 0.2 preserved, R >= 0.8 broken, otherwise (or undefined) ambiguous.
SusyPhase classify_susy(std::optional<double> r);

struct SpectrumReport {
  int lambda = 0;
  Superpotential superpotential;
  std::vector<double> energies;
  double gap01 = 0.0;
  double gap12 = 0.0;
  std::optional<double> ratio;
  SusyPhase classification = SusyPhase::Ambiguous;
};

SpectrumReport spectrum_report(const Superpotential& sp, int lambda, int levels = 3,
                               int max_lambda = kDefaultMaxLambda);

enum class SweepParameter { M, G, Mu };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

/// One report per grid value, with `parameter` of `base` replaced.
std::vector<SpectrumReport> parameter_sweep(const Superpotential& base, int lambda, SweepParameter parameter,
                                            const std::vector<double>& grid, int levels = 3,
                                            int max_lambda = kDefaultMaxLambda);

}  // namespace sqm
