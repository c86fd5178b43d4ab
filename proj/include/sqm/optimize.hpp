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
 * Bounded minimizers behind one objective interface.
 *
 * Two local trust-region methods: a linear-interpolation one in the spirit
 * of COBYLA and a quadratic-model one in the spirit of COBYQA/NEWUOA (the
 * default). Neither is a transcription of the original codes and results
 * will differ in detail.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace sqm {

/// Counts every call. A non-finite value throws std::runtime_error with the
/// offending point so that a bad run aborts instead of steering the search.
class Objective {
 public:
  using Function = std::function<double(const Eigen::VectorXd&)>;

  Objective(int dimension, Function f);

  int dimension() const { return dim_; }
  long long evaluations() const { return count_; }
  double operator()(const Eigen::VectorXd& x);

 private:
  int dim_;
  Function f_;
  long long count_ = 0;
};

enum class OptimizerKind { LocalTrustRegion, DifferentialEvolution, QuasiNewtonFD, QuadraticTrustRegion };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::QuadraticTrustRegion;
  int max_iterations = 10000;
  double tolerance = 1e-8;
  double lower = -2 * std::numbers::pi;
  double upper = 2 * std::numbers::pi;
  /// Per-dimension bounds; override `lower`/`upper` when non-empty.
  Eigen::VectorXd lower_bounds;
  Eigen::VectorXd upper_bounds;
  int population_factor = 5;
  /// Starting trust radius of the local method.
  double initial_radius = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  Eigen::VectorXd lower_vector(int dim) const;
  Eigen::VectorXd upper_vector(int dim) const;
};

struct OptimizationResult {
  Eigen::VectorXd best_params;
  double best_value = 0.0;
  int iterations = 0;
  long long evaluations = 0;
  bool converged = false;
};

/// Linear model over dim+1 interpolation points with a shrinking radius.
/// Converged once the radius drops below the tolerance.
OptimizationResult minimize_local(Objective& obj, const Eigen::VectorXd& x0, const OptimizerConfig& config);

/// rand/1/bin differential evolution, F = 0.8, CR = 0.9; one iteration is
/// one generation. Converged when the population value spread drops below
/// the tolerance.
/// Derivative-free trust region on a quadratic model through 2n+1 points,
/// updated with least Frobenius change of its Hessian.
OptimizationResult minimize_quadratic(Objective& obj, const Eigen::VectorXd& x0, const OptimizerConfig& config);
OptimizationResult minimize_de(Objective& obj, const OptimizerConfig& config);

/// BFGS with forward-difference gradients and a projected Armijo search.
/// Intended for exact objectives; shot noise swamps the difference quotients.
OptimizationResult minimize_quasi_newton_fd(Objective& obj, const Eigen::VectorXd& x0,
                                            const OptimizerConfig& config);

/// Dispatches on config.kind (x0 is ignored by differential evolution).
OptimizationResult minimize(Objective& obj, const Eigen::VectorXd& x0, const OptimizerConfig& config);

}  // namespace sqm
