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

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqm/exactdiag.hpp"
#include "sqm/hamiltonian.hpp"
#include "sqm/optimize.hpp"
#include "sqm/vqe.hpp"

namespace sqm::cli {

/// Bad flags, config file contents or values; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Spectrum, PauliCount, VQE, AVQE, VQD, BetaSweep, ParamSweep };

std::string_view to_string(Command c);

struct ExperimentConfig {
  Command command = Command::Spectrum;
  Superpotential superpotential;
  std::vector<int> lambdas;
  int levels = 3;
  bool block = false;
  AnsatzName ansatz = AnsatzName::RealAmplitudes;
  std::string ansatz_file;
  int reps = 1;
  OptimizerConfig optimizer;
  ShotCount shots;
  int n_runs = 100;
  std::uint64_t master_seed = 0;
  double beta = 5.0;
  std::vector<double> betas{0.5, 1, 2, 3, 4, 5, 10, 20};
  SweepParameter parameter = SweepParameter::G;
  std::vector<double> grid;
  double energy_threshold = 1e-6;
  int max_gates = 30;
  int max_lambda = kDefaultMaxLambda;
  /// Not part of the resolved config: neither changes any result.
  std::string output_dir;
  int jobs = 1;

  /// Throws ConfigError.
  void validate() const;
  /// Canonical JSON of every setting that can change an output byte.
  std::string resolved_json() const;
};

/// Comma-separated items, each a power of two or an `a..b` range over the
/// powers of two in between.
std::vector<int> parse_lambda_list(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

/// Overrides fields from a JSON object; unknown keys are an error.
void apply_config_json(ExperimentConfig& cfg, const std::string& json_text);

/// Runs one configured experiment and writes its files.
void execute(const ExperimentConfig& cfg, std::ostream& out);

/// Entry point: 0 ok, 2 config error, 1 runtime failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sqm::cli
