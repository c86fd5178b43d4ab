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
#include "sqm/cli.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqm/avqe.hpp"
#include "sqm/pauli.hpp"
#include "sqm/vqd.hpp"

namespace sqm::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad ") + what + " '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad ") + what + " '" + s + "'");
  }
}

ShotCount parse_shots(const std::string& s) {
  if (s.empty() || s == "exact") return std::nullopt;
  const int n = parse_int(s, "shot count");
  if (n < 1) throw ConfigError("shots must be positive (omit for exact mode)");
  return n;
}

// Wraps the library's name parsers, which throw std::invalid_argument.
template <class F>
auto as_config(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int qubits_for(int lambda) { return boson_qubits(lambda) + 1; }

std::string sp_name(const ExperimentConfig& cfg) { return std::string(to_string(cfg.superpotential.kind)); }

json gate_json(const Gate& g) {
  json j{{"gate", g.str()}, {"target", g.target}};
  if (g.control) j["control"] = *g.control;
  if (g.param) j["param"] = *g.param;
  return j;
}

json params_json(const Eigen::VectorXd& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json ansatz_json(const Ansatz& a) {
  json gates = json::array();
  for (const auto& g : a.circuit.gates) gates.push_back(gate_json(g));
  return {{"name", to_string(a.name)},
          {"n_qubits", a.n_qubits()},
          {"initial_state", a.circuit.initial_state},
          {"gates", gates},
          {"text", ansatz_to_text(a)}};
}

class Writer {
 public:
  Writer(const ExperimentConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log) {
    dir_ = cfg.output_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.output_dir);
    std::filesystem::create_directories(dir_);
  }

  // Comment header for text outputs.
  std::ofstream open(const std::string& name, char comment = '#') {
    std::ofstream os = open_raw(name);
    os << comment << " sqm " << to_string(cfg_.command) << '\n';
    os << comment << " config: " << cfg_.resolved_json() << '\n';
    os << comment << " seed: " << cfg_.master_seed << '\n';
    return os;
  }

  void write_json(const std::string& name, json body) {
    body["config"] = json::parse(cfg_.resolved_json());
    body["seed"] = cfg_.master_seed;
    std::ofstream os = open_raw(name);
    os << body.dump(1) << '\n';
    finish(os, name);
  }

  void finish(std::ofstream& os, const std::string& name) {
    os.close();
    if (!os) throw std::runtime_error("failed writing " + (dir_ / name).string());
    log_ << "wrote " << (dir_ / name).string() << '\n';
  }

 private:
  std::ofstream open_raw(const std::string& name) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + (dir_ / name).string() + " for writing");
    return os;
  }

  const ExperimentConfig& cfg_;
  std::ostream& log_;
  std::filesystem::path dir_;
};

Ansatz load_ansatz_file(const std::string& pattern, int lambda) {
  std::string path = pattern;
  const std::string key = "{lambda}";
  for (std::size_t pos; (pos = path.find(key)) != std::string::npos;) path.replace(pos, key.size(), std::to_string(lambda));
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read ansatz file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  const std::string head = trim(text);
  try {
    if (!head.empty() && head.front() == '{') {
      // Either an avqe result (ansatz under "best") or a vqe/vqd record.
      const json j = json::parse(text);
      const json& holder = j.contains("best") ? j.at("best") : j;
      return ansatz_from_text(holder.at("ansatz").at("text").get<std::string>());
    }
    return ansatz_from_text(text);
  } catch (const std::exception& e) {
    throw ConfigError("ansatz file '" + path + "': " + e.what());
  }
}

Ansatz build_ansatz(const ExperimentConfig& cfg, int lambda) {
  const int n = qubits_for(lambda);
  Ansatz a;
  switch (cfg.ansatz) {
    case AnsatzName::RealAmplitudes: a = as_config([&] { return real_amplitudes_ansatz(n, cfg.reps); }); break;
    case AnsatzName::Truncated: a = as_config([&] { return truncated_ansatz(cfg.superpotential, n); }); break;
    case AnsatzName::Full: a = load_ansatz_file(cfg.ansatz_file, lambda); break;
  }
  if (a.n_qubits() != n)
    throw ConfigError("ansatz has " + std::to_string(a.n_qubits()) + " qubits but lambda " + std::to_string(lambda) +
                      " needs " + std::to_string(n));
  return a;
}

VQDConfig vqd_config(const ExperimentConfig& cfg) {
  VQDConfig v;
  v.n_levels = cfg.levels;
  v.beta = cfg.beta;
  v.optimizer = cfg.optimizer;
  v.shots = cfg.shots;
  return v;
}

// Levels beyond the Hilbert space of a small cutoff are written as nan.
void write_levels(std::ostream& os, const std::vector<double>& energies, int levels) {
  for (int k = 0; k < levels; ++k) os << ',' << (k < static_cast<int>(energies.size()) ? num(energies[k]) : "nan");
}

// Commands.

void cmd_spectrum(const ExperimentConfig& cfg, Writer& w, std::ostream& out) {
  const std::string name = "spectrum_" + sp_name(cfg) + ".csv";
  std::ofstream os = w.open(name);
  os << "lambda";
  for (int k = 0; k < cfg.levels; ++k) os << ",E" << k;
  os << ",gap01,gap12,R,classification\n";
  for (int lambda : cfg.lambdas) {
    const SpectrumReport r =
        spectrum_report(cfg.superpotential, lambda, std::min(cfg.levels, 2 * lambda), cfg.max_lambda);
    os << lambda;
    write_levels(os, r.energies, cfg.levels);
    os << ',' << num(r.gap01) << ',' << num(r.gap12) << ',' << opt_num(r.ratio) << ',' << to_string(r.classification)
       << '\n';
    out << "lambda " << lambda << ": E0..2 = " << num(r.energies[0]) << ' ' << num(r.energies[1]) << ' '
        << num(r.energies[2]) << "  R = " << opt_num(r.ratio) << " (" << to_string(r.classification) << ")\n";
  }
  w.finish(os, name);
}

void cmd_pauli_count(const ExperimentConfig& cfg, Writer& w, std::ostream& out) {
  const std::string name = cfg.block ? "pauli_count_block.csv" : "pauli_count.csv";
  std::ofstream os = w.open(name);
  os << "lambda,h_size,qubits,ho,dw,aho\n";
  const Superpotential& p = cfg.superpotential;
  const Superpotential sps[] = {Superpotential::harmonic(p.m), Superpotential::double_well(p.m, p.g, p.mu),
                                Superpotential::anharmonic(p.m, p.g)};
  for (int lambda : cfg.lambdas) {
    const int size = cfg.block ? lambda : 2 * lambda;
    const int qubits = cfg.block ? boson_qubits(lambda) : qubits_for(lambda);
    os << lambda << ',' << size << ',' << qubits;
    out << "lambda " << lambda << ':';
    for (const auto& sp : sps) {
      std::optional<FermionSector> sector;
      if (cfg.block) sector = ground_state_sector(sp, lambda);
      const int c = count_terms(sp, lambda, sector);
      os << ',' << c;
      out << ' ' << to_string(sp.kind) << '=' << c;
    }
    os << '\n';
    out << '\n';
  }
  w.finish(os, name);
}

void cmd_vqe(const ExperimentConfig& cfg, Writer& w, std::ostream& out) {
  const std::string tag = sp_name(cfg) + "_" + std::string(to_string(cfg.ansatz)) + "_" +
                          std::string(to_string(cfg.optimizer.kind)) + "_" + mode_label(cfg.shots);
  const std::string summary_name = "vqe_" + tag + "_summary.csv";
  const std::string runs_name = "vqe_" + tag + "_runs.csv";
  std::ofstream summary = w.open(summary_name);
  std::ofstream runs_long = w.open(runs_name);
  summary << "lambda,n_runs,converged,median_energy,min_energy,exact_energy,abs_median_error,total_evaluations\n";
  runs_long << "lambda,run,seed,energy,iterations,evaluations,converged\n";
  for (int lambda : cfg.lambdas) {
    const PauliSum ps = hamiltonian_pauli_sum(cfg.superpotential, lambda);
    const Ansatz ansatz = build_ansatz(cfg, lambda);
    const double exact = hamiltonian_eigenvalues(cfg.superpotential, lambda, 1)[0];
    const VQEBatch batch =
        run_vqe_batch(ps, ansatz, cfg.optimizer, cfg.shots, cfg.n_runs, cfg.master_seed, exact, cfg.jobs);
    const auto& s = batch.summary;

    const std::string stem = "vqe_" + sp_name(cfg) + "_L" + std::to_string(lambda) + "_" +
                             std::string(to_string(cfg.ansatz)) + "_" + std::string(to_string(cfg.optimizer.kind)) +
                             "_" + mode_label(cfg.shots);
    std::ofstream csv = w.open(stem + ".csv");
    write_vqe_csv(csv, batch);
    w.finish(csv, stem + ".csv");

    json records = json::array();
    for (std::size_t i = 0; i < batch.runs.size(); ++i) {
      const auto& r = batch.runs[i];
      records.push_back({{"run", i},
                         {"seed", r.seed},
                         {"energy", r.energy},
                         {"params", params_json(r.params)},
                         {"iterations", r.iterations},
                         {"evaluations", r.evaluations},
                         {"converged", r.converged}});
      runs_long << lambda << ',' << i << ',' << r.seed << ',' << num(r.energy) << ',' << r.iterations << ','
                << r.evaluations << ',' << (r.converged ? 1 : 0) << '\n';
    }
    w.write_json(stem + ".json", {{"lambda", lambda},
                                  {"ansatz", ansatz_json(ansatz)},
                                  {"exact_energy", exact},
                                  {"summary",
                                   {{"n_runs", s.n_runs},
                                    {"converged", s.converged_count},
                                    {"median_energy", opt_json(s.median_energy)},
                                    {"min_energy", s.min_energy},
                                    {"abs_median_error", opt_json(s.abs_median_error)},
                                    {"total_evaluations", s.total_evaluations}}},
                                  {"runs", records}});

    summary << lambda << ',' << s.n_runs << ',' << s.converged_count << ',' << opt_num(s.median_energy) << ','
            << num(s.min_energy) << ',' << num(exact) << ',' << opt_num(s.abs_median_error) << ','
            << s.total_evaluations << '\n';
    out << "lambda " << lambda << ": converged " << s.converged_count << '/' << s.n_runs << ", median "
        << opt_num(s.median_energy) << ", exact " << num(exact) << ", |error| " << opt_num(s.abs_median_error)
        << ", evaluations " << s.total_evaluations << '\n';
  }
  w.finish(summary, summary_name);
  w.finish(runs_long, runs_name);
}

void cmd_avqe(const ExperimentConfig& cfg, Writer& w, std::ostream& out) {
  AVQEConfig acfg;
  acfg.energy_threshold = cfg.energy_threshold;
  acfg.max_gates = cfg.max_gates;
  acfg.optimizer = cfg.optimizer;
  const std::string summary_name = "avqe_" + sp_name(cfg) + "_summary.csv";
  std::ofstream summary = w.open(summary_name);
  summary << "lambda,initial_state,n_gates,best_energy,exact_energy,abs_error,initial_energy,total_evaluations,"
             "gates\n";
  for (int lambda : cfg.lambdas) {
    const auto runs = run_avqe_batch(cfg.superpotential, lambda, acfg, cfg.n_runs, cfg.master_seed, cfg.jobs);
    const std::size_t bi = best_run(runs);
    const AVQEResult& best = runs[bi];
    const double exact = hamiltonian_eigenvalues(cfg.superpotential, lambda, 1)[0];
    const std::string stem = "avqe_" + sp_name(cfg) + "_L" + std::to_string(lambda);

    // Per-step minimum energy over every run that reached that step.
    std::vector<double> step_min;
    long long total_evals = 0;
    for (const auto& r : runs) {
      total_evals += r.evaluations;
      for (std::size_t k = 0; k < r.steps.size(); ++k) {
        if (step_min.size() <= k) step_min.push_back(r.steps[k].energy);
        step_min[k] = std::min(step_min[k], r.steps[k].energy);
      }
    }

    std::ofstream text = w.open(stem + ".ansatz");
    write_ansatz(text, best.ansatz);
    w.finish(text, stem + ".ansatz");

    std::ofstream steps = w.open(stem + "_steps.csv");
    steps << "step,gate,gradient,energy,min_energy_all_runs,accepted,cumulative_evaluations\n";
    json step_log = json::array();
    for (std::size_t k = 0; k < best.steps.size(); ++k) {
      const auto& st = best.steps[k];
      steps << st.step << ',' << st.gate.str() << ',' << num(st.gradient) << ',' << num(st.energy) << ','
            << num(step_min[k]) << ',' << (st.accepted ? 1 : 0) << ',' << st.cumulative_evaluations << '\n';
      step_log.push_back({{"step", st.step},
                          {"gate", st.gate.str()},
                          {"gradient", st.gradient},
                          {"energy", st.energy},
                          {"accepted", st.accepted},
                          {"cumulative_evaluations", st.cumulative_evaluations}});
    }
    w.finish(steps, stem + "_steps.csv");

    json run_list = json::array();
    for (const auto& r : runs)
      run_list.push_back({{"seed", r.seed},
                          {"energy", r.energy},
                          {"n_gates", r.ansatz.circuit.gates.size()},
                          {"evaluations", r.evaluations}});
    w.write_json(stem + ".json", {{"lambda", lambda},
                                  {"exact_energy", exact},
                                  {"best_run", bi},
                                  {"best",
                                   {{"seed", best.seed},
                                    {"energy", best.energy},
                                    {"initial_energy", best.initial_energy},
                                    {"params", params_json(best.params)},
                                    {"ansatz", ansatz_json(best.ansatz)},
                                    {"truncated", ansatz_json(truncate_ansatz(best.ansatz))},
                                    {"steps", step_log}}},
                                  {"step_minima", step_min},
                                  {"runs", run_list}});

    summary << lambda << ',' << best.ansatz.circuit.initial_state << ',' << best.ansatz.circuit.gates.size() << ','
            << num(best.energy) << ',' << num(exact) << ',' << num(std::abs(best.energy - exact)) << ','
            << num(best.initial_energy) << ',' << total_evals << ",\"" << best.ansatz.describe() << "\"\n";
    out << "lambda " << lambda << ": best E " << num(best.energy) << " (exact " << num(exact) << "), "
        << best.ansatz.circuit.gates.size() << " gates: " << best.ansatz.describe() << '\n';
  }
  w.finish(summary, summary_name);
}

void cmd_vqd(const ExperimentConfig& cfg, Writer& w, std::ostream& out) {
  const VQDConfig vcfg = vqd_config(cfg);
  const std::string summary_name = "vqd_" + sp_name(cfg) + "_" + mode_label(cfg.shots) + "_summary.csv";
  std::ofstream summary = w.open(summary_name);
  summary << "superpotential,lambda,converged,n_iters,n_evals";
  for (int k = 0; k < cfg.levels; ++k) summary << ",E" << k;
  summary << ",R";
  for (int k = 0; k < cfg.levels; ++k) summary << ",exact_E" << k;
  summary << ",exact_R\n";
  for (int lambda : cfg.lambdas) {
    const PauliSum ps = hamiltonian_pauli_sum(cfg.superpotential, lambda);
    const Ansatz ansatz = build_ansatz(cfg, lambda);
    const std::vector<double> exact = hamiltonian_eigenvalues(cfg.superpotential, lambda, cfg.levels);
    const VQDBatch batch = run_vqd_batch(ps, ansatz, vcfg, cfg.n_runs, cfg.master_seed, exact, cfg.jobs);
    const auto& s = batch.summary;
    const std::string stem = "vqd_" + sp_name(cfg) + "_L" + std::to_string(lambda) + "_" + mode_label(cfg.shots);

    std::ofstream csv = w.open(stem + ".csv");
    write_vqd_csv(csv, batch);
    w.finish(csv, stem + ".csv");

    json records = json::array();
    for (const auto& r : batch.runs) {
      json levels = json::array();
      for (const auto& l : r.levels)
        levels.push_back({{"energy", l.energy},
                          {"penalized_cost", l.penalized_cost},
                          {"params", params_json(l.params)},
                          {"converged", l.converged},
                          {"iterations", l.iterations},
                          {"evaluations", l.evaluations}});
      records.push_back({{"seed", r.seed},
                         {"energies", r.energies},
                         {"R", opt_json(r.ratio)},
                         {"classification", to_string(r.classification)},
                         {"converged", r.converged()},
                         {"iterations", r.iterations},
                         {"evaluations", r.evaluations},
                         {"clamped_overlaps", r.clamped_overlaps},
                         {"levels", levels}});
    }
    w.write_json(stem + ".json", {{"lambda", lambda},
                                  {"ansatz", ansatz_json(ansatz)},
                                  {"exact_energies", exact},
                                  {"summary",
                                   {{"n_runs", s.n_runs},
                                    {"converged", s.converged_count},
                                    {"mean_iterations", s.mean_iterations},
                                    {"mean_evaluations", s.mean_evaluations},
                                    {"median_energies", s.median_energies},
                                    {"median_R", opt_json(s.median_ratio)},
                                    {"exact_R", opt_json(s.exact_ratio)}}},
                                  {"runs", records}});

    summary << sp_name(cfg) << ',' << lambda << ',' << s.converged_count << '/' << s.n_runs << ','
            << num(s.mean_iterations) << ',' << num(s.mean_evaluations);
    for (int k = 0; k < cfg.levels; ++k)
      summary << ',' << (k < static_cast<int>(s.median_energies.size()) ? num(s.median_energies[k]) : "nan");
    summary << ',' << opt_num(s.median_ratio);
    for (double e : exact) summary << ',' << num(e);
    summary << ',' << opt_num(s.exact_ratio) << '\n';
    out << "lambda " << lambda << ": converged " << s.converged_count << '/' << s.n_runs << ", median R "
        << opt_num(s.median_ratio) << " (exact " << opt_num(s.exact_ratio) << ")\n";
  }
  w.finish(summary, summary_name);
}

void cmd_beta_sweep(const ExperimentConfig& cfg, Writer& w, std::ostream& out) {
  const VQDConfig base = vqd_config(cfg);
  for (int lambda : cfg.lambdas) {
    const auto rows =
        beta_sweep(cfg.superpotential, lambda, cfg.betas, cfg.n_runs, base, cfg.master_seed, cfg.reps, cfg.jobs);
    const std::string name = "beta_sweep_" + sp_name(cfg) + "_L" + std::to_string(lambda) + ".csv";
    std::ofstream os = w.open(name);
    write_beta_sweep_csv(os, rows);
    w.finish(os, name);
    for (const auto& r : rows)
      out << "lambda " << lambda << " beta " << num(r.beta) << ": converged " << r.converged_count << '/'
          << cfg.n_runs << ", median R " << opt_num(r.median_ratio) << '\n';
  }
}

void cmd_param_sweep(const ExperimentConfig& cfg, Writer& w, std::ostream& out) {
  for (int lambda : cfg.lambdas) {
    const auto reports = parameter_sweep(cfg.superpotential, lambda, cfg.parameter, cfg.grid,
                                         std::min(cfg.levels, 2 * lambda), cfg.max_lambda);
    const std::string name = "param_sweep_" + sp_name(cfg) + "_L" + std::to_string(lambda) + "_" +
                             std::string(to_string(cfg.parameter)) + ".csv";
    std::ofstream os = w.open(name);
    os << to_string(cfg.parameter);
    for (int k = 0; k < cfg.levels; ++k) os << ",E" << k;
    os << ",gap01,gap12,R,classification\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      os << num(cfg.grid[i]);
      write_levels(os, r.energies, cfg.levels);
      os << ',' << num(r.gap01) << ',' << num(r.gap12) << ',' << opt_num(r.ratio) << ','
         << to_string(r.classification) << '\n';
      out << "lambda " << lambda << ' ' << to_string(cfg.parameter) << '=' << num(cfg.grid[i]) << ": R "
          << opt_num(r.ratio) << " (" << to_string(r.classification) << ")\n";
    }
    w.finish(os, name);
  }
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::Spectrum, Command::PauliCount, Command::VQE, Command::AVQE, Command::VQD,
                    Command::BetaSweep, Command::ParamSweep})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::vector<int> lambdas_from_json(const json& j) {
  if (j.is_string()) return parse_lambda_list(j.get<std::string>());
  if (j.is_number_integer()) return parse_lambda_list(std::to_string(j.get<long long>()));
  if (j.is_array()) {
    std::string joined;
    for (const auto& v : j) {
      if (!joined.empty()) joined += ',';
      if (v.is_string()) joined += v.get<std::string>();
      else if (v.is_number_integer()) joined += std::to_string(v.get<long long>());
      else throw ConfigError("lambda entries must be integers or range strings");
    }
    return parse_lambda_list(joined);
  }
  throw ConfigError("lambda must be an integer, a range string or an array");
}

std::vector<double> reals_from_json(const json& j, const char* key) {
  if (j.is_string()) return parse_real_list(j.get<std::string>());
  if (!j.is_array()) throw ConfigError(std::string(key) + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(std::string(key) + " must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::PauliCount: return "pauli-count";
    case Command::VQE: return "vqe";
    case Command::AVQE: return "avqe";
    case Command::VQD: return "vqd";
    case Command::BetaSweep: return "beta-sweep";
    case Command::ParamSweep: return "param-sweep";
  }
  return "?";
}

std::vector<int> parse_lambda_list(std::string_view text) {
  std::vector<int> out;
  if (trim(text).empty()) throw ConfigError("empty lambda list");
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty entry in lambda list '" + std::string(text) + "'");
    const std::size_t dots = item.find("..");
    int lo, hi;
    if (dots == std::string::npos) {
      lo = hi = parse_int(item, "lambda");
    } else {
      lo = parse_int(trim(item.substr(0, dots)), "lambda");
      hi = parse_int(trim(item.substr(dots + 2)), "lambda");
    }
    if (lo < 2 || !is_power_of_two(lo) || !is_power_of_two(hi))
      throw ConfigError("lambda must be a power of two >= 2, got '" + item + "'");
    if (lo > hi) throw ConfigError("empty lambda range '" + item + "'");
    for (long long v = lo; v <= hi; v *= 2) out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_double(item, "number"));
  return out;
}

void ExperimentConfig::validate() const {
  if (lambdas.empty()) throw ConfigError("no lambda given (use --lambda, e.g. 2..64)");
  as_config([&] {
    optimizer.validate();
    return 0;
  });
  if (max_lambda < 2) throw ConfigError("max_lambda must be >= 2");
  for (int lambda : lambdas)
    if (lambda > max_lambda)
      throw ConfigError("lambda " + std::to_string(lambda) + " exceeds max_lambda " + std::to_string(max_lambda));
  if (superpotential.m <= 0) throw ConfigError("mass must be positive");
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (shots && *shots < 1) throw ConfigError("shots must be positive");
  switch (command) {
    case Command::Spectrum:
    case Command::ParamSweep:
      if (levels < 3) throw ConfigError("levels must be >= 3");
      if (command == Command::ParamSweep && grid.empty()) throw ConfigError("param-sweep needs a --grid");
      break;
    case Command::VQD:
    case Command::BetaSweep:
      if (levels < 2) throw ConfigError("levels must be >= 2");
      if (beta <= 0) throw ConfigError("beta must be positive");
      for (double b : betas)
        if (b <= 0) throw ConfigError("every beta must be positive");
      if (command == Command::BetaSweep && betas.empty()) throw ConfigError("beta grid is empty");
      for (int lambda : lambdas)
        if (levels > 2 * lambda) throw ConfigError("levels exceeds the Hilbert space at lambda " + std::to_string(lambda));
      break;
    case Command::AVQE:
      if (max_gates < 1) throw ConfigError("max_gates must be >= 1");
      if (energy_threshold <= 0) throw ConfigError("energy_threshold must be positive");
      break;
    default: break;
  }
  if (command == Command::VQE || command == Command::VQD) {
    if (ansatz == AnsatzName::Full && ansatz_file.empty())
      throw ConfigError("the full ansatz is read from --ansatz-file");
    for (int lambda : lambdas) build_ansatz(*this, lambda);
  }
}

std::string ExperimentConfig::resolved_json() const {
  json j{{"command", to_string(command)},
         {"superpotential", to_string(superpotential.kind)},
         {"m", superpotential.m},
         {"g", superpotential.g},
         {"mu", superpotential.mu},
         {"lambda", lambdas},
         {"max_lambda", max_lambda}};
  const json opt{{"optimizer", to_string(optimizer.kind)},
                 {"max_iterations", optimizer.max_iterations},
                 {"tolerance", optimizer.tolerance},
                 {"lower", optimizer.lower},
                 {"upper", optimizer.upper},
                 {"population_factor", optimizer.population_factor},
                 {"initial_radius", optimizer.initial_radius}};
  auto add_opt = [&] {
    for (auto it = opt.begin(); it != opt.end(); ++it) j[it.key()] = it.value();
  };
  switch (command) {
    case Command::Spectrum: j["levels"] = levels; break;
    case Command::PauliCount: j["block"] = block; break;
    case Command::ParamSweep:
      j["levels"] = levels;
      j["parameter"] = to_string(parameter);
      j["grid"] = grid;
      break;
    case Command::VQE:
    case Command::VQD:
      add_opt();
      j["ansatz"] = to_string(ansatz);
      if (ansatz == AnsatzName::Full) j["ansatz_file"] = ansatz_file;
      if (ansatz == AnsatzName::RealAmplitudes) j["reps"] = reps;
      j["shots"] = shots ? json(*shots) : json(nullptr);
      j["n_runs"] = n_runs;
      if (command == Command::VQD) {
        j["levels"] = levels;
        j["beta"] = beta;
      }
      break;
    case Command::AVQE:
      add_opt();
      j["n_runs"] = n_runs;
      j["energy_threshold"] = energy_threshold;
      j["max_gates"] = max_gates;
      break;
    case Command::BetaSweep:
      add_opt();
      j["reps"] = reps;
      j["shots"] = shots ? json(*shots) : json(nullptr);
      j["n_runs"] = n_runs;
      j["levels"] = levels;
      j["betas"] = betas;
      break;
  }
  return j.dump();
}

void apply_config_json(ExperimentConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "command") {
        if (parse_command(v.get<std::string>()) != cfg.command)
          throw ConfigError("config file is for '" + v.get<std::string>() + "', not '" +
                            std::string(to_string(cfg.command)) + "'");
      } else if (k == "superpotential") {
        cfg.superpotential.kind = as_config([&] { return parse_superpotential_kind(v.get<std::string>()); });
      } else if (k == "m") cfg.superpotential.m = v.get<double>();
      else if (k == "g") cfg.superpotential.g = v.get<double>();
      else if (k == "mu") cfg.superpotential.mu = v.get<double>();
      else if (k == "lambda") cfg.lambdas = lambdas_from_json(v);
      else if (k == "max_lambda") cfg.max_lambda = v.get<int>();
      else if (k == "levels") cfg.levels = v.get<int>();
      else if (k == "block") cfg.block = v.get<bool>();
      else if (k == "ansatz") cfg.ansatz = as_config([&] { return parse_ansatz_name(v.get<std::string>()); });
      else if (k == "ansatz_file") cfg.ansatz_file = v.get<std::string>();
      else if (k == "reps") cfg.reps = v.get<int>();
      else if (k == "optimizer") cfg.optimizer.kind = as_config([&] { return parse_optimizer_kind(v.get<std::string>()); });
      else if (k == "max_iterations") cfg.optimizer.max_iterations = v.get<int>();
      else if (k == "tolerance") cfg.optimizer.tolerance = v.get<double>();
      else if (k == "lower") cfg.optimizer.lower = v.get<double>();
      else if (k == "upper") cfg.optimizer.upper = v.get<double>();
      else if (k == "population_factor") cfg.optimizer.population_factor = v.get<int>();
      else if (k == "initial_radius") cfg.optimizer.initial_radius = v.get<double>();
      else if (k == "shots") cfg.shots = v.is_null() ? ShotCount{} : parse_shots(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>()));
      else if (k == "n_runs") cfg.n_runs = v.get<int>();
      else if (k == "seed") cfg.master_seed = v.get<std::uint64_t>();
      else if (k == "beta") cfg.beta = v.get<double>();
      else if (k == "betas") cfg.betas = reals_from_json(v, "betas");
      else if (k == "parameter") cfg.parameter = as_config([&] { return parse_sweep_parameter(v.get<std::string>()); });
      else if (k == "grid") cfg.grid = reals_from_json(v, "grid");
      else if (k == "energy_threshold") cfg.energy_threshold = v.get<double>();
      else if (k == "max_gates") cfg.max_gates = v.get<int>();
      else if (k == "output") cfg.output_dir = v.get<std::string>();
      else if (k == "jobs") cfg.jobs = v.get<int>();
      else throw ConfigError("unknown config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

void execute(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  Writer w(cfg, out);
  switch (cfg.command) {
    case Command::Spectrum: cmd_spectrum(cfg, w, out); break;
    case Command::PauliCount: cmd_pauli_count(cfg, w, out); break;
    case Command::VQE: cmd_vqe(cfg, w, out); break;
    case Command::AVQE: cmd_avqe(cfg, w, out); break;
    case Command::VQD: cmd_vqd(cfg, w, out); break;
    case Command::BetaSweep: cmd_beta_sweep(cfg, w, out); break;
    case Command::ParamSweep: cmd_param_sweep(cfg, w, out); break;
  }
}

namespace {

// Raw flag values; empty strings mean "not given".
struct Flags {
  std::string sp = "ho";
  std::string lambda;
  double m = 1.0, g = 1.0, mu = 1.0;
  std::string config;
  std::string output;
  std::uint64_t seed = 0;
  int jobs = 1;
  int max_lambda = kDefaultMaxLambda;
  int levels = 3;
  bool block = false;
  std::string ansatz = "real-amplitudes";
  std::string ansatz_file;
  int reps = 1;
  std::string optimizer = std::string(to_string(OptimizerConfig{}.kind));
  int max_iterations = 10000;
  double tolerance = 1e-8;
  int population_factor = 5;
  double initial_radius = 0.5;
  std::string shots;
  int n_runs = 100;
  double beta = 5.0;
  std::string betas = "0.5,1,2,3,4,5,10,20";
  std::string parameter = "g";
  std::string grid;
  double energy_threshold = 1e-6;
  int max_gates = 30;
};

ExperimentConfig assemble(Command cmd, const Flags& f) {
  ExperimentConfig cfg;
  cfg.command = cmd;
  cfg.superpotential.kind = as_config([&] { return parse_superpotential_kind(f.sp); });
  cfg.superpotential.m = f.m;
  cfg.superpotential.g = f.g;
  cfg.superpotential.mu = f.mu;
  if (!f.lambda.empty()) cfg.lambdas = parse_lambda_list(f.lambda);
  else if (cmd == Command::PauliCount) cfg.lambdas = parse_lambda_list("2..256");
  cfg.max_lambda = f.max_lambda;
  cfg.levels = f.levels;
  cfg.block = f.block;
  cfg.ansatz = as_config([&] { return parse_ansatz_name(f.ansatz); });
  cfg.ansatz_file = f.ansatz_file;
  cfg.reps = f.reps;
  cfg.optimizer.kind = as_config([&] { return parse_optimizer_kind(f.optimizer); });
  cfg.optimizer.max_iterations = f.max_iterations;
  cfg.optimizer.tolerance = f.tolerance;
  cfg.optimizer.population_factor = f.population_factor;
  cfg.optimizer.initial_radius = f.initial_radius;
  cfg.shots = parse_shots(f.shots);
  cfg.n_runs = f.n_runs;
  cfg.master_seed = f.seed;
  cfg.beta = f.beta;
  cfg.betas = parse_real_list(f.betas);
  cfg.parameter = as_config([&] { return parse_sweep_parameter(f.parameter); });
  cfg.grid = parse_real_list(f.grid);
  cfg.energy_threshold = f.energy_threshold;
  cfg.max_gates = f.max_gates;
  cfg.jobs = f.jobs;
  if (const char* env = std::getenv("SQM_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  if (!f.output.empty()) cfg.output_dir = f.output;
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw ConfigError("cannot read config file '" + f.config + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    apply_config_json(cfg, ss.str());
  }
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational solvers for supersymmetric quantum mechanics"};
  app.name("sqm");
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* s) {
    s->add_option("--sp", f.sp, "Superpotential: ho, aho or dw")->capture_default_str();
    s->add_option("--lambda", f.lambda, "Cutoffs: powers of two, comma list or a..b");
    s->add_option("--m", f.m, "Mass")->capture_default_str();
    s->add_option("--g", f.g, "Coupling")->capture_default_str();
    s->add_option("--mu", f.mu, "Double-well shift")->capture_default_str();
    s->add_option("--max-lambda", f.max_lambda, "Largest accepted cutoff")->capture_default_str();
    s->add_option("--config", f.config, "JSON config file; its keys override flags");
    s->add_option("--output", f.output, "Output directory (default $SQM_OUTPUT_DIR or .)");
    s->add_option("--seed", f.seed, "Master seed")->capture_default_str();
    s->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();
  };
  auto optimizer = [&](CLI::App* s) {
    s->add_option("--optimizer", f.optimizer, "quadratic, local, de or qnfd")->capture_default_str();
    s->add_option("--max-iterations", f.max_iterations)->capture_default_str();
    s->add_option("--tolerance", f.tolerance)->capture_default_str();
    s->add_option("--population-factor", f.population_factor)->capture_default_str();
    s->add_option("--initial-radius", f.initial_radius)->capture_default_str();
    s->add_option("--runs", f.n_runs, "Independent runs")->capture_default_str();
  };
  auto ansatz = [&](CLI::App* s) {
    s->add_option("--ansatz", f.ansatz, "real-amplitudes, truncated or full")->capture_default_str();
    s->add_option("--ansatz-file", f.ansatz_file, "Full ansatz file; {lambda} is substituted");
    s->add_option("--reps", f.reps, "Real-amplitudes repetitions")->capture_default_str();
    s->add_option("--shots", f.shots, "Shots per measured circuit (default exact)");
  };

  std::vector<std::pair<CLI::App*, Command>> subs;
  auto add = [&](Command c, const char* help) {
    CLI::App* s = app.add_subcommand(std::string(to_string(c)), help);
    common(s);
    subs.emplace_back(s, c);
    return s;
  };

  CLI::App* spectrum = add(Command::Spectrum, "Lowest levels, gaps, R and classification");
  spectrum->add_option("--levels", f.levels)->capture_default_str();
  CLI::App* pauli = add(Command::PauliCount, "Pauli term counts for all superpotentials");
  pauli->add_flag("--block", f.block, "Count the block holding the ground state");
  CLI::App* vqe = add(Command::VQE, "Batches of independent VQE runs");
  optimizer(vqe);
  ansatz(vqe);
  CLI::App* avqe = add(Command::AVQE, "Adaptive ansatz construction");
  optimizer(avqe);
  avqe->add_option("--energy-threshold", f.energy_threshold)->capture_default_str();
  avqe->add_option("--max-gates", f.max_gates)->capture_default_str();
  CLI::App* vqd = add(Command::VQD, "Lowest levels by deflation");
  optimizer(vqd);
  ansatz(vqd);
  vqd->add_option("--levels", f.levels)->capture_default_str();
  vqd->add_option("--beta", f.beta, "Overlap penalty weight")->capture_default_str();
  CLI::App* bsweep = add(Command::BetaSweep, "VQD batches over a beta grid");
  optimizer(bsweep);
  bsweep->add_option("--betas", f.betas)->capture_default_str();
  bsweep->add_option("--reps", f.reps)->capture_default_str();
  bsweep->add_option("--shots", f.shots);
  bsweep->add_option("--levels", f.levels)->capture_default_str();
  CLI::App* psweep = add(Command::ParamSweep, "Spectra over a grid of m, g or mu");
  psweep->add_option("--parameter", f.parameter, "m, g or mu")->capture_default_str();
  psweep->add_option("--grid", f.grid, "Comma-separated values");
  psweep->add_option("--levels", f.levels)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Command cmd = Command::Spectrum;
  for (const auto& [s, c] : subs)
    if (s->parsed()) cmd = c;

  ExperimentConfig cfg;
  try {
    cfg = assemble(cmd, f);
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    execute(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sqm::cli
