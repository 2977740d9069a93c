// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// spectral-lab: command line front end.
//
//   spectral-lab bounds     --sigma 10,5,1 --m 50 --k 1 --T 1e-3
//   spectral-lab mechanism  --input a.csv --k 2 --T 1e-4 --mode subspace
//   spectral-lab simulate   --input a.csv --T 0.01 --dt 1e-4 --paths 100
//   spectral-lab experiment --config run.cfg --trials 1000
//   spectral-lab scaling    --config sweep.cfg --dim m
//
// Exit codes: 0 success, 2 input error, 3 numeric or collision error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectral/bounds.hpp"
#include "spectral/config.hpp"
#include "spectral/dyson_bessel.hpp"
#include "spectral/errors.hpp"
#include "spectral/experiments.hpp"
#include "spectral/matrix_io.hpp"
#include "spectral/mechanism.hpp"
#include "spectral/parallel.hpp"
#include "spectral/random.hpp"
#include "spectral/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spectral;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string output_dir = ".";
  std::string config;
};

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json vector_json(const DenseVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw InputError("failed writing " + path.string());
}

fs::path in_output_dir(const Globals& g, const std::string& path, const std::string& fallback) {
  if (path.empty()) return fs::path(g.output_dir) / fallback;
  return fs::path(path);
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  std::string input;
  std::vector<double> sigma;
  int m = 0;
  int k = 1;
  double T = 0.0;
  std::vector<double> gamma;
  double uniform_gap_constant = 1.0;
  std::string output;
};

json labeled(const std::string& label, const BoundValue& b) {
  json j = to_json(b);
  j["label"] = label;
  return j;
}

int run_bounds(const BoundsArgs& args, const Globals&) {
  DenseVector sigma;
  int m = args.m;
  if (!args.input.empty()) {
    const DenseMatrix a = read_matrix_csv(args.input);
    sigma = svd(a).singular_values;
    m = static_cast<int>(a.rows());
  } else {
    if (args.sigma.empty()) throw InputError("bounds: give --input or --sigma");
    sigma = Eigen::Map<const DenseVector>(args.sigma.data(), args.sigma.size());
    if (m == 0) m = static_cast<int>(sigma.size());
  }
  const GapProfile profile(sigma, m);
  const int d = profile.d();
  const int k = args.k;
  const double T = args.T;
  const double rt = std::sqrt(T);

  if (!args.gamma.empty() && static_cast<int>(args.gamma.size()) != d) {
    throw InputError("bounds: --gamma needs d values");
  }
  const SpectralWeights weights =
      args.gamma.empty()
          ? SpectralWeights::indicator(d, k)
          : SpectralWeights(Eigen::Map<const DenseVector>(args.gamma.data(), d), k);

  json bounds = json::array();
  bounds.push_back(labeled("davis_kahan_proxy",
                           davis_kahan_bound(profile, k, rt * (std::sqrt(double(m)) +
                                                               std::sqrt(double(d))))));
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) rank += sigma[i] > 0 ? 1 : 0;
  bounds.push_back(labeled("orourke_vu", orourke_vu_bound(profile, k, rank, T)));
  bounds.push_back(labeled("subspace", subspace_bound(profile, k, T, false)));
  if (uniform_gap_hypothesis(profile, k, args.uniform_gap_constant)) {
    bounds.push_back(labeled("subspace_uniform",
                             subspace_bound(profile, k, T, true, args.uniform_gap_constant)));
  }
  bounds.push_back(labeled("main", main_bound(profile, weights, T)));
  bounds.push_back(labeled("covariance", covariance_bound(profile, k, T)));
  const auto baselines = baseline_covariance_bounds(profile, k, T);
  bounds.push_back(labeled("covariance_davis_kahan", baselines.davis_kahan));
  bounds.push_back(labeled("covariance_orourke_vu", baselines.orourke_vu));

  json doc = {{"sigma", vector_json(sigma)}, {"m", m},   {"d", d},
              {"k", k},                      {"T", T},   {"bounds", bounds},
              {"first_order_psi_error", number(first_order_psi_error(profile, weights, T))},
              {"first_order_covariance_error",
               number(first_order_covariance_error(profile, k, T))}};
  if (k < d && T > 0) {
    try {
      const auto a = check_assumption(profile, k, T, weights);
      doc["assumption"] = {{"delta", number(a.delta)},
                           {"delta_valid", a.validity == DeltaValidity::kValid},
                           {"required_gap", number(a.required_gap)},
                           {"satisfied", a.overall}};
    } catch (const InputError& e) {
      doc["assumption"] = {{"error", e.what()}};
    }
  }
  const std::string text = doc.dump(2) + "\n";
  if (!args.output.empty()) write_text(args.output, text);
  std::cout << text;
  return 0;
}

// ------------------------------------------------------------- mechanism

struct MechanismArgs {
  std::string input;
  int k = 1;
  double T = 0.0;
  std::string mode = "subspace";
  std::string output;
};

int run_mechanism(const MechanismArgs& args, const Globals& g) {
  const DenseMatrix a = read_matrix_csv(args.input);
  const NoiseConfig noise{args.T, g.seed.value_or(0)};
  ReleaseResult r = args.mode == "covariance" ? release_covariance(a, args.k, noise)
                                              : release_subspace(a, args.k, noise);
  const fs::path json_path = in_output_dir(g, args.output, "mechanism.json");
  fs::path csv_path = json_path;
  csv_path.replace_extension(".csv");
  if (csv_path == json_path) csv_path += ".csv";
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  write_matrix_csv(csv_path.string(), r.released);

  json doc = {{"mode", args.mode},
              {"k", args.k},
              {"T", args.T},
              {"seed", noise.seed},
              {"sigma_hat", vector_json(r.perturbed_sigma)},
              {"error_frobenius",
               r.error_frobenius ? number(*r.error_frobenius) : json(nullptr)},
              {"released_csv_path", csv_path.string()},
              {"flags", r.flags}};
  const std::string text = doc.dump(2) + "\n";
  write_text(json_path, text);
  std::cout << text;
  return 0;
}

// -------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string input;
  double T = 0.0;
  double dt = 1e-4;
  int paths = 1;
  int checkpoints = 1;
  std::string output;
  std::string frames;
  bool direct = false;
  std::optional<double> collision_floor;
  int max_halvings = 12;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<DenseVector> sigma;
  std::vector<DenseMatrix> frame;
};

int run_simulate(const SimulateArgs& args, const Globals& g) {
  if (args.paths < 1) throw InputError("simulate: --paths must be >= 1");
  const DenseMatrix a = read_matrix_csv(args.input);
  const std::uint64_t root = g.seed.value_or(0);

  const auto trajectories = parallel_map(
      static_cast<std::size_t>(args.paths), g.threads.value_or(1), [&](std::size_t p) {
        const std::uint64_t seed = derive_seed(root, "path", p);
        Trajectory out;
        if (args.direct) {
          if (args.T > 0) {
            const auto f0 = svd(a);
            out.t.push_back(0.0);
            out.sigma.push_back(f0.singular_values);
            out.frame.push_back(f0.right);
          }
          for (const auto& point : direct_path(a, args.T, args.checkpoints, seed)) {
            out.t.push_back(point.t);
            out.sigma.push_back(point.factors.singular_values);
            out.frame.push_back(point.factors.right);
          }
        } else {
          SdeConfig cfg;
          cfg.dt = args.dt;
          cfg.T = args.T;
          cfg.m = static_cast<int>(a.rows());
          cfg.seed = seed;
          cfg.checkpoints = args.checkpoints;
          cfg.collision_floor = args.collision_floor;
          cfg.max_halvings = args.max_halvings;
          for (const auto& state : simulate(a, cfg)) {
            out.t.push_back(state.t);
            out.sigma.push_back(state.sigma);
            out.frame.push_back(state.frame);
          }
        }
        return out;
      });

  const Eigen::Index d = a.cols();
  std::ostringstream csv;
  csv << "path_id,t";
  for (Eigen::Index i = 1; i <= d; ++i) csv << ",sigma_" << i;
  csv << '\n';
  std::ostringstream frames;
  frames << "path_id,t";
  for (Eigen::Index r = 1; r <= d; ++r) {
    for (Eigen::Index c = 1; c <= d; ++c) frames << ",v_" << r << '_' << c;
  }
  frames << '\n';
  for (std::size_t p = 0; p < trajectories.size(); ++p) {
    const auto& tr = trajectories[p];
    for (std::size_t s = 0; s < tr.t.size(); ++s) {
      csv << p << ',' << format_double(tr.t[s]);
      for (Eigen::Index i = 0; i < d; ++i) csv << ',' << format_double(tr.sigma[s][i]);
      csv << '\n';
      frames << p << ',' << format_double(tr.t[s]);
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) frames << ',' << format_double(tr.frame[s](r, c));
      }
      frames << '\n';
    }
  }
  const fs::path out_path = in_output_dir(g, args.output, "trajectories.csv");
  write_text(out_path, csv.str());
  if (!args.frames.empty()) write_text(args.frames, frames.str());
  std::cout << "wrote " << trajectories.size() << " paths to " << out_path.string() << '\n';
  return 0;
}

// ----------------------------------------------------- experiment/scaling

// Every ExperimentConfig key gets a --flag of the same name with '_' -> '-'.
const std::vector<std::string> kConfigKeys = {
    "mode",  "m",      "d",   "profile", "sigma",  "sigma1", "decay",
    "gap",   "rotation_seed", "k",       "T",      "trials", "bounds",
    "gamma", "sweep",  "uniform_gap_constant",
};

void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& values) {
  for (const auto& key : kConfigKeys) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    cmd->add_option("--" + flag, values[key], "config key '" + key + "'");
  }
}

ExperimentConfig build_config(const Globals& g, const std::map<std::string, std::string>& flags,
                              CLI::App* cmd) {
  ExperimentConfig cfg;
  if (!g.config.empty()) cfg = load_experiment_config(g.config);
  for (const auto& key : kConfigKeys) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (cmd->count("--" + flag) > 0) apply_setting(cfg, key, flags.at(key));
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  return cfg;
}

void print_summaries(const std::vector<ExperimentSummary>& summaries) {
  for (const auto& s : summaries) {
    std::cout << s.mode << " m=" << s.m << " d=" << s.d << " k=" << s.k
              << " T=" << format_double(s.T) << " mean=" << format_double(s.empirical_mean)
              << " stderr=" << format_double(s.empirical_stderr) << '\n';
    for (const auto& [label, value] : s.ratios) {
      std::cout << "  ratio " << label << " = " << format_double(value) << '\n';
    }
    for (const auto& w : s.warnings) std::cout << "  warning: " << w << '\n';
  }
}

int run_experiment_cmd(const ExperimentConfig& cfg, const Globals& g) {
  const auto summaries = run_experiment(cfg);
  const auto files = emit_report(summaries, g.output_dir);
  print_summaries(summaries);
  std::cout << "wrote " << files.csv.string() << ", " << files.json.string() << '\n';
  return 0;
}

int run_scaling_cmd(ExperimentConfig cfg, const std::string& dim, const Globals& g) {
  if (dim == "m") cfg.mode = ExperimentMode::kScalingM;
  if (dim == "d") cfg.mode = ExperimentMode::kScalingD;
  const auto result = run_scaling_study(cfg);
  emit_scaling_report(result, g.output_dir);
  print_summaries(result.points);
  std::cout << "slope vs " << result.swept << ": " << format_double(result.empirical.slope)
            << " [" << format_double(result.empirical.ci_low) << ", "
            << format_double(result.empirical.ci_high) << "]\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral perturbation bounds, Gaussian mechanism releases and Dyson-Bessel "
               "simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "root seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", g.output_dir, "directory for output files");
  app.add_option("--config", g.config, "key = value configuration file");

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate every bound for a spectrum");
  bounds_cmd->add_option("--input", bounds_args.input, "matrix CSV");
  bounds_cmd->add_option("--sigma", bounds_args.sigma, "singular values")->delimiter(',');
  bounds_cmd->add_option("--m", bounds_args.m, "rows (with --sigma; default d)");
  bounds_cmd->add_option("--k", bounds_args.k, "rank")->required();
  bounds_cmd->add_option("--T", bounds_args.T, "noise variance")->required();
  bounds_cmd->add_option("--gamma", bounds_args.gamma, "weights for the main bound")
      ->delimiter(',');
  bounds_cmd->add_option("--uniform-gap-constant", bounds_args.uniform_gap_constant);
  bounds_cmd->add_option("--output", bounds_args.output, "JSON output path");
  bounds_cmd->get_option("--input")->excludes("--sigma");

  MechanismArgs mech_args;
  auto* mech_cmd = app.add_subcommand("mechanism", "release a perturbed subspace or covariance");
  mech_cmd->add_option("--input", mech_args.input, "matrix CSV")->required();
  mech_cmd->add_option("--k", mech_args.k, "rank")->required();
  mech_cmd->add_option("--T", mech_args.T, "noise variance")->required();
  mech_cmd->add_option("--mode", mech_args.mode)
      ->check(CLI::IsMember({"subspace", "covariance"}));
  mech_cmd->add_option("--output", mech_args.output, "JSON output path");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "integrate the Dyson-Bessel SDE");
  sim_cmd->add_option("--input", sim_args.input, "matrix CSV")->required();
  sim_cmd->add_option("--T", sim_args.T, "horizon")->required();
  sim_cmd->add_option("--dt", sim_args.dt, "step size");
  sim_cmd->add_option("--paths", sim_args.paths, "number of paths");
  sim_cmd->add_option("--checkpoints", sim_args.checkpoints, "recorded times after t = 0");
  sim_cmd->add_option("--output", sim_args.output, "trajectory CSV path");
  sim_cmd->add_option("--frames", sim_args.frames, "sidecar CSV for right singular vectors");
  sim_cmd->add_option("--collision-floor", sim_args.collision_floor);
  sim_cmd->add_option("--max-halvings", sim_args.max_halvings, "step halvings before giving up");
  sim_cmd->add_flag("--direct", sim_args.direct, "simulate A + B(t) directly instead");

  std::map<std::string, std::string> exp_flags;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo bound comparison");
  add_config_flags(exp_cmd, exp_flags);

  std::map<std::string, std::string> scaling_flags;
  std::string dim;
  auto* scaling_cmd = app.add_subcommand("scaling", "log-log scaling study in m or d");
  add_config_flags(scaling_cmd, scaling_flags);
  scaling_cmd->add_option("--dim", dim, "swept dimension")->check(CLI::IsMember({"m", "d"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*bounds_cmd) return run_bounds(bounds_args, g);
    if (*mech_cmd) return run_mechanism(mech_args, g);
    if (*sim_cmd) return run_simulate(sim_args, g);
    if (*exp_cmd) return run_experiment_cmd(build_config(g, exp_flags, exp_cmd), g);
    if (*scaling_cmd) return run_scaling_cmd(build_config(g, scaling_flags, scaling_cmd), dim, g);
  } catch (const CollisionError& e) {
    std::cerr << "collision: " << e.what() << " (t=" << e.time() << ", index=" << e.index()
              << ")\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
