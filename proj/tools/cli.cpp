// Copyright 2026 The lorenz-rank Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lorenz_rank/eval_harness.hpp"
#include "lorenz_rank/format.hpp"
#include "lorenz_rank/io.hpp"
#include "lorenz_rank/isotonic_projection.hpp"
#include "lorenz_rank/optimizer.hpp"

namespace lorenz_rank {

namespace {

struct Options {
  std::string config;
  std::string prefs;
  std::string out;
  std::string trace;
  std::string policy;
  std::string weights;
  std::string z;
  bool reciprocal = false;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw ConfigError(std::string("missing ") + flag +
                      " (give the flag or set it in the config)");
  }
}

// Config from --config (or defaults), paths overridden by flags, threads
// from the environment.
RunConfig resolve(const Options& opt) {
  RunConfig config = opt.config.empty() ? RunConfig{}
                                        : load_run_config(opt.config);
  if (opt.reciprocal) enable_reciprocal(config);
  if (!opt.prefs.empty()) config.prefs_path = opt.prefs;
  if (!opt.out.empty()) config.out_path = opt.out;
  if (!opt.trace.empty()) config.trace_path = opt.trace;
  config.optimizer.threads = threads_from_env();
  config.validate();
  return config;
}

int run_gen(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve(opt);
  const PreferenceMatrix prefs =
      synthetic_prefs(config.synthetic.users, config.synthetic.items,
                      config.synthetic.skew, config.optimizer.seed);
  if (config.out_path.empty()) {
    write_prefs(out, prefs, provenance_line(config));
  } else {
    save_prefs(config.out_path, prefs, provenance_line(config));
  }
  return kExitOk;
}

int run_optimize(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve(opt);
  require(config.prefs_path, "--prefs");
  require(config.out_path, "--out");
  const PreferenceMatrix prefs = load_prefs(config.prefs_path);
  const ExposureWeights exposure = make_exposure(config, prefs.num_items());
  const FwResult result = frank_wolfe(config.optimizer, prefs, exposure);
  write_file(config.out_path, [&](std::ostream& os) {
    write_policy(os, result.policy, config);
  });
  if (!config.trace_path.empty()) {
    write_file(config.trace_path, [&](std::ostream& os) {
      write_trace(os, result.trace, config);
    });
  }
  out << "objective " << format_double(result.objective) << " with "
      << result.policy.size() << " components\n";
  return kExitOk;
}

int run_sweep(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve(opt);
  require(config.prefs_path, "--prefs");
  require(config.out_path, "--out");
  const PreferenceMatrix prefs = load_prefs(config.prefs_path);
  const ExposureWeights exposure = make_exposure(config, prefs.num_items());
  const std::vector<SweepRecord> records =
      pareto_sweep(config.optimizer, config.lambda_grid, prefs, exposure,
                   config.optimizer.threads, config.quantiles);
  write_file(config.out_path, [&](std::ostream& os) {
    write_sweep(os, records, config);
  });
  const AuditReport audit = lorenz_audit(records);
  out << records.size() << " sweep points, " << audit.violations.size()
      << " Lorenz-audit violations in " << audit.pairs_checked << " pairs\n";
  return kExitOk;
}

int run_eval(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve(opt);
  require(config.prefs_path, "--prefs");
  require(opt.policy, "--policy");
  const PreferenceMatrix prefs = load_prefs(config.prefs_path);
  const RankingPolicy policy = load_policy(opt.policy);
  const PolicyMetrics metrics = evaluate_policy(config, policy, prefs);
  if (config.out_path.empty()) {
    write_metrics(out, metrics, config);
  } else {
    write_file(config.out_path, [&](std::ostream& os) {
      write_metrics(os, metrics, config);
    });
  }
  return kExitOk;
}

int run_project(const Options& opt, std::ostream& out) {
  const std::vector<double> w = load_vector(opt.weights);
  const std::vector<double> z = load_vector(opt.z);
  if (w.size() != z.size()) {
    throw ConfigError("--weights and --z have different lengths (" +
                      std::to_string(w.size()) + " vs " +
                      std::to_string(z.size()) + ")");
  }
  GgfWeights weights = [&] {
    try {
      return GgfWeights(w);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--weights: ") + e.what());
    }
  }();
  const ProjectionResult result = permutahedron_project(weights, z);
  for (std::size_t i = 0; i < result.y.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(result.y[i]);
  }
  out << '\n';
  return kExitOk;
}

int run_compare(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve(opt);
  require(config.prefs_path, "--prefs");
  require(config.out_path, "--out");
  const PreferenceMatrix prefs = load_prefs(config.prefs_path);
  const ExposureWeights exposure = make_exposure(config, prefs.num_items());
  const ConvergenceComparison cmp =
      convergence_compare(config.optimizer, prefs, exposure, config.beta0_grid);
  write_file(config.out_path, [&](std::ostream& os) {
    write_comparison(os, cmp, config);
  });
  out << "subgradient final " << format_double(cmp.subgradient_final) << '\n';
  for (const ComparisonRun& run : cmp.smoothing) {
    out << "smoothing beta0=" << format_double(run.beta0) << " final "
        << format_double(run.final_objective) << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Fair ranking with generalized Gini welfare", "lorenz-rank"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Options opt;

  const auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "Run configuration (JSON)")
        ->check(CLI::ExistingFile);
  };
  const auto add_prefs = [&](CLI::App* cmd) {
    cmd->add_option("--prefs", opt.prefs, "Preference matrix (CSV)")
        ->check(CLI::ExistingFile);
  };
  const auto add_reciprocal = [&](CLI::App* cmd) {
    cmd->add_flag("--reciprocal", opt.reciprocal,
                  "Reciprocal mode: users are also the items");
  };

  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic preference matrix");
  add_config(gen);
  gen->add_option("--out", opt.out, "Output CSV (stdout if omitted)");

  CLI::App* optimize =
      app.add_subcommand("optimize", "Run Frank-Wolfe on one configuration");
  add_prefs(optimize);
  add_config(optimize);
  optimize->add_option("--out", opt.out, "Policy JSON");
  optimize->add_option("--trace", opt.trace, "Convergence trace CSV");
  add_reciprocal(optimize);

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep lambda over a grid");
  add_prefs(sweep);
  add_config(sweep);
  sweep->add_option("--out", opt.out, "Sweep CSV");
  add_reciprocal(sweep);

  CLI::App* eval = app.add_subcommand("eval", "Metrics of an existing policy");
  add_prefs(eval);
  add_config(eval);
  eval->add_option("--policy", opt.policy, "Policy JSON")
      ->check(CLI::ExistingFile);
  eval->add_option("--out", opt.out, "Metrics JSON (stdout if omitted)");
  add_reciprocal(eval);

  CLI::App* project = app.add_subcommand(
      "project", "Project z onto the permutahedron of the reversed, negated weights");
  project->add_option("--weights", opt.weights, "GGF weights")
      ->required()
      ->check(CLI::ExistingFile);
  project->add_option("--z", opt.z, "Point to project")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* compare = app.add_subcommand(
      "compare", "Subgradient against smoothing for each beta0 in the config");
  add_prefs(compare);
  add_config(compare);
  compare->add_option("--out", opt.out, "Comparison CSV");
  add_reciprocal(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen(opt, out);
    if (optimize->parsed()) return run_optimize(opt, out);
    if (sweep->parsed()) return run_sweep(opt, out);
    if (eval->parsed()) return run_eval(opt, out);
    if (project->parsed()) return run_project(opt, out);
    if (compare->parsed()) return run_compare(opt, out);
  } catch (const ConfigError& e) {
    err << "lorenz-rank: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "lorenz-rank: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace lorenz_rank
