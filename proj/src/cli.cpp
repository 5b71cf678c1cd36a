// Copyright 2026 The mgns Authors
//
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

#include "mgns/cli.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgns/errors.hpp"
#include "mgns/experiment.hpp"
#include "mgns/numfmt.hpp"

namespace mgns {

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<int> levels;
  std::optional<long long> seed;
  bool postprocess_only = false;
};

void add_common(CLI::App* cmd, Flags& flags, bool ladder_flags) {
  cmd->add_option("--config", flags.config, "experiment configuration (TOML)")->required();
  cmd->add_option("--out", flags.out, "output directory (overrides output_dir)");
  cmd->add_option("--seed", flags.seed, "random seed (overrides seed)");
  if (ladder_flags) {
    cmd->add_option("--levels", flags.levels, "highest ladder level K (overrides levels)");
    cmd->add_flag("--postprocess-only", flags.postprocess_only,
                  "compute the last level's small scales only at the final time");
  }
}

ExperimentConfig configure(const Flags& flags) {
  ExperimentConfig cfg = load_config(flags.config);
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (flags.levels) cfg.levels = *flags.levels;
  if (flags.seed) {
    if (*flags.seed < 0) throw ValidationError("--seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*flags.seed);
  }
  validate_config(cfg);
  return cfg;
}

void print_table(std::ostream& out, const ErrorTable& table) {
  out << "m  k  norm  err_T  err_sup\n";
  for (const auto& r : table.rows) {
    out << r.m << "  " << r.k << "  " << norm_name(r.norm) << "  " << format_double(r.err_T) << "  "
        << format_double(r.err_sup) << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-level modified Galerkin solver for 2D periodic Navier-Stokes", "mgns"};
  app.require_subcommand(1);
  Flags run_flags, converge_flags, diag_flags;
  auto* run_cmd = app.add_subcommand("run", "run one ladder and compare it with the reference solution");
  add_common(run_cmd, run_flags, true);
  auto* converge_cmd = app.add_subcommand("converge", "sweep the cutoff, tabulate errors and fit convergence orders");
  add_common(converge_cmd, converge_flags, true);
  auto* diag_cmd = app.add_subcommand("diag", "small-scale diagnostics of the reference solution");
  add_common(diag_cmd, diag_flags, false);
  auto* selftest_cmd = app.add_subcommand("selftest", "quick invariant checks of this build");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    RunOptions opts;
    opts.log = &err;
    if (*selftest_cmd) {
      bool ok = true;
      for (const auto& c : run_selftest()) {
        out << (c.passed ? "ok    " : "FAIL  ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
        ok = ok && c.passed;
      }
      return ok ? 0 : 2;
    }
    if (*run_cmd) {
      const auto cfg = configure(run_flags);
      opts.out_dir = cfg.output_dir;
      opts.postprocess_only = run_flags.postprocess_only;
      const auto ref = compute_reference(cfg, cfg.m, opts);
      const auto result = run_single(cfg, ref, opts);
      print_table(out, result.table);
      return 0;
    }
    if (*converge_cmd) {
      const auto cfg = configure(converge_flags);
      opts.out_dir = cfg.output_dir;
      opts.postprocess_only = converge_flags.postprocess_only;
      const auto ref = compute_reference(cfg, cfg.largest_m(), opts);
      const auto result = run_convergence(cfg, ref, opts);
      print_table(out, result.table);
      for (const auto& f : result.fits) {
        out << "slope k=" << f.k << ' ' << norm_name(f.norm) << (f.measure == Measure::AtT ? " at T" : " sup") << ": "
            << format_double(f.slope) << '\n';
      }
      return 0;
    }
    if (*diag_cmd) {
      const auto cfg = configure(diag_flags);
      opts.out_dir = cfg.output_dir;
      int largest = 0;
      for (int m : cfg.sweep) largest = std::max(largest, m);
      const auto ref = compute_reference(cfg, largest, opts);
      const auto diag = run_diagnostics(cfg, ref, opts);
      write_diag_csv(out, diag);
      for (const auto& f : diag.fits) out << "slope " << f.column << ": " << format_double(f.slope) << '\n';
      return 0;
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace mgns
