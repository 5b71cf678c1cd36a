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

#include "mgns/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "mgns/errors.hpp"
#include "mgns/nonlinear.hpp"
#include "mgns/numfmt.hpp"
#include "mgns/reference.hpp"

namespace mgns {

namespace fs = std::filesystem;

namespace {

void log_line(const RunOptions& opts, const std::string& line) {
  if (opts.log != nullptr) *opts.log << line << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

void prepare_output(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (opts.out_dir.empty()) return;
  fs::create_directories(opts.out_dir);
  save_config((fs::path(opts.out_dir) / "config.toml").string(), cfg);
}

LadderResult run_level_stack(const ExperimentConfig& cfg, int m, const RunOptions& opts, const std::string& hash) {
  const auto start = std::chrono::steady_clock::now();
  auto ladder = run_ladder(build_problem(cfg, m), LadderOptions{opts.postprocess_only, opts.exec, hash});
  log_line(opts, "ladder m=" + std::to_string(m) + " K=" + std::to_string(cfg.levels) + ": " +
                     fixed(seconds_since(start), 1) + " s");
  return ladder;
}

}  // namespace

Trajectory compute_reference(const ExperimentConfig& cfg, int largest_m, const RunOptions& opts) {
  const int M_ref = cfg.reference_cutoff(largest_m);
  const auto start = std::chrono::steady_clock::now();
  auto ref = run_reference(build_problem(cfg, largest_m), M_ref, cfg.reference_step(), opts.exec, config_hash(cfg));
  log_line(opts, "reference M_ref=" + std::to_string(M_ref) + " h_ref=" + format_double(cfg.reference_step()) + ": " +
                     fixed(seconds_since(start), 1) + " s");
  if (!opts.out_dir.empty()) {
    save_trajectory((fs::path(opts.out_dir) / "reference").string(),
                    subsample(ref, static_cast<std::size_t>(cfg.save_stride)));
  }
  return ref;
}

RunResult run_single(const ExperimentConfig& cfg, const Trajectory& reference, const RunOptions& opts) {
  prepare_output(cfg, opts);
  const std::string hash = config_hash(cfg);
  RunResult result{run_level_stack(cfg, cfg.m, opts, hash), {}};
  result.table = error_table(result.ladder, reference, cfg.norms, cfg.transient_skip());
  if (!opts.out_dir.empty()) {
    save_ladder((fs::path(opts.out_dir) / "ladder").string(), result.ladder, hash,
                static_cast<std::size_t>(cfg.save_stride));
    std::ostringstream csv;
    write_error_csv(csv, result.table);
    write_text(fs::path(opts.out_dir) / "errors.csv", csv.str());
  }
  return result;
}

ConvergeResult run_convergence(const ExperimentConfig& cfg, const Trajectory& reference, const RunOptions& opts) {
  prepare_output(cfg, opts);
  const std::string hash = config_hash(cfg);
  ConvergeResult result;
  for (int m : cfg.sweep) {
    const auto ladder = run_level_stack(cfg, m, opts, hash);
    const auto table = error_table(ladder, reference, cfg.norms, cfg.transient_skip());
    result.table.rows.insert(result.table.rows.end(), table.rows.begin(), table.rows.end());
    if (!opts.out_dir.empty()) {
      save_ladder((fs::path(opts.out_dir) / ("run_m" + std::to_string(m))).string(), ladder, hash,
                  static_cast<std::size_t>(cfg.save_stride));
    }
  }
  for (int k = 0; k <= cfg.levels; ++k) {
    for (Norm norm : cfg.norms) {
      for (Measure measure : {Measure::AtT, Measure::Sup}) {
        try {
          auto fit = eoc_fit(result.table, k, norm, measure);
          for (const auto& w : fit.warnings) result.warnings.push_back(w);
          result.fits.push_back(std::move(fit));
        } catch (const ValidationError& e) {
          result.warnings.push_back(e.what());
        }
      }
    }
  }
  for (const auto& w : result.warnings) log_line(opts, "warning: " + w);
  if (!opts.out_dir.empty()) {
    std::ostringstream csv;
    write_error_csv(csv, result.table);
    write_text(fs::path(opts.out_dir) / "errors.csv", csv.str());
    write_text(fs::path(opts.out_dir) / "eoc.json", eoc_json(result.fits, hash));
  }
  return result;
}

Diagnostics run_diagnostics(const ExperimentConfig& cfg, const Trajectory& reference, const RunOptions& opts) {
  prepare_output(cfg, opts);
  auto diag = smallscale_diagnostics(reference, cfg.sweep, cfg.transient_skip(), cfg.pp_diagnostics);
  if (!opts.out_dir.empty()) {
    std::ostringstream csv;
    write_diag_csv(csv, diag);
    write_text(fs::path(opts.out_dir) / "diag.csv", csv.str());
    write_text(fs::path(opts.out_dir) / "diag.json", diag_json(diag, config_hash(cfg)));
  }
  return diag;
}

namespace {

constexpr double kTwoPi = 6.283185307179586;

SelftestCheck check(const std::string& name, const std::function<std::string()>& body) {
  try {
    const std::string failure = body();
    return SelftestCheck{name, failure.empty(), failure};
  } catch (const std::exception& e) {
    return SelftestCheck{name, false, std::string("exception: ") + e.what()};
  }
}

std::string expect_below(const std::string& what, double value, double bound) {
  if (value <= bound) return {};
  return what + " = " + format_double(value) + " exceeds " + format_double(bound);
}

}  // namespace

std::vector<SelftestCheck> run_selftest() {
  std::vector<SelftestCheck> checks;

  checks.push_back(check("spectral parameters and dof counts", [] {
    const auto p6 = spectral_params(6, kTwoPi);
    const auto p10 = spectral_params(10, kTwoPi);
    const double a = std::pow(p6.delta, 13.0 / 4.0), b = std::pow(p10.delta, 11.0 / 4.0);
    if (std::abs(a / 3.2e-6 - 1) > 0.02) return "delta^(13/4) at m=6 is " + format_double(a);
    if (std::abs(b / 1.87e-6 - 1) > 0.02) return "delta^(11/4) at m=10 is " + format_double(b);
    if (dof_count(6) != 168 || dof_count(10) != 440) return std::string("dof counts differ from 168 / 440");
    return std::string();
  }));

  checks.push_back(check("fast convection term matches quadrature oracle", [] {
    double worst = 0;
    for (int cutoff : {2, 4}) {
      for (std::uint64_t s = 0; s < 3; ++s) {
        const auto u = random_field(cutoff, 2 * s + 1, 0.2, kTwoPi), v = random_field(cutoff, 2 * s + 2, 0.2, kTwoPi);
        worst = std::max(worst, max_abs_diff(bilinear_B(u, v, 2 * cutoff), bilinear_B_oracle(u, v, 2 * cutoff)));
      }
    }
    return expect_below("max-abs difference", worst, 1e-12);
  }));

  checks.push_back(check("trilinear form is skew and serial equals parallel", [] {
    const auto u = random_field(4, 11, 0.3, kTwoPi), v = random_field(4, 12, 0.3, kTwoPi),
               w = random_field(4, 13, 0.3, kTwoPi);
    const double scale = norm_h1(u) * norm_h1(v) * norm_h1(w);
    if (auto f = expect_below("|b(u,v,v)|", std::abs(trilinear_b(u, v, v)) / scale, 1e-12); !f.empty()) return f;
    if (auto f = expect_below("|b(u,v,w) + b(u,w,v)|", std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v)) / scale,
                              1e-12);
        !f.empty()) {
      return f;
    }
    if (!(bilinear_B(u, v, 8, Exec::Serial) == bilinear_B(u, v, 8, Exec::Parallel))) {
      return std::string("serial and parallel convection terms differ");
    }
    return std::string();
  }));

  checks.push_back(check("half-block products stay in the large scales", [] {
    const auto pp = random_field(2, 21, 0.0, kTwoPi);
    return expect_below("max |Q_4 B(p_p, p_p)|", project(bilinear_B(pp, pp, 8), Projection::Q_m, 4).max_abs(), 1e-13);
  }));

  checks.push_back(check("steady and decaying single modes are reproduced", [] {
    const ModeIndex mode{1, 1, Variant::CPlus};
    double worst = 0;
    for (auto kind : {SpecialKind::Steady, SpecialKind::Decay}) {
      const auto s = exact_special_solution(kind, mode, 0.9, kTwoPi, 1.0);
      ProblemSpec spec(s.forcing(4), s.at(0.0, 4));
      spec.m = 2;
      spec.M_out = 4;
      spec.T = 0.1;
      spec.h = 1e-3;
      spec.K = 2;
      const auto ladder = run_ladder(spec);
      const auto ref = run_reference(spec, 8, spec.h);
      worst = std::max(worst, max_abs_diff(ref.back(), s.at(spec.T, 8)));
      for (const auto& lv : ladder.levels) worst = std::max(worst, max_abs_diff(lv.u.back(), s.at(spec.T, 4)));
    }
    return expect_below("max deviation from the closed form", worst, 1e-10);
  }));

  checks.push_back(check("field serialization round-trips bit-exactly", [] {
    const auto u = random_field(5, 31, 0.7, 1.3);
    std::stringstream ss;
    write_field(ss, u);
    return read_field(ss) == u ? std::string() : std::string("read_field(write_field(u)) differs from u");
  }));

  return checks;
}

}  // namespace mgns
