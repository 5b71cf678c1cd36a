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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mgns/analysis.hpp"
#include "mgns/cli.hpp"
#include "mgns/config.hpp"
#include "mgns/errors.hpp"
#include "mgns/experiment.hpp"
#include "mgns/reference.hpp"

namespace mgns {
namespace {

namespace fs = std::filesystem;
constexpr double kTwoPi = 6.283185307179586;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mgns_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, EmptyTextGivesDocumentedDefaults) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg, ExperimentConfig{});
  EXPECT_DOUBLE_EQ(cfg.nu, 1.0);
  EXPECT_DOUBLE_EQ(cfg.transient_skip(), 0.5 * cfg.T);
  EXPECT_EQ(cfg.m_out_factor, 2);
  EXPECT_EQ(cfg.reference_cutoff(16), 64);
  EXPECT_EQ(cfg.norms, std::vector<Norm>{Norm::L2});
}

TEST(Config, RejectsInvalidFieldsByName) {
  EXPECT_NE(error_of("nu = 0").find("'nu'"), std::string::npos);
  EXPECT_NE(error_of("nu = -1.5").find("'nu'"), std::string::npos);
  EXPECT_NE(error_of("sweep = [4, 4]").find("distinct"), std::string::npos);
  EXPECT_NE(error_of("sweep = [1, 4]").find(">= 2"), std::string::npos);
  EXPECT_NE(error_of("t_skip = 2.0").find("'t_skip'"), std::string::npos);
  EXPECT_NE(error_of("h = 0.3").find("'h'"), std::string::npos);
  EXPECT_NE(error_of("frobnicate = 1").find("unknown key"), std::string::npos);
  EXPECT_NE(error_of("m = 2.5").find("integer"), std::string::npos);
  EXPECT_NE(error_of("norms = [\"L3\"]").find("L3"), std::string::npos);
  EXPECT_NE(error_of("forcing = \"gusty\"").find("benchmark"), std::string::npos);
  EXPECT_NE(error_of("m_out_factor = 5").find("1..4"), std::string::npos);
  EXPECT_NE(error_of("m_ref = 20").find("'m_ref'"), std::string::npos);
  EXPECT_NE(error_of("nu = ").find("<config>:1"), std::string::npos);
}

TEST(Config, OddCutoffWithHalfBlockDiagnosticsCitesEvenRequirement) {
  const auto msg = error_of("pp_diagnostics = true\nsweep = [4, 7]");
  EXPECT_NE(msg.find("even"), std::string::npos) << msg;
  EXPECT_NO_THROW(parse_config("pp_diagnostics = true\nsweep = [4, 8]\nm = 6"));
}

TEST(Config, SaveLoadRoundTripsExactly) {
  auto cfg = parse_config("sweep = [6, 10]\nnu = 0.37\nt_skip = 0.3\nnorms = [\"H1\", \"LAP\"]\noutput_dir = \"a \\\"b\\\"\"");
  EXPECT_EQ(cfg.sweep, (std::vector<int>{6, 10}));
  const auto dir = scratch("config");
  save_config((dir / "c.toml").string(), cfg);
  const auto back = load_config((dir / "c.toml").string());
  // Relative paths resolve against the config file's directory.
  EXPECT_EQ(back.output_dir, (dir / "a \"b\"").string());
  cfg.output_dir = back.output_dir;
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(to_toml(parse_config(to_toml(cfg))), to_toml(cfg));
}

TEST(Config, HashIsStableAndSensitive) {
  const auto a = parse_config("seed = 3");
  EXPECT_EQ(config_hash(a), config_hash(parse_config("seed = 3")));
  EXPECT_NE(config_hash(a), config_hash(parse_config("seed = 4")));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_EQ(config_hash(a), config_hash(parse_config("seed = 3\noutput_dir = \"elsewhere\"")));
}

TEST(Config, BenchmarkProblemIsBandLimitedAndNormalized) {
  const auto cfg = parse_config("forcing_amplitude = 100.0");
  const auto spec = build_problem(cfg, 6);
  EXPECT_EQ(spec.M_out, 12);
  EXPECT_NEAR(norm_l2(spec.f), 100.0, 1e-12);
  EXPECT_NEAR(norm_l2(spec.u0), 1.0, 1e-14);
  for_each_mode(spec.f.cutoff(), [&](const ModeIndex& k) {
    if (k.j1 < 1 || k.j2 < 1) {
      EXPECT_EQ(spec.f(k), 0.0);
    }
  });
  EXPECT_TRUE(build_problem(cfg, 6).f == spec.f);
}

ErrorTable synthetic(double C, double rate) {
  ErrorTable t;
  for (int m : {4, 8, 12, 16}) {
    const double d = 1.0 / ((m + 1.0) * (m + 1.0));
    t.rows.push_back(ErrorRow{m, d, 0, Norm::L2, C * std::pow(d, rate), 2 * C * std::pow(d, rate)});
  }
  return t;
}

TEST(EocFit, RecoversExactRates) {
  EXPECT_NEAR(eoc_fit(synthetic(1.0, 1.75), 0, Norm::L2).slope, 1.75, 1e-12);
  const auto fit = eoc_fit(synthetic(7.0, 1.25), 0, Norm::L2);
  EXPECT_NEAR(fit.slope, 1.25, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(7.0), 1e-12);
  EXPECT_NEAR(eoc_fit(synthetic(7.0, 1.25), 0, Norm::L2, Measure::Sup).slope, 1.25, 1e-12);
}

TEST(EocFit, InvariantUnderScaling) {
  const double base = eoc_fit(synthetic(1.0, 2.3), 0, Norm::L2).slope;
  for (double c : {1e-8, 0.5, 3.0, 1e6}) {
    EXPECT_NEAR(eoc_fit(synthetic(c, 2.3), 0, Norm::L2).slope, base, 1e-12);
  }
}

TEST(EocFit, ExcludesZerosWithWarningAndNeedsTwoPoints) {
  auto t = synthetic(1.0, 1.5);
  t.rows[1].err_T = 0.0;
  const auto fit = eoc_fit(t, 0, Norm::L2);
  EXPECT_EQ(fit.m_used, (std::vector<int>{4, 12, 16}));
  ASSERT_EQ(fit.warnings.size(), 1u);
  EXPECT_NEAR(fit.slope, 1.5, 1e-12);
  t.rows[2].err_T = 0.0;
  t.rows[3].err_T = std::nan("");
  EXPECT_THROW(eoc_fit(t, 0, Norm::L2), ValidationError);
  EXPECT_THROW(eoc_fit(t, 1, Norm::L2), ValidationError);
}

ProblemSpec small_problem() {
  auto cfg = parse_config("T = 0.1\nh = 0.01\nlevels = 2\nforcing_amplitude = 30.0");
  return build_problem(cfg, 4);
}

TEST(ErrorTable, IdenticalTrajectoriesGiveZeroErrors) {
  const auto ladder = run_ladder(small_problem());
  Trajectory ref(0.0, ladder.spec.h);
  for (const auto& s : ladder.levels[1].u.samples()) ref.push_back(s.resized(16));
  const auto table = error_table(ladder, ref, {Norm::L2, Norm::H1, Norm::LAP}, 0.05);
  ASSERT_EQ(table.rows.size(), 9u);
  for (const auto& r : table.rows) {
    EXPECT_DOUBLE_EQ(r.delta, 1.0 / 25.0);
    EXPECT_GE(r.err_T, 0.0);
    EXPECT_LE(r.err_T, r.err_sup);
    if (r.k == 1) {
      EXPECT_EQ(r.err_T, 0.0);
      EXPECT_EQ(r.err_sup, 0.0);
    }
  }
}

TEST(ErrorTable, ReferenceTailIsChargedToTheMethod) {
  const auto ladder = run_ladder(small_problem());
  SpectralField tail(kTwoPi, 16);
  tail.set(ModeIndex{12, 3, Variant::SMinus}, 1e-3);
  Trajectory ref(0.0, ladder.spec.h);
  for (const auto& s : ladder.levels[0].u.samples()) ref.push_back(s.resized(16) + tail);
  const auto table = error_table(ladder, ref, {Norm::L2}, 0.0);
  EXPECT_NEAR(table.rows[0].err_T, 1e-3, 1e-15);
}

TEST(ErrorTable, InterpolatesCoarserReferenceAndRejectsMismatchedGrids) {
  const auto spec = small_problem();
  const auto ladder = run_ladder(spec);
  const auto ref = run_reference(spec, 16, spec.h / 2);
  ASSERT_DOUBLE_EQ(ref.h(), spec.h);
  const auto direct = error_table(ladder, ref, {Norm::L2}, 0.0);
  // Every other ladder time falls between samples of the coarse reference.
  const auto interpolated = error_table(ladder, subsample(ref, 2), {Norm::L2}, 0.0);
  ASSERT_EQ(direct.rows.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(interpolated.rows[r].err_T, direct.rows[r].err_T);
    EXPECT_NEAR(interpolated.rows[r].err_sup, direct.rows[r].err_sup, 1e-3 * direct.rows[r].err_sup);
  }
  Trajectory shifted(0.05, spec.h);
  for (std::size_t i = 0; i < 6; ++i) shifted.push_back(ref[i + 5]);
  EXPECT_THROW(error_table(ladder, shifted, {Norm::L2}, 0.0), ValidationError);
  Trajectory coarse(0.0, spec.h);
  for (std::size_t i = 0; i < ref.size(); ++i) coarse.push_back(ref[i].resized(4));
  EXPECT_THROW(error_table(ladder, coarse, {Norm::L2}, 0.0), ValidationError);
}

TEST(ErrorTable, SteadySingleModeErrorsVanish) {
  const auto cfg = parse_config(read_file(fs::path(MGNS_SOURCE_DIR) / "configs" / "steady.toml"));
  const auto ref = compute_reference(cfg, cfg.m);
  const auto result = run_single(cfg, ref);
  for (const auto& r : result.table.rows) {
    EXPECT_LE(r.err_T, 1e-10);
    EXPECT_LE(r.err_sup, 1e-10);
  }
}

TEST(ErrorCsv, ReparsesBitExactly) {
  ErrorTable t = synthetic(0.123456789, 1.337);
  t.rows.push_back(ErrorRow{5, 1.0 / 36.0, 2, Norm::LAP, 5e-324, 1.7976931348623157e308});
  std::stringstream ss;
  write_error_csv(ss, t);
  EXPECT_EQ(read_error_csv(ss), t);
}

TEST(EocJson, ReparsesBitExactly) {
  const auto fit = eoc_fit(synthetic(3.3, 1.9), 0, Norm::L2);
  const auto doc = nlohmann::json::parse(eoc_json({fit}, "abc"));
  EXPECT_EQ(doc["config_hash"], "abc");
  EXPECT_EQ(doc["fits"][0]["slope"].get<double>(), fit.slope);
  EXPECT_EQ(doc["fits"][0]["intercept"].get<double>(), fit.intercept);
  EXPECT_EQ(doc["fits"][0]["points"], 4);
  EXPECT_EQ(doc["fits"][0]["predicted_slope"].get<double>(), 1.25);
}

TEST(SmallScale, FieldInsideLargeScalesHasNoSmallScales) {
  Trajectory tr(0.0, 0.1);
  for (int i = 0; i < 4; ++i) tr.push_back(random_field(4, 40 + i, 0.5, kTwoPi).resized(12));
  const auto diag = smallscale_diagnostics(tr, {4, 6, 8}, 0.0, true);
  for (const auto& r : diag.rows) {
    EXPECT_EQ(r.q_l2, 0.0);
    EXPECT_EQ(r.q_h1, 0.0);
    EXPECT_EQ(r.q_lap, 0.0);
    EXPECT_EQ(r.q_dt, 0.0);
  }
  EXPECT_THROW(smallscale_diagnostics(tr, {12}, 0.0), ValidationError);
  EXPECT_THROW(smallscale_diagnostics(tr, {5}, 0.0, true), ValidationError);
}

TEST(SmallScale, TimeDerivativeColumnMatchesDecayingMode) {
  const ModeIndex mode{5, 2, Variant::CMinus};
  const auto s = exact_special_solution(SpecialKind::Decay, mode, 1.0, kTwoPi, 0.05);
  const double h = 1e-3, rate = 0.05 * eigenvalue(5, 2, kTwoPi);
  const auto tr = s.trajectory(1.0, h, 8);
  const auto diag = smallscale_diagnostics(tr, {4}, 0.5);
  const double exact = rate * std::exp(-rate * 0.5);
  EXPECT_NEAR(diag.rows[0].q_dt, exact, h * rate * rate);
  EXPECT_NEAR(diag.rows[0].q_l2, std::exp(-rate * 0.5), 1e-14);
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::vector<const char*> argv{"mgns"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto path = dir / "cfg.toml";
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

const char* kQuick = "T = 0.1\nh = 0.01\nlevels = 2\nm = 4\nsweep = [4, 6]\nnorms = [\"L2\", \"H1\"]\n"
                     "forcing_amplitude = 30.0\nsave_stride = 5\n";

TEST(Cli, UsageErrorsExitWithOne) {
  std::string out, err;
  EXPECT_EQ(cli({}, &out, &err), 1);
  EXPECT_EQ(cli({"selftest", "--frobnicate"}, &out, &err), 1);
  EXPECT_NE(err.find("frobnicate"), std::string::npos);
  EXPECT_NE(err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({"run"}), 1);
  EXPECT_EQ(cli({"launch"}), 1);
  EXPECT_EQ(cli({"run", "--config", "/nonexistent/cfg.toml"}), 1);
  EXPECT_EQ(cli({"--help"}, &out), 0);
  EXPECT_NE(out.find("converge"), std::string::npos);
}

TEST(Cli, ValidationAndNumericalFailuresMapToExitCodes) {
  const auto dir = scratch("cli_codes");
  EXPECT_EQ(cli({"run", "--config", write_config(dir, "nu = -1").string()}), 1);
  EXPECT_EQ(cli({"run", "--config", write_config(dir, kQuick).string(), "--levels", "-1"}), 1);
  std::string err;
  const auto blowup = write_config(dir, "T = 1.0\nh = 0.25\nm = 4\nforcing_amplitude = 1e12\nsave_stride = 1\n");
  EXPECT_EQ(cli({"run", "--config", blowup.string(), "--out", (dir / "o").string()}, nullptr, &err), 2);
  EXPECT_NE(err.find("numerical failure"), std::string::npos) << err;
}

TEST(Cli, SelftestPasses) {
  std::string out;
  EXPECT_EQ(cli({"selftest"}, &out), 0) << out;
  EXPECT_EQ(out.find("FAIL"), std::string::npos) << out;
}

TEST(Cli, RunWithLevelZeroIsPlainGalerkin) {
  const auto dir = scratch("cli_run");
  const auto cfg_path = write_config(dir, kQuick);
  ASSERT_EQ(cli({"run", "--config", cfg_path.string(), "--out", (dir / "o").string(), "--levels", "0"}), 0);
  std::ifstream csv(dir / "o" / "errors.csv");
  const auto table = read_error_csv(csv);
  ASSERT_EQ(table.rows.size(), 2u);
  for (const auto& r : table.rows) EXPECT_EQ(r.k, 0);
  auto cfg = load_config(cfg_path.string());
  cfg.levels = 0;
  const auto ladder = run_ladder(build_problem(cfg, 4));
  const auto saved = load_trajectory((dir / "o" / "ladder" / "level_0" / "p").string());
  EXPECT_TRUE(saved.back() == subsample(ladder.levels[0].p, 5).back());
}

TEST(Cli, PostprocessOnlyMatchesFullRun) {
  const auto dir = scratch("cli_pp");
  const auto cfg_path = write_config(dir, kQuick);
  ASSERT_EQ(cli({"run", "--config", cfg_path.string(), "--out", (dir / "full").string()}), 0);
  ASSERT_EQ(cli({"run", "--config", cfg_path.string(), "--out", (dir / "pp").string(), "--postprocess-only"}), 0);
  const auto full = load_trajectory((dir / "full" / "ladder" / "level_2" / "u").string());
  const auto pp = load_trajectory((dir / "pp" / "ladder" / "level_2" / "u").string());
  ASSERT_EQ(pp.size(), 1u);
  EXPECT_TRUE(pp.back() == full.back());
}

TEST(Cli, ConvergeIsByteDeterministic) {
  const auto dir = scratch("cli_converge");
  const auto cfg_path = write_config(dir, kQuick);
  ASSERT_EQ(cli({"converge", "--config", cfg_path.string(), "--out", (dir / "a").string()}), 0);
  ASSERT_EQ(cli({"converge", "--config", cfg_path.string(), "--out", (dir / "b").string()}), 0);
  for (const char* name : {"errors.csv", "eoc.json", "run_m4/ladder.json", "run_m6/level_2/q/sample_000001.csv"}) {
    const auto a = read_file(dir / "a" / name);
    EXPECT_FALSE(a.empty()) << name;
    EXPECT_EQ(a, read_file(dir / "b" / name)) << name;
  }
  std::string out;
  ASSERT_EQ(cli({"converge", "--config", cfg_path.string(), "--out", (dir / "c").string(), "--seed", "99"}, &out), 0);
  EXPECT_NE(read_file(dir / "a" / "errors.csv"), read_file(dir / "c" / "errors.csv"));
}

TEST(Cli, DiagWritesTableAndFits) {
  const auto dir = scratch("cli_diag");
  const auto cfg_path = write_config(dir, std::string(kQuick) + "pp_diagnostics = true\n");
  ASSERT_EQ(cli({"diag", "--config", cfg_path.string(), "--out", (dir / "d").string()}), 0);
  const auto csv = read_file(dir / "d" / "diag.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m,delta,q_l2,q_h1,q_lap,q_dt,delta1,pq_l2,pq_h1,pp_residual");
  const auto doc = nlohmann::json::parse(read_file(dir / "d" / "diag.json"));
  EXPECT_EQ(doc["fits"][0]["column"], "q_l2");
}

}  // namespace
}  // namespace mgns
