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

#include <nlohmann/json.hpp>

#include "mgns/errors.hpp"
#include "mgns/ladder.hpp"
#include "mgns/nonlinear.hpp"
#include "mgns/spectral_basis.hpp"

namespace mgns {
namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr int kM = 4;
constexpr int kMout = 8;
const ScaleSplit kSplit{kM, kMout, 0.8, Exec::Parallel};

SpectralField random_p(std::uint64_t seed) { return random_field(kM, seed, 0.5, kTwoPi); }

SpectralField random_q(std::uint64_t seed, int cutoff = kMout) {
  return project(random_field(cutoff, seed, 0.5, kTwoPi), Projection::Q_m, kM);
}

// Independent assembly: quadrature-based B instead of the FFT path.
SpectralField qB(const SpectralField& a, const SpectralField& b) {
  return project(bilinear_B_oracle(a, b, kMout), Projection::Q_m, kM);
}

TEST(Phi0, ZeroLargeScalesGiveInverseStokesOfForcing) {
  const auto Qf = random_q(1);
  EXPECT_TRUE(phi0(SpectralField(kTwoPi, kM), Qf, kSplit) == inv_nuA(Qf, kSplit.nu));
}

TEST(Phi0, SingleModeWithLargeScaleForcingVanishes) {
  for_each_mode(kM, [&](const ModeIndex& k) {
    SpectralField p(kTwoPi, kM);
    p.set(k, 1.3);
    EXPECT_LT(phi0(p, SpectralField(kTwoPi, kMout), kSplit).max_abs(), 1e-13);
  });
}

TEST(Phi0, MatchesCompositionalOracle) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto p = random_p(10 + seed);
    const auto Qf = random_q(20 + seed);
    const auto expected = inv_nuA(Qf - qB(p, p), kSplit.nu);
    const auto got = phi0(p, Qf, kSplit);
    EXPECT_TRUE(in_q_block(got, kM));
    EXPECT_LE(got.support_cutoff(), kMout);
    EXPECT_LT(max_abs_diff(got, expected), 1e-13);
  }
}

TEST(Q1Map, ReducesToPhi0BitForBit) {
  const auto p = random_p(3);
  const auto Qf = random_q(4);
  EXPECT_TRUE(q1_map(p, SpectralField(kTwoPi, kMout), Qf, kSplit) == phi0(p, Qf, kSplit));
  EXPECT_TRUE(q1_map(SpectralField(kTwoPi, kM), SpectralField(kTwoPi, kMout), Qf, kSplit) ==
              inv_nuA(Qf, kSplit.nu));
}

TEST(Q1Map, MatchesCompositionalOracle) {
  const auto p = random_p(5);
  const auto q0 = random_q(6);
  const auto Qf = random_q(7);
  const auto expected = inv_nuA(Qf - qB(p, p) - qB(p, q0) - qB(q0, p), kSplit.nu);
  EXPECT_LT(max_abs_diff(q1_map(p, q0, Qf, kSplit), expected), 1e-13);
}

TEST(Qk2Map, ReducesToPhi0BitForBit) {
  const auto p = random_p(8);
  const auto Qf = random_q(9);
  const SpectralField z(kTwoPi, kMout);
  EXPECT_TRUE(qk2_map(p, z, z, z, Qf, kSplit) == phi0(p, Qf, kSplit));
  EXPECT_TRUE(qk2_map(SpectralField(kTwoPi, kM), z, z, z, Qf, kSplit) == inv_nuA(Qf, kSplit.nu));
}

TEST(Qk2Map, MatchesCompositionalOracle) {
  const auto p = random_p(11);
  const auto q1 = random_q(12);
  const auto q0 = random_q(13);
  const auto dq0 = random_q(14);
  const auto Qf = random_q(15);
  const auto expected = inv_nuA(Qf - qB(p, p) - qB(p, q1) - qB(q1, p) - qB(q0, q0) - dq0, kSplit.nu);
  EXPECT_LT(max_abs_diff(qk2_map(p, q1, q0, dq0, Qf, kSplit), expected), 1e-13);
}

TEST(Maps, RejectSupportViolations) {
  const auto p = random_p(1);
  const auto q = random_q(2);
  const auto Qf = random_q(3);
  const auto wide = random_field(kMout, 4, 0.5, kTwoPi);
  EXPECT_THROW(phi0(wide, Qf, kSplit), ValidationError);
  EXPECT_THROW(phi0(p, wide, kSplit), ValidationError);
  EXPECT_THROW(q1_map(p, wide, Qf, kSplit), ValidationError);
  EXPECT_THROW(qk2_map(p, q, q, random_q(5, kMout + 2), Qf, kSplit), ValidationError);
  EXPECT_THROW(level_rhs(wide, nullptr, p, kM), ValidationError);
  EXPECT_THROW(level_rhs(p, &wide, p, kM), ValidationError);
}

TEST(LevelRhs, ForcingOnlyCases) {
  const auto Pf = random_p(21);
  EXPECT_TRUE(level_rhs(SpectralField(kTwoPi, kM), nullptr, Pf, kM) == Pf);
  SpectralField single(kTwoPi, kM);
  single.set(ModeIndex{2, 3, Variant::SMinus}, -0.4);
  EXPECT_LT(max_abs_diff(level_rhs(single, nullptr, Pf, kM), Pf), 1e-13);
}

TEST(LevelRhs, MatchesCompositionalOracle) {
  const auto p = random_p(22);
  const auto q = random_q(23);
  const auto f = random_field(kMout, 24, 0.0, kTwoPi);
  const auto w = p + q;
  const auto expected = project(f - bilinear_B_oracle(w, w, kMout), Projection::P_m, kM).resized(kM);
  const auto got = level_rhs(p, &q, project(f, Projection::P_m, kM).resized(kM), kM);
  EXPECT_EQ(got.cutoff(), kM);
  EXPECT_LT(max_abs_diff(got, expected), 1e-13);
}

ProblemSpec forced_problem(int K) {
  SpectralField f(kTwoPi, 2);
  const auto r = random_field(2, 7, 0.0, kTwoPi);
  for_each_mode(2, [&](const ModeIndex& k) {
    if (k.j1 >= 1 && k.j2 >= 1) f.set(k, r(k));
  });
  f *= 20.0 / norm_l2(f);
  ProblemSpec spec(f, random_field(6, 8, 1.0, kTwoPi));
  spec.m = kM;
  spec.M_out = kMout;
  spec.T = 0.2;
  spec.h = 0.01;
  spec.K = K;
  return spec;
}

TEST(RunLadder, SupportSeparationAndAssembly) {
  const auto res = run_ladder(forced_problem(3));
  ASSERT_EQ(res.levels.size(), 4u);
  for (const auto& lv : res.levels) {
    ASSERT_EQ(lv.p.size(), 21u);
    ASSERT_EQ(lv.q.size(), lv.p.size());
    for (std::size_t i = 0; i < lv.p.size(); ++i) {
      EXPECT_EQ(lv.p[i].cutoff(), kM);
      EXPECT_TRUE(in_q_block(lv.q[i], kM));
      EXPECT_LE(lv.q[i].support_cutoff(), kMout);
      EXPECT_TRUE(lv.u[i] == lv.p[i].resized(kMout) + lv.q[i]);
    }
  }
}

TEST(RunLadder, LevelZeroIsPlainGalerkin) {
  const auto spec = forced_problem(0);
  const auto res = run_ladder(spec);
  const auto Pf = project(spec.f, Projection::P_m, kM).resized(kM);
  const auto galerkin = integrate(
      spec.u0.resized(kM), spec.nu, [&](const SpectralField& p, double) { return Pf - bilinear_B(p, p, kM); },
      spec.T, IntegratorConfig{.h = spec.h});
  ASSERT_EQ(res.levels.size(), 1u);
  for (std::size_t i = 0; i < galerkin.size(); ++i) EXPECT_TRUE(res.levels[0].p[i] == galerkin[i]);
}

TEST(RunLadder, PostprocessOnlyMatchesFullRunBitwise) {
  const auto spec = forced_problem(2);
  const auto full = run_ladder(spec);
  const auto pp = run_ladder(spec, LadderOptions{.postprocess_only = true, .config_hash = {}});
  ASSERT_EQ(pp.levels.back().u.size(), 1u);
  EXPECT_DOUBLE_EQ(pp.levels.back().u.t0(), spec.T);
  EXPECT_TRUE(pp.levels.back().u.back() == full.levels.back().u.back());
  EXPECT_EQ(pp.levels[1].u.size(), full.levels[1].u.size());
}

TEST(RunLadder, PostprocessAtTMatchesLastSample) {
  const auto spec = forced_problem(3);
  const auto res = run_ladder(spec);
  const ScaleSplit split{kM, kMout, spec.nu, Exec::Parallel};
  const auto Qf = project(spec.f.resized(kMout), Projection::Q_m, kM);
  for (int k = 0; k <= 3; ++k) {
    const std::vector<LevelResult> lower(res.levels.begin(), res.levels.begin() + k);
    const auto& lv = res.levels[static_cast<std::size_t>(k)];
    EXPECT_TRUE(postprocess_at_T(k, lv.p.back(), lower, Qf, split) == lv.u.back()) << "k=" << k;
  }
}

TEST(RunLadder, DeterministicAcrossRunsAndExecution) {
  const auto spec = forced_problem(2);
  const auto a = run_ladder(spec, LadderOptions{.exec = Exec::Serial, .config_hash = {}});
  const auto b = run_ladder(spec, LadderOptions{.exec = Exec::Serial, .config_hash = {}});
  const auto c = run_ladder(spec, LadderOptions{.exec = Exec::Parallel, .config_hash = {}});
  for (std::size_t k = 0; k < a.levels.size(); ++k) {
    for (std::size_t i = 0; i < a.levels[k].u.size(); ++i) {
      EXPECT_TRUE(a.levels[k].u[i] == b.levels[k].u[i]);
      EXPECT_TRUE(a.levels[k].u[i] == c.levels[k].u[i]);
    }
  }
}

TEST(RunLadder, SteadySingleModeIsAbsorbedByEveryLevel) {
  SpectralField w(kTwoPi, kM);
  w.set(ModeIndex{1, 1, Variant::SPlus}, 0.9);
  ProblemSpec spec(nuA(w, 1.0), w);
  spec.m = kM;
  spec.M_out = kMout;
  spec.T = 1.0;
  spec.h = 1e-3;
  spec.K = 3;
  const auto res = run_ladder(spec);
  for (const auto& lv : res.levels) {
    for (std::size_t i = 0; i < lv.p.size(); i += 50) {
      EXPECT_LT(max_abs_diff(lv.p[i], w), 1e-11);
      EXPECT_LT(lv.q[i].max_abs(), 1e-11);
    }
  }
}

TEST(RunLadder, UnforcedSingleModeDecays) {
  SpectralField w(kTwoPi, kM);
  const ModeIndex mode{0, 2, Variant::CPlus};
  w.set(mode, 1.5);
  ProblemSpec spec(SpectralField(kTwoPi, 1), w);
  spec.m = kM;
  spec.M_out = kMout;
  spec.T = 1.0;
  spec.h = 1e-3;
  spec.K = 2;
  const auto res = run_ladder(spec, LadderOptions{.postprocess_only = true, .config_hash = {}});
  const auto expected = std::exp(-eigenvalue(0, 2, kTwoPi)) * w.resized(kMout);
  EXPECT_LT(max_abs_diff(res.levels.back().u.back(), expected), 1e-11);
}

// Level-0 energy balance: d/dt |p|^2 / 2 + nu ||p||^2 - (Pf, p) = 0 up to the
// centered-difference error.
double energy_residual(double h) {
  auto spec = forced_problem(0);
  spec.h = h;
  const auto res = run_ladder(spec);
  const auto& p = res.levels[0].p;
  const auto Pf = project(spec.f, Projection::P_m, kM).resized(kM);
  double worst = 0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double dE = (inner(p[i + 1], p[i + 1]) - inner(p[i - 1], p[i - 1])) / (4.0 * h);
    const double n1 = norm_h1(p[i]);
    worst = std::max(worst, std::abs(dE + spec.nu * n1 * n1 - inner(Pf, p[i])));
  }
  return worst;
}

TEST(RunLadder, GalerkinEnergyIdentityHoldsToSecondOrder) {
  const double r1 = energy_residual(0.01), r2 = energy_residual(0.005);
  EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.25) << r1 << " " << r2;
}

TEST(RunLadder, ValidationNamesTheProblem) {
  auto spec = forced_problem(1);
  spec.M_out = 1;
  EXPECT_THROW(run_ladder(spec), ValidationError);
  spec = forced_problem(1);
  spec.h = 0.03;
  EXPECT_THROW(run_ladder(spec), ValidationError);
  spec = forced_problem(1);
  spec.nu = 0.0;
  EXPECT_THROW(run_ladder(spec), ValidationError);
  spec = forced_problem(1);
  spec.f = random_field(kMout + 1, 1, 0.0, kTwoPi);
  EXPECT_THROW(run_ladder(spec), ValidationError);
}

TEST(SaveLadder, WritesManifestAndTrajectories) {
  const auto spec = forced_problem(1);
  const auto res = run_ladder(spec);
  const auto dir = std::filesystem::temp_directory_path() / "mgns_ladder_save";
  std::filesystem::remove_all(dir);
  save_ladder(dir.string(), res, "0123456789abcdef", 5);
  std::ifstream in(dir / "ladder.json");
  const auto manifest = nlohmann::json::parse(in);
  EXPECT_EQ(manifest["config_hash"], "0123456789abcdef");
  EXPECT_EQ(manifest["levels"].size(), 2u);
  const auto q1 = load_trajectory((dir / "level_1" / "q").string());
  const auto sub = subsample(res.levels[1].q, 5);
  ASSERT_EQ(q1.size(), sub.size());
  for (std::size_t i = 0; i < sub.size(); ++i) EXPECT_TRUE(q1[i] == sub[i]);
  EXPECT_TRUE(load_field((dir / "forcing.csv").string()) == spec.f);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mgns
