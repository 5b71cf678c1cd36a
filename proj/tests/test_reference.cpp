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

#include "mgns/errors.hpp"
#include "mgns/nonlinear.hpp"
#include "mgns/reference.hpp"

namespace mgns {
namespace {

constexpr double kTwoPi = 6.283185307179586;

ProblemSpec special_problem(const SpecialSolution& s, int M_out) {
  ProblemSpec spec(s.forcing(M_out), s.at(0.0, M_out));
  spec.l = s.l;
  spec.nu = s.nu;
  spec.m = M_out / 2;
  spec.M_out = M_out;
  spec.T = 1.0;
  spec.h = 1e-3;
  return spec;
}

TEST(SpecialSolution, ClosedFormsAtTimeZeroAndLater) {
  const ModeIndex mode{1, 2, Variant::SMinus};
  const auto decay = exact_special_solution(SpecialKind::Decay, mode, 0.7, kTwoPi, 0.9);
  const auto steady = exact_special_solution(SpecialKind::Steady, mode, 0.7, kTwoPi, 0.9);
  EXPECT_DOUBLE_EQ(decay.at(0.0, 3)(mode), 0.7);
  EXPECT_DOUBLE_EQ(steady.at(2.5, 3)(mode), 0.7);
  EXPECT_TRUE(decay.forcing(3).is_zero());
  EXPECT_THROW(exact_special_solution(SpecialKind::Decay, ModeIndex{0, 1, Variant::SMinus}, 1.0, kTwoPi, 1.0),
               ValidationError);
}

TEST(SpecialSolution, ResidualOfClosedFormVanishes) {
  for (auto kind : {SpecialKind::Decay, SpecialKind::Steady}) {
    for_each_mode(3, [&](const ModeIndex& mode) {
      const auto s = exact_special_solution(kind, mode, 1.1, 2.0, 0.6);
      for (double t : {0.0, 0.3, 1.0}) {
        const auto u = s.at(t, 3);
        const auto residual = s.time_derivative_at(t, 3) + nuA(u, s.nu) + bilinear_B_oracle(u, u, 3) - s.forcing(3);
        EXPECT_LE(residual.max_abs(), 1e-14 * (1.0 + nuA(u, s.nu).max_abs()));
      }
    });
  }
}

TEST(RunReference, ReproducesSpecialSolutions) {
  for (auto kind : {SpecialKind::Decay, SpecialKind::Steady}) {
    const auto s = exact_special_solution(kind, ModeIndex{1, 1, Variant::CPlus}, 0.8, kTwoPi, 1.0);
    const auto spec = special_problem(s, 4);
    const auto ref = run_reference(spec, 8, 2.5e-4);
    const auto exact = s.trajectory(spec.T, spec.h, 8);
    ASSERT_EQ(ref.size(), exact.size());
    EXPECT_DOUBLE_EQ(ref.h(), spec.h);
    EXPECT_EQ(ref.meta().producer, "reference");
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_LT(max_abs_diff(ref[i], exact[i]), 1e-12) << i;
  }
}

ProblemSpec smooth_forced_problem(double T) {
  SpectralField f(kTwoPi, 2);
  const auto r = random_field(2, 7, 0.0, kTwoPi);
  for_each_mode(2, [&](const ModeIndex& k) {
    if (k.j1 >= 1 && k.j2 >= 1) f.set(k, r(k));
  });
  f *= 30.0 / norm_l2(f);
  auto u0 = random_field(6, 8, 1.0, kTwoPi);
  u0 *= 1.0 / norm_l2(u0);
  ProblemSpec spec(f, u0);
  spec.m = 4;
  spec.M_out = 8;
  spec.T = T;
  spec.h = 0.005;
  return spec;
}

TEST(RunReference, DoublingResolutionChangesLittle) {
  const auto spec = smooth_forced_problem(0.5);
  const auto coarse = run_reference(spec, 16, spec.h);
  const auto fine = run_reference(spec, 32, spec.h);
  EXPECT_LT(norm_l2(coarse.back().resized(32) - fine.back()), 1e-9);
}

TEST(RunReference, UnforcedEnergyIsNonIncreasing) {
  auto spec = smooth_forced_problem(0.5);
  spec.f = SpectralField(kTwoPi, 1);
  spec.u0 *= 5.0;
  const auto ref = run_reference(spec, 16, spec.h);
  for (std::size_t i = 1; i < ref.size(); ++i) EXPECT_LE(norm_l2(ref[i]), norm_l2(ref[i - 1]));
}

TEST(RunReference, SampledOnTheCoarseGridAndDeterministic) {
  const auto spec = smooth_forced_problem(0.1);
  const auto a = run_reference(spec, 16, spec.h / 4, Exec::Serial);
  const auto b = run_reference(spec, 16, spec.h / 4, Exec::Parallel);
  EXPECT_EQ(a.size(), 21u);
  EXPECT_DOUBLE_EQ(a.h(), spec.h);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i] == b[i]);
}

TEST(RunReference, RejectsUnderResolvedSettings) {
  const auto spec = smooth_forced_problem(0.1);
  EXPECT_THROW(run_reference(spec, 15, spec.h), ValidationError);
  EXPECT_THROW(run_reference(spec, 16, 2 * spec.h), ValidationError);
  auto rough = spec;
  rough.u0 = random_field(20, 1, 1.0, kTwoPi);
  EXPECT_THROW(run_reference(rough, 16, spec.h), ValidationError);
}

}  // namespace
}  // namespace mgns
