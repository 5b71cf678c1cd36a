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
#include "mgns/spectral_basis.hpp"

namespace mgns {
namespace {

TEST(Bilinear, SingleModeIsSelfAnnihilating) {
  for_each_mode(3, [&](const ModeIndex& k) {
    SpectralField w(2.0, 3);
    w.set(k, 1.7);
    EXPECT_LT(bilinear_B(w, w, 6).max_abs(), 1e-13);
    EXPECT_LT(bilinear_B_oracle(w, w, 6).max_abs(), 1e-13);
  });
}

TEST(Bilinear, FastPathMatchesOracle) {
  for (int cutoff : {2, 4, 6}) {
    for (int seed = 0; seed < 4; ++seed) {
      const auto u = random_field(cutoff, 100 + seed, 0.3, 1.7);
      const auto v = random_field(cutoff, 200 + seed, 0.3, 1.7);
      for (int out : {cutoff, 2 * cutoff, 3 * cutoff}) {
        const auto fast = bilinear_B(u, v, out);
        const auto slow = bilinear_B_oracle(u, v, out);
        EXPECT_EQ(fast.cutoff(), out);
        EXPECT_LT(max_abs_diff(fast, slow), 1e-12) << "cutoff " << cutoff << " out " << out;
      }
    }
  }
}

TEST(Bilinear, MixedCutoffsMatchOracle) {
  const auto u = random_field(3, 1, 0.2, 2.0);
  const auto v = random_field(7, 2, 0.2, 2.0);
  EXPECT_LT(max_abs_diff(bilinear_B(u, v, 5), bilinear_B_oracle(u, v, 5)), 1e-12);
  EXPECT_LT(max_abs_diff(bilinear_B(v, u, 10), bilinear_B_oracle(v, u, 10)), 1e-12);
}

TEST(Bilinear, SerialAndParallelAgreeBitwise) {
  const auto u = random_field(9, 5, 0.5, 6.0);
  const auto v = random_field(12, 6, 0.5, 6.0);
  EXPECT_TRUE(bilinear_B(u, v, 15, Exec::Serial) == bilinear_B(u, v, 15, Exec::Parallel));
}

TEST(Bilinear, OutputSaturatesAtSumOfCutoffs) {
  const auto u = random_field(3, 8, 0.0, 1.0);
  const auto v = random_field(4, 9, 0.0, 1.0);
  const auto b = bilinear_B(u, v, 12);
  EXPECT_EQ(b.cutoff(), 12);
  EXPECT_GT(b.max_abs(), 0.0);
  EXPECT_LE(b.support_cutoff(), 7);
}

TEST(Bilinear, LinearInEachArgument) {
  const auto u = random_field(4, 1, 0.3);
  const auto v = random_field(4, 2, 0.3);
  const auto b = bilinear_B_oracle(u, v, 8);
  EXPECT_LT(max_abs_diff(bilinear_B_oracle(2.5 * u, v, 8), 2.5 * b), 1e-13 * 2.5 * (1 + b.max_abs()));
  EXPECT_LT(max_abs_diff(bilinear_B_oracle(u, -3.0 * v, 8), -3.0 * b), 1e-13 * 3.0 * (1 + b.max_abs()));
  EXPECT_TRUE(bilinear_B_oracle(SpectralField(u.period(), 4), v, 8).is_zero());
}

TEST(Bilinear, UndersizedWorkspaceIsRejected) {
  BilinearWorkspace ws(16);
  const auto u = random_field(6, 1, 0.3);
  EXPECT_THROW(ws.apply(u, u, 6), ValidationError);
  BilinearWorkspace ok(BilinearWorkspace::required_grid(6, 6, 6));
  EXPECT_NO_THROW(ok.apply(u, u, 6));
  EXPECT_THROW(bilinear_B(u, random_field(6, 1, 0.3, 1.0), 6), ValidationError);
}

TEST(Trilinear, SkewSymmetryAndEnergyNeutrality) {
  for (int cutoff : {2, 4, 8}) {
    for (int seed = 0; seed < 10; ++seed) {
      const auto u = random_field(cutoff, 3 * seed, 0.5);
      const auto v = random_field(cutoff, 3 * seed + 1, 0.5);
      const auto w = random_field(cutoff, 3 * seed + 2, 0.5);
      const double scale = norm_h1(u) * norm_h1(v) * norm_h1(w);
      EXPECT_LT(std::abs(trilinear_b(u, v, v)), 1e-12 * norm_h1(u) * norm_h1(v) * norm_h1(v));
      EXPECT_LT(std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v)), 1e-12 * scale);
    }
  }
  const auto v = random_field(3, 1, 0.5);
  EXPECT_EQ(trilinear_b(SpectralField(v.period(), 3), v, v), 0.0);
}

TEST(Bilinear, LowBlockProductsStayInP) {
  for (int m : {4, 8}) {
    for (int seed = 0; seed < 5; ++seed) {
      const auto pp = project(random_field(m, seed, 0.2), Projection::P_p, m);
      const auto b = bilinear_B(pp, pp, 2 * m);
      EXPECT_LE(project(b, Projection::Q_m, m).max_abs(), 1e-13);
    }
  }
}

}  // namespace
}  // namespace mgns
