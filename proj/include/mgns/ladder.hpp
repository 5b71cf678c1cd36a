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

#pragma once

// Multi-level modified Galerkin ladder.
//
// Level 0 integrates the Galerkin system for p0 and reconstructs
// q0 = Phi0(p0). Level k >= 1 integrates the large-scale equation with
// q_{k-1} frozen into the convective term, then rebuilds q_k algebraically
// from p_k and the stored lower-level small scales. Every level restarts
// from P u0 and uses the same time grid.

#include <optional>
#include <string>
#include <vector>

#include "mgns/kernels.hpp"
#include "mgns/spectral_basis.hpp"
#include "mgns/time_integration.hpp"

namespace mgns {

struct ProblemSpec {
  double l = 6.283185307179586;
  double nu = 1.0;
  SpectralField f;   // forcing, band-limited, zero mean by construction
  int m = 4;         // Galerkin cutoff
  int M_out = 8;     // outer cutoff of the small-scale space
  double T = 1.0;
  double h = 1e-3;
  SpectralField u0;  // initial velocity
  int K = 0;         // highest ladder level

  ProblemSpec(SpectralField forcing, SpectralField initial)
      : f(std::move(forcing)), u0(std::move(initial)) {}
};

/// Throws ValidationError naming the violated constraint.
void validate(const ProblemSpec& spec);

/// Small-scale reconstruction context shared by the maps below.
struct ScaleSplit {
  int m = 0;      // P block: max(j1, j2) <= m
  int M_out = 0;  // Q block truncated at max(j1, j2) <= M_out
  double nu = 1.0;
  Exec exec = Exec::Parallel;
};

/// Q_m B(a, b) truncated at M_out.
SpectralField q_convection(const SpectralField& a, const SpectralField& b, const ScaleSplit& s);

/// Phi0(p) = (nu A)^{-1} [Qf - Q B(p)].
SpectralField phi0(const SpectralField& p, const SpectralField& Qf, const ScaleSplit& s);

/// q1 = (nu A)^{-1} [Qf - Q B(p1) - Q B(p1, q0) - Q B(q0, p1)].
SpectralField q1_map(const SpectralField& p1, const SpectralField& q0, const SpectralField& Qf,
                     const ScaleSplit& s);

/// q_{k+2} = (nu A)^{-1} [Qf - Q B(p_{k+2}) - Q B(p_{k+2}, q_{k+1})
///                        - Q B(q_{k+1}, p_{k+2}) - Q B(q_k, q_k) - q_k'].
SpectralField qk2_map(const SpectralField& p, const SpectralField& q_prev, const SpectralField& q_prev2,
                      const SpectralField& q_prev2_dt, const SpectralField& Qf, const ScaleSplit& s);

/// Nonlinear tendency of the large-scale equation:
/// Pf - P_m B(p + q_prev, p + q_prev), returned with cutoff m.
SpectralField level_rhs(const SpectralField& p, const SpectralField* q_prev, const SpectralField& Pf, int m,
                        Exec exec = Exec::Parallel);

struct LevelResult {
  int k = 0;
  Trajectory p;
  Trajectory q;
  Trajectory u;
  double wall_clock_s = 0;
};

struct LadderResult {
  std::vector<LevelResult> levels;
  ProblemSpec spec;
  SpectralParams params;
};

struct LadderOptions {
  /// Build the last level's q only at t = T (q and u of that level then
  /// hold a single sample at T).
  bool postprocess_only = false;
  Exec exec = Exec::Parallel;
  std::string config_hash;
};

LadderResult run_ladder(const ProblemSpec& spec, const LadderOptions& opts = {});

/// Small-scale part of level `k` at sample index i of the lower levels,
/// given the level's large-scale state p at that time.
SpectralField small_scale_at(int k, const SpectralField& p, const std::vector<LevelResult>& lower, std::size_t i,
                             const SpectralField& Qf, const ScaleSplit& s);

/// u_k(T) = p_k(T) + q_k(T) with q_k evaluated once at T from the stored
/// lower levels (which must cover the full grid).
SpectralField postprocess_at_T(int k, const SpectralField& p_T, const std::vector<LevelResult>& lower,
                               const SpectralField& Qf, const ScaleSplit& s);

/// Writes level_<k>/{p,q,u} trajectory directories (every save_stride-th
/// sample), forcing.csv, initial.csv and ladder.json.
void save_ladder(const std::string& dir, const LadderResult& result, const std::string& config_hash,
                 std::size_t save_stride = 1);

}  // namespace mgns
