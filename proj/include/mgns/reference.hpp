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

// Resolved pseudo-spectral solution of the full equation, used as the error
// oracle, plus closed-form single-mode solutions.

#include <string>

#include "mgns/kernels.hpp"
#include "mgns/ladder.hpp"
#include "mgns/spectral_basis.hpp"
#include "mgns/time_integration.hpp"

namespace mgns {

/// Integrates du/dt + nu A u + B(u, u) = f on all modes up to M_ref with
/// step h_ref. Samples are kept on the ladder grid (every spec.h) when
/// spec.h / h_ref is an integer, otherwise at every reference step.
/// Requires M_ref >= 2 spec.M_out and h_ref <= spec.h.
Trajectory run_reference(const ProblemSpec& spec, int M_ref, double h_ref, Exec exec = Exec::Parallel,
                         const std::string& config_hash = {});

enum class SpecialKind { Decay, Steady };

/// Exact solutions built from one shear mode w_k, for which B(w_k, w_k) = 0:
///   Decay:  u(t) = a exp(-nu lambda_k t) w_k, f = 0
///   Steady: u(t) = a w_k,                    f = a nu lambda_k w_k
struct SpecialSolution {
  SpecialKind kind;
  ModeIndex mode;
  double amplitude;
  double l;
  double nu;

  SpectralField forcing(int cutoff) const;
  SpectralField at(double t, int cutoff) const;
  /// Closed-form du/dt.
  SpectralField time_derivative_at(double t, int cutoff) const;
  Trajectory trajectory(double T, double h, int cutoff) const;
};

SpecialSolution exact_special_solution(SpecialKind kind, const ModeIndex& mode, double amplitude, double l,
                                       double nu);

}  // namespace mgns
