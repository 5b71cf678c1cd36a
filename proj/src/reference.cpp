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

#include "mgns/reference.hpp"

#include <cmath>

#include "mgns/errors.hpp"
#include "mgns/nonlinear.hpp"

namespace mgns {

Trajectory run_reference(const ProblemSpec& spec, int M_ref, double h_ref, Exec exec,
                         const std::string& config_hash) {
  validate(spec);
  if (M_ref < 2 * spec.M_out) {
    throw ValidationError("run_reference: M_ref = " + std::to_string(M_ref) + " must be >= 2 M_out = " +
                          std::to_string(2 * spec.M_out));
  }
  if (!(h_ref > 0) || h_ref > spec.h) throw ValidationError("run_reference: need 0 < h_ref <= h");
  if (spec.u0.support_cutoff() > M_ref) throw ValidationError("run_reference: initial field exceeds M_ref");

  const double ratio = spec.h / h_ref;
  const double rounded = std::round(ratio);
  IntegratorConfig cfg;
  cfg.h = h_ref;
  cfg.exec = exec;
  cfg.sample_stride = std::abs(ratio - rounded) <= 1e-9 * ratio ? static_cast<int>(rounded) : 1;

  const SpectralField f = spec.f.resized(M_ref);
  NonlinearRhs rhs = [&](const SpectralField& u, double) {
    SpectralField out = f;
    out -= bilinear_B(u, u, M_ref, exec);
    return out;
  };
  try {
    return integrate(spec.u0.resized(M_ref), spec.nu, rhs, spec.T, cfg,
                     TrajectoryMeta{"reference", "u", -1, config_hash});
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("reference: ") + e.what());
  }
}

SpectralField SpecialSolution::forcing(int cutoff) const {
  SpectralField f(l, cutoff);
  if (kind == SpecialKind::Steady) f.set(mode, amplitude * nu * eigenvalue(mode.j1, mode.j2, l));
  return f;
}

SpectralField SpecialSolution::at(double t, int cutoff) const {
  SpectralField u(l, cutoff);
  const double decay = kind == SpecialKind::Decay ? std::exp(-nu * eigenvalue(mode.j1, mode.j2, l) * t) : 1.0;
  u.set(mode, amplitude * decay);
  return u;
}

SpectralField SpecialSolution::time_derivative_at(double t, int cutoff) const {
  SpectralField d(l, cutoff);
  if (kind == SpecialKind::Decay) {
    const double lam = eigenvalue(mode.j1, mode.j2, l);
    d.set(mode, -nu * lam * amplitude * std::exp(-nu * lam * t));
  }
  return d;
}

Trajectory SpecialSolution::trajectory(double T, double h, int cutoff) const {
  Trajectory traj(0.0, h, TrajectoryMeta{"special", "u", -1, {}});
  const std::size_t n = step_count(T, h);
  for (std::size_t i = 0; i <= n; ++i) traj.push_back(at(static_cast<double>(i) * h, cutoff));
  return traj;
}

SpecialSolution exact_special_solution(SpecialKind kind, const ModeIndex& mode, double amplitude, double l,
                                       double nu) {
  if (!is_canonical(mode)) throw ValidationError("exact_special_solution: mode is not canonical");
  if (!(l > 0) || !(nu > 0)) throw ValidationError("exact_special_solution: need l > 0 and nu > 0");
  return SpecialSolution{kind, mode, amplitude, l, nu};
}

}  // namespace mgns
