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

// Fixed-step integration of c' = -nu A c + N(c, t) in the spectral basis.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mgns/kernels.hpp"
#include "mgns/spectral_basis.hpp"

namespace mgns {

struct TrajectoryMeta {
  std::string producer;     // "ladder", "reference", "special", ...
  std::string component;    // "p", "q", "u" or empty
  int level = -1;           // ladder level, -1 if not applicable
  std::string config_hash;  // hex digest of the producing configuration
};

/// Uniformly sampled time series: sample i lives at t0 + i h.
class Trajectory {
 public:
  Trajectory(double t0, double h, TrajectoryMeta meta = {});

  double t0() const { return t0_; }
  double h() const { return h_; }
  double time(std::size_t i) const { return t0_ + static_cast<double>(i) * h_; }
  double t_end() const { return time(samples_.size() - 1); }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  const SpectralField& operator[](std::size_t i) const { return samples_[i]; }
  const SpectralField& back() const { return samples_.back(); }
  const std::vector<SpectralField>& samples() const { return samples_; }

  /// Appends a sample; it must share cutoff and period with the others.
  void push_back(SpectralField s);

  const TrajectoryMeta& meta() const { return meta_; }
  TrajectoryMeta& meta() { return meta_; }

  /// Index of the sample at time t, if t lies on the grid (to 1e-9 h).
  std::optional<std::size_t> index_of(double t) const;

 private:
  double t0_;
  double h_;
  std::vector<SpectralField> samples_;
  TrajectoryMeta meta_;
};

enum class Scheme { IFRK4 };

struct IntegratorConfig {
  double h = 1e-3;
  Scheme scheme = Scheme::IFRK4;
  int sample_stride = 1;  // keep every sample_stride-th step
  Exec exec = Exec::Parallel;
};

/// Nonlinear tendency N(c, t); must return a field with the state's cutoff.
using NonlinearRhs = std::function<SpectralField(const SpectralField&, double)>;

/// Integrates c' = -nu A c + N(c, t) over [0, T] with the Lawson
/// (integrating-factor) fourth-order Runge-Kutta scheme. The viscous
/// factors exp(-nu lambda_k h) are applied exactly. T must be a multiple of
/// h to 1e-12 relative. Throws NumericalError at the first non-finite step.
Trajectory integrate(const SpectralField& initial, double nu, const NonlinearRhs& rhs, double T,
                     const IntegratorConfig& cfg, TrajectoryMeta meta = {});

/// Number of steps of size h covering [0, T]; throws unless h divides T.
std::size_t step_count(double T, double h);

/// Four-point Lagrange interpolation in time, exact at grid points.
/// Throws ValidationError outside [t0, t_end].
SpectralField sample_interpolate(const Trajectory& traj, double t);

/// Backward difference (s_i - s_{i-1}) / h; forward difference at i = 0.
SpectralField time_derivative(const Trajectory& traj, std::size_t index);

/// Directory layout: meta.json plus sample_NNNNNN.csv in the field format.
void save_trajectory(const std::string& dir, const Trajectory& traj);
Trajectory load_trajectory(const std::string& dir);

/// Every stride-th sample, keeping the last one only if it falls on the
/// coarse grid.
Trajectory subsample(const Trajectory& traj, std::size_t stride);

}  // namespace mgns
