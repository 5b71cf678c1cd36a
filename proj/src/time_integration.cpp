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

#include "mgns/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "mgns/errors.hpp"
#include "mgns/numfmt.hpp"

namespace mgns {

namespace fs = std::filesystem;

Trajectory::Trajectory(double t0, double h, TrajectoryMeta meta) : t0_(t0), h_(h), meta_(std::move(meta)) {
  if (!(h > 0) || !std::isfinite(h)) throw ValidationError("Trajectory: step must be positive");
}

void Trajectory::push_back(SpectralField s) {
  if (!samples_.empty()) {
    const auto& first = samples_.front();
    if (s.cutoff() != first.cutoff() || s.period() != first.period()) {
      throw ValidationError("Trajectory: sample cutoff/period mismatch");
    }
  }
  samples_.push_back(std::move(s));
}

std::optional<std::size_t> Trajectory::index_of(double t) const {
  if (samples_.empty()) return std::nullopt;
  const double r = (t - t0_) / h_;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) > 1e-9 || nearest < 0 || nearest > static_cast<double>(samples_.size() - 1)) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(nearest);
}

std::size_t step_count(double T, double h) {
  if (!(h > 0)) throw ValidationError("step must be positive");
  if (!(T > 0)) throw ValidationError("time horizon must be positive");
  const double r = T / h;
  const double n = std::round(r);
  if (n < 1 || std::abs(n * h - T) > 1e-12 * T) {
    throw ValidationError("step " + format_double(h) + " does not divide horizon " + format_double(T));
  }
  return static_cast<std::size_t>(n);
}

namespace {

struct Factors {
  std::vector<double> full;  // exp(-nu lambda h)
  std::vector<double> half;  // exp(-nu lambda h / 2)
};

Factors viscous_factors(const SpectralField& shape, double nu, double h) {
  Factors f;
  f.full.assign(shape.coeffs().size(), 1.0);
  f.half.assign(shape.coeffs().size(), 1.0);
  for_each_mode(shape.cutoff(), [&](const ModeIndex& k) {
    const double lam = eigenvalue(k.j1, k.j2, shape.period());
    const std::size_t i = shape.slot(k.j1, k.j2, k.variant);
    f.full[i] = std::exp(-nu * lam * h);
    f.half[i] = std::exp(-nu * lam * h / 2);
  });
  return f;
}

bool all_finite(const SpectralField& u) {
  for (double x : u.coeffs()) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

Trajectory integrate(const SpectralField& initial, double nu, const NonlinearRhs& rhs, double T,
                     const IntegratorConfig& cfg, TrajectoryMeta meta) {
  if (!(nu > 0)) throw ValidationError("integrate: viscosity must be positive");
  if (cfg.sample_stride < 1) throw ValidationError("integrate: sample_stride must be >= 1");
  const std::size_t steps = step_count(T, cfg.h);
  const auto stride = static_cast<std::size_t>(cfg.sample_stride);
  if (steps % stride != 0) throw ValidationError("integrate: sample_stride must divide the step count");

  const double h = cfg.h;
  const Factors ef = viscous_factors(initial, nu, h);
  const std::size_t size = initial.coeffs().size();
  const bool par = cfg.exec == Exec::Parallel;

  Trajectory traj(0.0, h * static_cast<double>(stride), std::move(meta));
  SpectralField c = initial;
  traj.push_back(c);
  SpectralField stage = initial;

  auto checked = [&](const SpectralField& k) -> const SpectralField& {
    if (k.cutoff() != initial.cutoff() || k.period() != initial.period()) {
      throw ValidationError("integrate: nonlinear term returned a field of different shape");
    }
    return k;
  };

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const auto cc = c.coeffs();
    auto st = stage.coeffs();

    const SpectralField k1 = rhs(c, t);
    const auto a1 = checked(k1).coeffs();
#pragma omp parallel for if (par) schedule(static)
    for (std::size_t i = 0; i < size; ++i) st[i] = ef.half[i] * (cc[i] + 0.5 * h * a1[i]);

    const SpectralField k2 = rhs(stage, t + 0.5 * h);
    const auto a2 = checked(k2).coeffs();
#pragma omp parallel for if (par) schedule(static)
    for (std::size_t i = 0; i < size; ++i) st[i] = ef.half[i] * cc[i] + 0.5 * h * a2[i];

    const SpectralField k3 = rhs(stage, t + 0.5 * h);
    const auto a3 = checked(k3).coeffs();
#pragma omp parallel for if (par) schedule(static)
    for (std::size_t i = 0; i < size; ++i) st[i] = ef.full[i] * cc[i] + h * ef.half[i] * a3[i];

    const SpectralField k4 = rhs(stage, t + h);
    const auto a4 = checked(k4).coeffs();
    auto cn = c.coeffs();
#pragma omp parallel for if (par) schedule(static)
    for (std::size_t i = 0; i < size; ++i) {
      cn[i] = ef.full[i] * cn[i] +
              h / 6.0 * (ef.full[i] * a1[i] + 2.0 * ef.half[i] * (a2[i] + a3[i]) + a4[i]);
    }

    if (!all_finite(c)) {
      throw NumericalError("integrate: non-finite state at step " + std::to_string(n + 1) + " (t = " +
                           format_double(static_cast<double>(n + 1) * h) + ")");
    }
    if ((n + 1) % stride == 0) traj.push_back(c);
  }
  return traj;
}

SpectralField sample_interpolate(const Trajectory& traj, double t) {
  if (traj.empty()) throw ValidationError("sample_interpolate: empty trajectory");
  const double r = (t - traj.t0()) / traj.h();
  const double last = static_cast<double>(traj.size() - 1);
  if (r < -1e-9 || r > last + 1e-9) {
    throw ValidationError("sample_interpolate: t = " + format_double(t) + " outside [" + format_double(traj.t0()) +
                          ", " + format_double(traj.t_end()) + "]");
  }
  if (auto idx = traj.index_of(t)) return traj[*idx];

  const auto n = static_cast<std::ptrdiff_t>(traj.size());
  const auto i = static_cast<std::ptrdiff_t>(std::floor(r));
  const std::ptrdiff_t npts = std::min<std::ptrdiff_t>(4, n);
  const std::ptrdiff_t base = std::clamp<std::ptrdiff_t>(i - 1, 0, n - npts);

  SpectralField out(traj[0].period(), traj[0].cutoff());
  for (std::ptrdiff_t j = 0; j < npts; ++j) {
    double w = 1.0;
    for (std::ptrdiff_t k = 0; k < npts; ++k) {
      if (k != j) w *= (r - static_cast<double>(base + k)) / static_cast<double>(j - k);
    }
    out.axpy(w, traj[static_cast<std::size_t>(base + j)]);
  }
  return out;
}

SpectralField time_derivative(const Trajectory& traj, std::size_t index) {
  if (traj.size() < 2) throw ValidationError("time_derivative: need at least two samples");
  if (index >= traj.size()) throw ValidationError("time_derivative: index out of range");
  const std::size_t hi = index == 0 ? 1 : index;
  SpectralField d = traj[hi] - traj[hi - 1];
  d *= 1.0 / traj.h();
  return d;
}

void save_trajectory(const std::string& dir, const Trajectory& traj) {
  fs::create_directories(dir);
  nlohmann::ordered_json meta;
  meta["t0"] = traj.t0();
  meta["h"] = traj.h();
  meta["count"] = traj.size();
  meta["producer"] = traj.meta().producer;
  meta["component"] = traj.meta().component;
  meta["level"] = traj.meta().level;
  meta["config_hash"] = traj.meta().config_hash;
  std::ofstream(fs::path(dir) / "meta.json", std::ios::binary) << meta.dump(2) << '\n';
  char name[32];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(name, sizeof name, "sample_%06zu.csv", i);
    save_field((fs::path(dir) / name).string(), traj[i]);
  }
}

Trajectory load_trajectory(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "meta.json", std::ios::binary);
  if (!is) throw ValidationError("load_trajectory: missing meta.json in " + dir);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("load_trajectory: bad meta.json: ") + e.what());
  }
  TrajectoryMeta tm;
  tm.producer = meta.value("producer", "");
  tm.component = meta.value("component", "");
  tm.level = meta.value("level", -1);
  tm.config_hash = meta.value("config_hash", "");
  Trajectory traj(meta.at("t0").get<double>(), meta.at("h").get<double>(), tm);
  const auto count = meta.at("count").get<std::size_t>();
  char name[32];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(name, sizeof name, "sample_%06zu.csv", i);
    traj.push_back(load_field((fs::path(dir) / name).string()));
  }
  return traj;
}

Trajectory subsample(const Trajectory& traj, std::size_t stride) {
  if (stride < 1) throw ValidationError("subsample: stride must be >= 1");
  Trajectory out(traj.t0(), traj.h() * static_cast<double>(stride), traj.meta());
  for (std::size_t i = 0; i < traj.size(); i += stride) out.push_back(traj[i]);
  return out;
}

}  // namespace mgns
