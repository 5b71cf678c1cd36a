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

#include "mgns/ladder.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mgns/errors.hpp"
#include "mgns/nonlinear.hpp"
#include "mgns/numfmt.hpp"

namespace mgns {

namespace fs = std::filesystem;

void validate(const ProblemSpec& spec) {
  auto fail = [](const std::string& what) { throw ValidationError("problem: " + what); };
  if (!(spec.l > 0) || !std::isfinite(spec.l)) fail("period l must be positive");
  if (!(spec.nu > 0) || !std::isfinite(spec.nu)) fail("viscosity nu must be positive");
  if (spec.m < 1) fail("cutoff m must be >= 1");
  if (spec.M_out < spec.m) fail("outer cutoff M_out must be >= m");
  if (!(spec.h > 0)) fail("step h must be positive");
  if (!(spec.T >= spec.h)) fail("horizon T must be >= h");
  if (spec.K < 0) fail("levels K must be >= 0");
  if (spec.f.period() != spec.l) fail("forcing period differs from l");
  if (spec.u0.period() != spec.l) fail("initial field period differs from l");
  if (!spec.f.is_valid()) fail("forcing has invalid coefficients");
  if (!spec.u0.is_valid()) fail("initial field has invalid coefficients");
  if (spec.f.support_cutoff() > spec.M_out) {
    fail("forcing must be band-limited within M_out = " + std::to_string(spec.M_out) + " (support reaches " +
         std::to_string(spec.f.support_cutoff()) + ")");
  }
  step_count(spec.T, spec.h);
}

namespace {

void require_p(const SpectralField& p, const ScaleSplit& s, const char* who) {
  if (!in_p_block(p, s.m)) {
    throw ValidationError(std::string(who) + ": large-scale input has coefficients outside the P block (m = " +
                          std::to_string(s.m) + ")");
  }
}

void require_q(const SpectralField& q, const ScaleSplit& s, const char* who) {
  if (!in_q_block(q, s.m) || q.support_cutoff() > s.M_out) {
    throw ValidationError(std::string(who) + ": small-scale input must live in the Q block between m = " +
                          std::to_string(s.m) + " and M_out = " + std::to_string(s.M_out));
  }
}

}  // namespace

SpectralField q_convection(const SpectralField& a, const SpectralField& b, const ScaleSplit& s) {
  return project(bilinear_B(a, b, s.M_out, s.exec), Projection::Q_m, s.m);
}

SpectralField phi0(const SpectralField& p, const SpectralField& Qf, const ScaleSplit& s) {
  require_p(p, s, "phi0");
  require_q(Qf, s, "phi0");
  SpectralField r = Qf.resized(s.M_out);
  r -= q_convection(p, p, s);
  return inv_nuA(r, s.nu);
}

SpectralField q1_map(const SpectralField& p1, const SpectralField& q0, const SpectralField& Qf,
                     const ScaleSplit& s) {
  require_p(p1, s, "q1_map");
  require_q(q0, s, "q1_map");
  require_q(Qf, s, "q1_map");
  SpectralField r = Qf.resized(s.M_out);
  r -= q_convection(p1, p1, s);
  r -= q_convection(p1, q0, s);
  r -= q_convection(q0, p1, s);
  return inv_nuA(r, s.nu);
}

SpectralField qk2_map(const SpectralField& p, const SpectralField& q_prev, const SpectralField& q_prev2,
                      const SpectralField& q_prev2_dt, const SpectralField& Qf, const ScaleSplit& s) {
  require_p(p, s, "qk2_map");
  require_q(q_prev, s, "qk2_map");
  require_q(q_prev2, s, "qk2_map");
  require_q(q_prev2_dt, s, "qk2_map");
  require_q(Qf, s, "qk2_map");
  SpectralField r = Qf.resized(s.M_out);
  r -= q_convection(p, p, s);
  r -= q_convection(p, q_prev, s);
  r -= q_convection(q_prev, p, s);
  r -= q_convection(q_prev2, q_prev2, s);
  r -= q_prev2_dt.resized(s.M_out);
  return inv_nuA(r, s.nu);
}

SpectralField level_rhs(const SpectralField& p, const SpectralField* q_prev, const SpectralField& Pf, int m,
                        Exec exec) {
  if (!in_p_block(p, m)) throw ValidationError("level_rhs: p has coefficients outside the P block");
  if (q_prev != nullptr && !in_q_block(*q_prev, m)) {
    throw ValidationError("level_rhs: q_prev has coefficients inside the P block");
  }
  SpectralField out = Pf.resized(m);
  if (q_prev == nullptr) {
    out -= bilinear_B(p, p, m, exec);
  } else {
    const SpectralField w = p + *q_prev;
    out -= bilinear_B(w, w, m, exec);
  }
  return out;
}

SpectralField small_scale_at(int k, const SpectralField& p, const std::vector<LevelResult>& lower, std::size_t i,
                             const SpectralField& Qf, const ScaleSplit& s) {
  if (k == 0) return phi0(p, Qf, s);
  if (lower.size() < static_cast<std::size_t>(k)) throw ValidationError("small_scale_at: missing lower levels");
  if (k == 1) return q1_map(p, lower[0].q[i], Qf, s);
  const Trajectory& q2 = lower[static_cast<std::size_t>(k - 2)].q;
  return qk2_map(p, lower[static_cast<std::size_t>(k - 1)].q[i], q2[i], time_derivative(q2, i), Qf, s);
}

SpectralField postprocess_at_T(int k, const SpectralField& p_T, const std::vector<LevelResult>& lower,
                               const SpectralField& Qf, const ScaleSplit& s) {
  std::size_t last = 0;
  if (k >= 1) {
    const Trajectory& q = lower[static_cast<std::size_t>(k - 1)].q;
    if (q.size() < 2 && k >= 2) throw ValidationError("postprocess_at_T: lower levels must cover the grid");
    last = q.size() - 1;
  }
  return p_T.resized(s.M_out) + small_scale_at(k, p_T, lower, last, Qf, s);
}

LadderResult run_ladder(const ProblemSpec& spec, const LadderOptions& opts) {
  validate(spec);
  LadderResult result{{}, spec, spectral_params(spec.m, spec.l)};
  const int m = spec.m;
  const ScaleSplit split{m, spec.M_out, spec.nu, opts.exec};
  const SpectralField Pf = project(spec.f, Projection::P_m, m).resized(m);
  const SpectralField Qf = project(spec.f.resized(std::max(spec.f.cutoff(), spec.M_out)), Projection::Q_m, m)
                               .resized(spec.M_out);
  const SpectralField p_init = spec.u0.resized(m);

  IntegratorConfig cfg;
  cfg.h = spec.h;
  cfg.exec = opts.exec;

  for (int k = 0; k <= spec.K; ++k) {
    const auto start = std::chrono::steady_clock::now();
    const Trajectory* q_prev = k == 0 ? nullptr : &result.levels.back().q;

    // Stages 2 and 3 share their time; interpolate once.
    std::optional<std::pair<double, SpectralField>> cached;
    NonlinearRhs rhs = [&](const SpectralField& p, double t) {
      if (q_prev == nullptr) return level_rhs(p, nullptr, Pf, m, opts.exec);
      if (!cached || cached->first != t) cached.emplace(t, sample_interpolate(*q_prev, t));
      return level_rhs(p, &cached->second, Pf, m, opts.exec);
    };

    TrajectoryMeta meta{"ladder", "p", k, opts.config_hash};
    LevelResult level{k, Trajectory(0.0, spec.h), Trajectory(0.0, spec.h), Trajectory(0.0, spec.h), 0.0};
    try {
      level.p = integrate(p_init, spec.nu, rhs, spec.T, cfg, meta);
    } catch (const NumericalError& e) {
      throw NumericalError("level " + std::to_string(k) + ": " + e.what());
    }

    const bool terminal_only = opts.postprocess_only && k == spec.K;
    const double q_t0 = terminal_only ? level.p.t_end() : 0.0;
    meta.component = "q";
    level.q = Trajectory(q_t0, spec.h, meta);
    meta.component = "u";
    level.u = Trajectory(q_t0, spec.h, meta);
    const std::size_t first = terminal_only ? level.p.size() - 1 : 0;
    for (std::size_t i = first; i < level.p.size(); ++i) {
      SpectralField q = small_scale_at(k, level.p[i], result.levels, i, Qf, split);
      SpectralField u = level.p[i].resized(spec.M_out) + q;
      level.q.push_back(std::move(q));
      level.u.push_back(std::move(u));
    }
    level.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.levels.push_back(std::move(level));
  }
  return result;
}

void save_ladder(const std::string& dir, const LadderResult& result, const std::string& config_hash,
                 std::size_t save_stride) {
  fs::create_directories(dir);
  const auto& spec = result.spec;
  save_field((fs::path(dir) / "forcing.csv").string(), spec.f);
  save_field((fs::path(dir) / "initial.csv").string(), spec.u0);

  nlohmann::ordered_json j;
  j["producer"] = "ladder";
  j["config_hash"] = config_hash;
  j["spec"] = {{"l", spec.l}, {"nu", spec.nu}, {"m", spec.m}, {"M_out", spec.M_out},
               {"T", spec.T}, {"h", spec.h},   {"K", spec.K}, {"forcing", "forcing.csv"},
               {"initial", "initial.csv"}};
  const auto& p = result.params;
  j["params"] = {{"lambda", p.lambda}, {"Lambda", p.Lambda}, {"delta", p.delta}, {"L", p.L},
                 {"dof", dof_count(spec.m)}};
  if (p.delta1) j["params"]["delta1"] = *p.delta1;
  if (p.L1) j["params"]["L1"] = *p.L1;
  j["save_stride"] = save_stride;
  auto& lv = j["levels"] = nlohmann::ordered_json::array();
  // Wall-clock goes to timing.txt so the JSON stays reproducible.
  std::ofstream timing(fs::path(dir) / "timing.txt", std::ios::binary);
  for (const auto& level : result.levels) {
    const std::string name = "level_" + std::to_string(level.k);
    lv.push_back({{"k", level.k}, {"dir", name}, {"samples", level.p.size()}, {"q_samples", level.q.size()}});
    timing << name << " wall_clock_s=" << format_double(level.wall_clock_s) << '\n';
    save_trajectory((fs::path(dir) / name / "p").string(), subsample(level.p, save_stride));
    const std::size_t qs = level.q.size() == level.p.size() ? save_stride : 1;
    save_trajectory((fs::path(dir) / name / "q").string(), subsample(level.q, qs));
    save_trajectory((fs::path(dir) / name / "u").string(), subsample(level.u, qs));
  }
  std::ofstream(fs::path(dir) / "ladder.json", std::ios::binary) << j.dump(2) << '\n';
}

}  // namespace mgns
