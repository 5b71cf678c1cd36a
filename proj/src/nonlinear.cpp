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

#include "mgns/nonlinear.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mgns/errors.hpp"

namespace mgns {

namespace {

int effective_out(int cutoff_u, int cutoff_v, int cutoff_out) {
  return std::min(cutoff_out, cutoff_u + cutoff_v);
}

}  // namespace

BilinearWorkspace::BilinearWorkspace(int grid, Exec exec) : fft_(grid), exec_(exec) {
  for (auto& s : spec_) s = make_spectral_buffer(fft_.spectral_size());
  for (auto& p : phys_) p = make_real_buffer(fft_.real_size());
}

int BilinearWorkspace::required_grid(int cutoff_u, int cutoff_v, int cutoff_out) {
  const int c = effective_out(cutoff_u, cutoff_v, cutoff_out);
  const int alias_free = cutoff_u + cutoff_v + c + 1;
  const int hold = 2 * std::max({cutoff_u, cutoff_v, c}) + 2;
  return fft_friendly_size(std::max(alias_free, hold));
}

void BilinearWorkspace::check(int cutoff_u, int cutoff_v, int cutoff_out) const {
  const int c = effective_out(cutoff_u, cutoff_v, cutoff_out);
  const int need = std::max(cutoff_u + cutoff_v + c + 1, 2 * std::max({cutoff_u, cutoff_v, c}) + 2);
  if (grid() < need) {
    throw ValidationError("bilinear_B: padded grid " + std::to_string(grid()) + " aliases cutoffs (" +
                          std::to_string(cutoff_u) + ", " + std::to_string(cutoff_v) + " -> " +
                          std::to_string(c) + "); need >= " + std::to_string(need));
  }
}

SpectralField BilinearWorkspace::apply(const SpectralField& u, const SpectralField& v, int out_cutoff) {
  require_same_period(u, v);
  if (out_cutoff < 1) throw ValidationError("bilinear_B: out_cutoff must be >= 1");
  check(u.cutoff(), v.cutoff(), out_cutoff);
  const int n = grid();
  const double l = u.period();

  cplx* s[6];
  for (int i = 0; i < 6; ++i) s[i] = spec_[i].get();
  double* p[8];
  for (int i = 0; i < 8; ++i) p[i] = phys_[i].get();

  // s2..s5 = dv1/dx1, dv1/dx2, dv2/dx1, dv2/dx2; then s0, s1 = u1, u2.
  kernels::pack_velocity(exec_, v, n, s[0], s[1]);
  kernels::spectral_gradient(exec_, s[0], n, l, s[2], s[3]);
  kernels::spectral_gradient(exec_, s[1], n, l, s[4], s[5]);
  kernels::pack_velocity(exec_, u, n, s[0], s[1]);

  if (exec_ == Exec::Parallel) {
#pragma omp parallel for schedule(static, 1)
    for (int i = 0; i < 6; ++i) fft_.to_physical(s[i], p[i]);
  } else {
    for (int i = 0; i < 6; ++i) fft_.to_physical(s[i], p[i]);
  }

  kernels::convective_product(exec_, fft_.real_size(), p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]);

  if (exec_ == Exec::Parallel) {
#pragma omp parallel for schedule(static, 1)
    for (int i = 0; i < 2; ++i) fft_.to_spectral(p[6 + i], s[i]);
  } else {
    fft_.to_spectral(p[6], s[0]);
    fft_.to_spectral(p[7], s[1]);
  }

  const int c = effective_out(u.cutoff(), v.cutoff(), out_cutoff);
  SpectralField out(l, c);
  kernels::extract_coefficients(exec_, s[0], s[1], n, 1.0 / (static_cast<double>(n) * n), out);
  return c == out_cutoff ? out : out.resized(out_cutoff);
}

SpectralField bilinear_B(const SpectralField& u, const SpectralField& v, int out_cutoff, Exec exec) {
  thread_local std::map<std::pair<int, Exec>, std::unique_ptr<BilinearWorkspace>> cache;
  const int n = BilinearWorkspace::required_grid(u.cutoff(), v.cutoff(), std::max(out_cutoff, 1));
  auto& ws = cache[{n, exec}];
  if (!ws) ws = std::make_unique<BilinearWorkspace>(n, exec);
  return ws->apply(u, v, out_cutoff);
}

SpectralField bilinear_B_oracle(const SpectralField& u, const SpectralField& v, int out_cutoff) {
  require_same_period(u, v);
  if (out_cutoff < 1) throw ValidationError("bilinear_B_oracle: out_cutoff must be >= 1");
  const int c = effective_out(u.cutoff(), v.cutoff(), out_cutoff);
  // Uniform-grid quadrature is exact for trigonometric polynomials of
  // degree < n per direction; g . w has degree <= cu + cv + c.
  const int n = u.cutoff() + v.cutoff() + c + 1;
  const double l = u.period();
  const double h = l / n;

  std::vector<Vec2> g(static_cast<std::size_t>(n) * n);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const double x1 = i1 * h, x2 = i2 * h;
      const Vec2 uu = evaluate_direct(u, x1, x2);
      const Mat2 dv = gradient_direct(v, x1, x2);
      g[static_cast<std::size_t>(i1) * n + i2] = {uu[0] * dv[0][0] + uu[1] * dv[0][1],
                                                  uu[0] * dv[1][0] + uu[1] * dv[1][1]};
    }
  }

  SpectralField out(l, c);
  for_each_mode(c, [&](const ModeIndex& k) {
    double sum = 0;
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        const Vec2 w = basis_value(k, l, i1 * h, i2 * h);
        const Vec2& gi = g[static_cast<std::size_t>(i1) * n + i2];
        sum += gi[0] * w[0] + gi[1] * w[1];
      }
    }
    out.set(k, sum * h * h);
  });
  return c == out_cutoff ? out : out.resized(out_cutoff);
}

double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w, Exec exec) {
  require_same_period(u, w);
  return inner(bilinear_B(u, v, u.cutoff() + v.cutoff(), exec), w);
}

}  // namespace mgns
