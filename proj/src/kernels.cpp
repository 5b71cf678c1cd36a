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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mgns/kernels.hpp"

namespace mgns::kernels {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wavevector and polarization of the (j1, j2, +/-) exponential pair.
struct Pair {
  int k1, k2;
  double e1, e2;
};

Pair make_pair(int j1, int j2, bool plus) {
  const double norm = std::sqrt(static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2);
  return plus ? Pair{j1, j2, j2 / norm, -j1 / norm} : Pair{j1, -j2, j2 / norm, j1 / norm};
}

int wrap(int k, int n) { return k < 0 ? k + n : k; }

}  // namespace

namespace serial {

void pack_velocity(const SpectralField& u, int n, cplx* u1, cplx* u2) {
  const int cols = n / 2 + 1;
  const std::size_t size = static_cast<std::size_t>(n) * cols;
  std::fill(u1, u1 + size, cplx{});
  std::fill(u2, u2 + size, cplx{});
  const double amp = std::numbers::sqrt2 / u.period() / 2.0;
  const int c = u.cutoff();
  for (int j1 = 0; j1 <= c; ++j1) {
    for (int j2 = 0; j2 <= c; ++j2) {
      if (j1 == 0 && j2 == 0) continue;
      for (int s = 0; s < 2; ++s) {
        const bool plus = s == 0;
        if (!plus && (j1 == 0 || j2 == 0)) continue;
        const double cs = u(j1, j2, plus ? Variant::SPlus : Variant::SMinus);
        const double cc = u(j1, j2, plus ? Variant::CPlus : Variant::CMinus);
        const Pair p = make_pair(j1, j2, plus);
        const cplx a(amp * cc, -amp * cs);
        if (p.k2 > 0) {
          const std::size_t i = static_cast<std::size_t>(wrap(p.k1, n)) * cols + p.k2;
          u1[i] = cplx(a.real() * p.e1, a.imag() * p.e1);
          u2[i] = cplx(a.real() * p.e2, a.imag() * p.e2);
        } else if (p.k2 < 0) {
          const std::size_t i = static_cast<std::size_t>(wrap(-p.k1, n)) * cols + (-p.k2);
          u1[i] = cplx(a.real() * p.e1, -a.imag() * p.e1);
          u2[i] = cplx(a.real() * p.e2, -a.imag() * p.e2);
        } else {
          const std::size_t i = static_cast<std::size_t>(wrap(p.k1, n)) * cols;
          const std::size_t ic = static_cast<std::size_t>(wrap(-p.k1, n)) * cols;
          u1[i] = cplx(a.real() * p.e1, a.imag() * p.e1);
          u2[i] = cplx(a.real() * p.e2, a.imag() * p.e2);
          u1[ic] = cplx(a.real() * p.e1, -a.imag() * p.e1);
          u2[ic] = cplx(a.real() * p.e2, -a.imag() * p.e2);
        }
      }
    }
  }
}

void spectral_gradient(const cplx* in, int n, double period, cplx* d1, cplx* d2) {
  const int cols = n / 2 + 1;
  for (int r = 0; r < n; ++r) {
    const double k1 = kTwoPi * (r <= n / 2 ? r : r - n) / period;
    for (int c = 0; c < cols; ++c) {
      const double k2 = kTwoPi * c / period;
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      d1[i] = cplx(-k1 * in[i].imag(), k1 * in[i].real());
      d2[i] = cplx(-k2 * in[i].imag(), k2 * in[i].real());
    }
  }
}

void convective_product(std::size_t count, const double* u1, const double* u2, const double* dv11,
                        const double* dv12, const double* dv21, const double* dv22, double* g1, double* g2) {
  for (std::size_t i = 0; i < count; ++i) {
    g1[i] = u1[i] * dv11[i] + u2[i] * dv12[i];
    g2[i] = u1[i] * dv21[i] + u2[i] * dv22[i];
  }
}

void extract_coefficients(const cplx* g1, const cplx* g2, int n, double scale, SpectralField& out) {
  const int cols = n / 2 + 1;
  const double norm = std::numbers::sqrt2 * out.period();
  for_each_mode(out.cutoff(), [&](const ModeIndex& k) {
    const bool plus = k.variant == Variant::SPlus || k.variant == Variant::CPlus;
    const bool sine = k.variant == Variant::SPlus || k.variant == Variant::SMinus;
    const Pair p = make_pair(k.j1, k.j2, plus);
    cplx a1, a2;
    if (p.k2 >= 0) {
      const std::size_t i = static_cast<std::size_t>(wrap(p.k1, n)) * cols + p.k2;
      a1 = g1[i];
      a2 = g2[i];
    } else {
      const std::size_t i = static_cast<std::size_t>(wrap(-p.k1, n)) * cols + (-p.k2);
      a1 = std::conj(g1[i]);
      a2 = std::conj(g2[i]);
    }
    const double re = scale * (a1.real() * p.e1 + a2.real() * p.e2);
    const double im = scale * (a1.imag() * p.e1 + a2.imag() * p.e2);
    out.coeffs()[out.slot(k.j1, k.j2, k.variant)] = sine ? -norm * im : norm * re;
  });
}

}  // namespace serial

namespace parallel {

void pack_velocity(const SpectralField& u, int n, cplx* u1, cplx* u2) {
  const int cols = n / 2 + 1;
  const double amp = std::numbers::sqrt2 / u.period() / 2.0;
  const int c = u.cutoff();
  const auto coef = u.coeffs();
  const std::size_t stride = static_cast<std::size_t>(c + 1) * 4;

#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (int r = 0; r < n; ++r) {
      std::fill(u1 + static_cast<std::size_t>(r) * cols, u1 + static_cast<std::size_t>(r + 1) * cols, cplx{});
      std::fill(u2 + static_cast<std::size_t>(r) * cols, u2 + static_cast<std::size_t>(r + 1) * cols, cplx{});
    }
    // Rows j1 and n - j1 are owned by iteration j1 alone (cutoff < n/2).
#pragma omp for schedule(static)
    for (int j1 = 0; j1 <= c; ++j1) {
      const double* row = coef.data() + static_cast<std::size_t>(j1) * stride;
      const std::size_t rp = static_cast<std::size_t>(j1) * cols;
      const std::size_t rm = static_cast<std::size_t>(wrap(-j1, n)) * cols;
      for (int j2 = (j1 == 0 ? 1 : 0); j2 <= c; ++j2) {
        const double* q = row + static_cast<std::size_t>(j2) * 4;
        {
          const Pair p = make_pair(j1, j2, true);
          const cplx a(amp * q[2], -amp * q[0]);
          const cplx w1(a.real() * p.e1, a.imag() * p.e1);
          const cplx w2(a.real() * p.e2, a.imag() * p.e2);
          if (j2 > 0) {
            u1[rp + j2] = w1;
            u2[rp + j2] = w2;
          } else {
            u1[rp] = w1;
            u2[rp] = w2;
            u1[rm] = cplx(a.real() * p.e1, -a.imag() * p.e1);
            u2[rm] = cplx(a.real() * p.e2, -a.imag() * p.e2);
          }
        }
        if (j1 > 0 && j2 > 0) {
          const Pair p = make_pair(j1, j2, false);
          const cplx a(amp * q[3], -amp * q[1]);
          u1[rm + j2] = cplx(a.real() * p.e1, -a.imag() * p.e1);
          u2[rm + j2] = cplx(a.real() * p.e2, -a.imag() * p.e2);
        }
      }
    }
  }
}

void spectral_gradient(const cplx* in, int n, double period, cplx* d1, cplx* d2) {
  const int cols = n / 2 + 1;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    const double k1 = kTwoPi * (r <= n / 2 ? r : r - n) / period;
    const std::size_t base = static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) {
      const double k2 = kTwoPi * c / period;
      const cplx x = in[base + c];
      d1[base + c] = cplx(-k1 * x.imag(), k1 * x.real());
      d2[base + c] = cplx(-k2 * x.imag(), k2 * x.real());
    }
  }
}

void convective_product(std::size_t count, const double* u1, const double* u2, const double* dv11,
                        const double* dv12, const double* dv21, const double* dv22, double* g1, double* g2) {
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    g1[i] = u1[i] * dv11[i] + u2[i] * dv12[i];
    g2[i] = u1[i] * dv21[i] + u2[i] * dv22[i];
  }
}

void extract_coefficients(const cplx* g1, const cplx* g2, int n, double scale, SpectralField& out) {
  const int cols = n / 2 + 1;
  const double norm = std::numbers::sqrt2 * out.period();
  const int c = out.cutoff();
  auto coef = out.coeffs();
  const std::size_t stride = static_cast<std::size_t>(c + 1) * 4;
#pragma omp parallel for schedule(static)
  for (int j1 = 0; j1 <= c; ++j1) {
    double* row = coef.data() + static_cast<std::size_t>(j1) * stride;
    const std::size_t rp = static_cast<std::size_t>(j1) * cols;
    const std::size_t rm = static_cast<std::size_t>(wrap(-j1, n)) * cols;
    for (int j2 = (j1 == 0 ? 1 : 0); j2 <= c; ++j2) {
      double* q = row + static_cast<std::size_t>(j2) * 4;
      {
        const Pair p = make_pair(j1, j2, true);
        const cplx a1 = g1[rp + j2], a2 = g2[rp + j2];
        const double re = scale * (a1.real() * p.e1 + a2.real() * p.e2);
        const double im = scale * (a1.imag() * p.e1 + a2.imag() * p.e2);
        q[0] = -norm * im;
        q[2] = norm * re;
      }
      if (j1 > 0 && j2 > 0) {
        const Pair p = make_pair(j1, j2, false);
        const cplx a1 = std::conj(g1[rm + j2]), a2 = std::conj(g2[rm + j2]);
        const double re = scale * (a1.real() * p.e1 + a2.real() * p.e2);
        const double im = scale * (a1.imag() * p.e1 + a2.imag() * p.e2);
        q[1] = -norm * im;
        q[3] = norm * re;
      }
    }
  }
}

}  // namespace parallel

void pack_velocity(Exec exec, const SpectralField& u, int n, cplx* u1, cplx* u2) {
  exec == Exec::Serial ? serial::pack_velocity(u, n, u1, u2) : parallel::pack_velocity(u, n, u1, u2);
}

void spectral_gradient(Exec exec, const cplx* in, int n, double period, cplx* d1, cplx* d2) {
  exec == Exec::Serial ? serial::spectral_gradient(in, n, period, d1, d2)
                       : parallel::spectral_gradient(in, n, period, d1, d2);
}

void convective_product(Exec exec, std::size_t count, const double* u1, const double* u2, const double* dv11,
                        const double* dv12, const double* dv21, const double* dv22, double* g1, double* g2) {
  exec == Exec::Serial ? serial::convective_product(count, u1, u2, dv11, dv12, dv21, dv22, g1, g2)
                       : parallel::convective_product(count, u1, u2, dv11, dv12, dv21, dv22, g1, g2);
}

void extract_coefficients(Exec exec, const cplx* g1, const cplx* g2, int n, double scale, SpectralField& out) {
  exec == Exec::Serial ? serial::extract_coefficients(g1, g2, n, scale, out)
                       : parallel::extract_coefficients(g1, g2, n, scale, out);
}

}  // namespace mgns::kernels
