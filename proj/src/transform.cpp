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

#include "mgns/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <string>

#include "mgns/errors.hpp"
#include "mgns/kernels.hpp"

namespace mgns {

namespace {
// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void detail::FftwFree::operator()(void* p) const { fftw_free(p); }

FftwBuffer<double> make_real_buffer(std::size_t n) {
  auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<double>(p);
}

FftwBuffer<cplx> make_spectral_buffer(std::size_t n) {
  auto* p = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<cplx>(p);
}

int fft_friendly_size(int n) {
  for (int c = std::max(n, 2);; ++c) {
    if (c % 2 != 0) continue;
    int r = c;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return c;
  }
}

FftGrid::FftGrid(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw ValidationError("FftGrid: size must be even and >= 2, got " + std::to_string(n));
  auto real = make_real_buffer(real_size());
  auto spec = make_spectral_buffer(spectral_size());
  std::lock_guard lock(planner_mutex());
  auto* cs = reinterpret_cast<fftw_complex*>(spec.get());
  c2r_ = fftw_plan_dft_c2r_2d(n, n, cs, real.get(), FFTW_ESTIMATE);
  r2c_ = fftw_plan_dft_r2c_2d(n, n, real.get(), cs, FFTW_ESTIMATE);
  if (c2r_ == nullptr || r2c_ == nullptr) throw Error("FftGrid: FFTW planning failed");
}

FftGrid::~FftGrid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
}

void FftGrid::to_physical(cplx* spec, double* phys) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(spec), phys);
}

void FftGrid::to_spectral(const double* phys, cplx* spec) const {
  // Out-of-place r2c leaves the input untouched.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(phys),
                       reinterpret_cast<fftw_complex*>(spec));
}

PhysicalVelocity evaluate_physical(const SpectralField& u, int grid) {
  if (grid < 2 * u.cutoff() + 2) {
    throw ValidationError("evaluate_physical: grid " + std::to_string(grid) + " aliases cutoff " +
                          std::to_string(u.cutoff()) + " (need >= " + std::to_string(2 * u.cutoff() + 2) + ")");
  }
  if (grid % 2 != 0) throw ValidationError("evaluate_physical: grid must be even");
  FftGrid fft(grid);
  auto s1 = make_spectral_buffer(fft.spectral_size());
  auto s2 = make_spectral_buffer(fft.spectral_size());
  auto r = make_real_buffer(fft.real_size());
  kernels::pack_velocity(Exec::Serial, u, grid, s1.get(), s2.get());
  PhysicalVelocity out;
  out.grid = grid;
  out.period = u.period();
  fft.to_physical(s1.get(), r.get());
  out.u1.assign(r.get(), r.get() + fft.real_size());
  fft.to_physical(s2.get(), r.get());
  out.u2.assign(r.get(), r.get() + fft.real_size());
  return out;
}

SpectralField from_physical(const PhysicalVelocity& samples, int cutoff) {
  const int n = samples.grid;
  if (n < 2 * cutoff + 2 || n % 2 != 0) {
    throw ValidationError("from_physical: grid " + std::to_string(n) + " cannot resolve cutoff " +
                          std::to_string(cutoff));
  }
  const std::size_t expect = static_cast<std::size_t>(n) * n;
  if (samples.u1.size() != expect || samples.u2.size() != expect) {
    throw ValidationError("from_physical: sample arrays do not match grid");
  }
  FftGrid fft(n);
  auto r = make_real_buffer(fft.real_size());
  auto s1 = make_spectral_buffer(fft.spectral_size());
  auto s2 = make_spectral_buffer(fft.spectral_size());
  std::copy(samples.u1.begin(), samples.u1.end(), r.get());
  fft.to_spectral(r.get(), s1.get());
  std::copy(samples.u2.begin(), samples.u2.end(), r.get());
  fft.to_spectral(r.get(), s2.get());
  SpectralField out(samples.period, cutoff);
  kernels::extract_coefficients(Exec::Serial, s1.get(), s2.get(), n,
                                1.0 / (static_cast<double>(n) * n), out);
  return out;
}

}  // namespace mgns
