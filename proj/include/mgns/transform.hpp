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

// FFTW-backed transforms between the real eigenbasis and collocation grids.
//
// A field is mapped to complex exponentials exp(2 pi i k.x / l) with
// divergence-free polarization: the basis function with wavevector kappa,
// polarization e and sine (cosine) profile has exponential amplitudes
// (sqrt2/l) e (-i/2) ((1/2) for cosine) at kappa and the conjugate at
// -kappa. Grids store x = (i1 l/N, i2 l/N) row-major with i1 the slow index;
// half spectra store k2 >= 0 (N/2+1 columns), k1 wrapped modulo N.

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "mgns/spectral_basis.hpp"

namespace mgns {

using cplx = std::complex<double>;

namespace detail {
struct FftwFree {
  void operator()(void* p) const;
};
}  // namespace detail

template <class T>
using FftwBuffer = std::unique_ptr<T[], detail::FftwFree>;

FftwBuffer<double> make_real_buffer(std::size_t n);
FftwBuffer<cplx> make_spectral_buffer(std::size_t n);

/// Smallest even size >= n whose prime factors are in {2, 3, 5, 7}.
int fft_friendly_size(int n);

/// Pair of 2D real<->half-complex plans for an N x N grid.
/// Plans are created with FFTW_ESTIMATE so results do not depend on timing.
class FftGrid {
 public:
  explicit FftGrid(int n);
  ~FftGrid();
  FftGrid(const FftGrid&) = delete;
  FftGrid& operator=(const FftGrid&) = delete;

  int n() const { return n_; }
  std::size_t real_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }

  /// Unnormalized inverse transform. Overwrites `spec`.
  void to_physical(cplx* spec, double* phys) const;
  /// Unnormalized forward transform; `phys` is preserved.
  void to_spectral(const double* phys, cplx* spec) const;

 private:
  int n_;
  void* c2r_ = nullptr;
  void* r2c_ = nullptr;
};

struct PhysicalVelocity {
  int grid = 0;
  double period = 0;
  std::vector<double> u1;  // size grid*grid, index i1*grid + i2
  std::vector<double> u2;
};

/// Velocity samples at x = (i1 l/N, i2 l/N). Needs grid >= 2 cutoff + 2.
PhysicalVelocity evaluate_physical(const SpectralField& u, int grid);

/// Projects grid samples onto the basis up to `cutoff` (discrete
/// transform followed by the divergence-free projection).
SpectralField from_physical(const PhysicalVelocity& samples, int cutoff);

}  // namespace mgns
