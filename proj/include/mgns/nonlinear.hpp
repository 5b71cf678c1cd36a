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

// Convective term B(u, v) = (u . grad) v expanded in the divergence-free
// basis. Expanding in that basis drops the gradient part of the product,
// which is the pressure-eliminating projection.

#include "mgns/kernels.hpp"
#include "mgns/spectral_basis.hpp"
#include "mgns/transform.hpp"

namespace mgns {

/// Padded FFT grid plus scratch buffers for one product evaluation at a
/// time. Not shareable between threads; make one per worker.
class BilinearWorkspace {
 public:
  explicit BilinearWorkspace(int grid, Exec exec = Exec::Parallel);

  /// Smallest admissible grid: alias-free for the requested output
  /// (N >= cu + cv + min(cout, cu + cv) + 1) and able to hold every input.
  static int required_grid(int cutoff_u, int cutoff_v, int cutoff_out);

  int grid() const { return fft_.n(); }
  Exec exec() const { return exec_; }

  /// Throws ValidationError if this grid would alias the product.
  void check(int cutoff_u, int cutoff_v, int cutoff_out) const;

  SpectralField apply(const SpectralField& u, const SpectralField& v, int out_cutoff);

 private:
  FftGrid fft_;
  Exec exec_;
  FftwBuffer<cplx> spec_[6];
  FftwBuffer<double> phys_[8];
};

/// B(u, v) truncated at out_cutoff via the padded FFT path. Uses a
/// thread-local workspace sized for the call.
SpectralField bilinear_B(const SpectralField& u, const SpectralField& v, int out_cutoff,
                         Exec exec = Exec::Parallel);

/// Same contract computed by direct quadrature of the closed-form basis
/// functions, no transforms involved. Cost grows like cutoff^4; meant for
/// cutoffs up to about 12.
SpectralField bilinear_B_oracle(const SpectralField& u, const SpectralField& v, int out_cutoff);

/// b(u, v, w) = (B(u, v), w) with B taken to cutoff(u) + cutoff(v).
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                   Exec exec = Exec::Parallel);

}  // namespace mgns
