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

// Data-parallel kernels behind the transform and bilinear paths.
//
// Each kernel exists twice: `serial` is the plain reference loop, `parallel`
// the OpenMP version. Both perform identical floating-point operations per
// element, so their results agree bit-for-bit; tests rely on that.

#include <cstddef>

#include "mgns/spectral_basis.hpp"
#include "mgns/transform.hpp"

namespace mgns {

enum class Exec { Serial, Parallel };

namespace kernels {

namespace serial {

/// Zeroes the half spectra and writes the exponential amplitudes of both
/// velocity components of `u`.
void pack_velocity(const SpectralField& u, int n, cplx* u1, cplx* u2);

/// d1 = d/dx1 in, d2 = d/dx2 in (spectral multiplication by 2 pi i k / l).
void spectral_gradient(const cplx* in, int n, double period, cplx* d1, cplx* d2);

/// g_i = u1 dv_i/dx1 + u2 dv_i/dx2 pointwise, for `count` points.
/// dv[i][j] = d v_i / d x_j.
void convective_product(std::size_t count, const double* u1, const double* u2, const double* dv11,
                        const double* dv12, const double* dv21, const double* dv22, double* g1, double* g2);

/// Reads basis coefficients of the (unnormalized) half spectra g1, g2 into
/// `out`, multiplying by `scale`; projects onto the divergence-free basis.
void extract_coefficients(const cplx* g1, const cplx* g2, int n, double scale, SpectralField& out);

}  // namespace serial

namespace parallel {

void pack_velocity(const SpectralField& u, int n, cplx* u1, cplx* u2);
void spectral_gradient(const cplx* in, int n, double period, cplx* d1, cplx* d2);
void convective_product(std::size_t count, const double* u1, const double* u2, const double* dv11,
                        const double* dv12, const double* dv21, const double* dv22, double* g1, double* g2);
void extract_coefficients(const cplx* g1, const cplx* g2, int n, double scale, SpectralField& out);

}  // namespace parallel

/// Dispatch helpers.
void pack_velocity(Exec exec, const SpectralField& u, int n, cplx* u1, cplx* u2);
void spectral_gradient(Exec exec, const cplx* in, int n, double period, cplx* d1, cplx* d2);
void convective_product(Exec exec, std::size_t count, const double* u1, const double* u2, const double* dv11,
                        const double* dv12, const double* dv21, const double* dv22, double* g1, double* g2);
void extract_coefficients(Exec exec, const cplx* g1, const cplx* g2, int n, double scale, SpectralField& out);

}  // namespace kernels
}  // namespace mgns
