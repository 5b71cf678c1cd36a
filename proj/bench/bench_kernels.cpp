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

// Serial reference kernels vs. their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "mgns/kernels.hpp"
#include "mgns/nonlinear.hpp"
#include "mgns/spectral_basis.hpp"
#include "mgns/transform.hpp"

namespace {

using namespace mgns;

constexpr double kTwoPi = 6.283185307179586;

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "parallel"); }

// Full alias-free convection term B(u, v) at cutoff m with output cutoff 2m.
void BM_BilinearB(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Exec exec = exec_of(state);
  const auto u = random_field(m, 1, 0.5, kTwoPi);
  const auto v = random_field(m, 2, 0.5, kTwoPi);
  BilinearWorkspace ws(BilinearWorkspace::required_grid(m, m, 2 * m), exec);
  for (auto _ : state) benchmark::DoNotOptimize(ws.apply(u, v, 2 * m));
  label(state);
}

// Pointwise convective product on an n x n grid.
void BM_ConvectiveProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Exec exec = exec_of(state);
  const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<std::vector<double>> in(6, std::vector<double>(count));
  for (std::size_t a = 0; a < in.size(); ++a) {
    for (std::size_t i = 0; i < count; ++i) in[a][i] = 1.0 / static_cast<double>(1 + (a * 7 + i) % 13);
  }
  std::vector<double> g1(count), g2(count);
  for (auto _ : state) {
    kernels::convective_product(exec, count, in[0].data(), in[1].data(), in[2].data(), in[3].data(), in[4].data(),
                                in[5].data(), g1.data(), g2.data());
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(count) * 8 * 8);
  label(state);
}

// Spectral differentiation of a half spectrum.
void BM_SpectralGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Exec exec = exec_of(state);
  const std::size_t half = static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
  auto in = make_spectral_buffer(half);
  auto d1 = make_spectral_buffer(half);
  auto d2 = make_spectral_buffer(half);
  auto u2 = make_spectral_buffer(half);
  const auto u = random_field(n / 3, 3, 0.5, kTwoPi);
  kernels::pack_velocity(Exec::Serial, u, n, in.get(), u2.get());
  for (auto _ : state) {
    kernels::spectral_gradient(exec, in.get(), n, kTwoPi, d1.get(), d2.get());
    benchmark::ClobberMemory();
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_BilinearB)->ArgsProduct({{8, 16, 32, 64}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvectiveProduct)->ArgsProduct({{64, 128, 256}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SpectralGradient)->ArgsProduct({{64, 128, 256}, {0, 1}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
