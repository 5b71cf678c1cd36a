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

// Divergence-free trigonometric eigenbasis of A = -Laplacian on the periodic
// square (0,l)^2, coefficient storage, norms and projections.
//
// Basis functions, |j| = sqrt(j1^2 + j2^2):
//   s+/s- : (sqrt2/l) (j2, -/+ j1)/|j| sin(2 pi (j1 x1 +/- j2 x2)/l)
//   c+/c- : (sqrt2/l) (j2, -/+ j1)/|j| cos(2 pi (j1 x1 +/- j2 x2)/l)
// They are orthonormal in L^2. On the axes (j1 = 0 or j2 = 0) the "-"
// function equals the "+" function up to sign (s) or exactly (c); only the
// "+" variant is kept there and the "-" slots stay identically zero.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mgns {

enum class Variant : std::uint8_t { SPlus = 1, SMinus = 2, CPlus = 3, CMinus = 4 };

struct ModeIndex {
  int j1 = 0;
  int j2 = 0;
  Variant variant = Variant::SPlus;

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// True if the index belongs to the canonical basis.
bool is_canonical(const ModeIndex& mode);

/// Calls fn(ModeIndex) for every canonical mode with max(j1, j2) <= cutoff,
/// ordered by j1, then j2, then variant.
template <class Fn>
void for_each_mode(int cutoff, Fn&& fn) {
  for (int j1 = 0; j1 <= cutoff; ++j1) {
    for (int j2 = 0; j2 <= cutoff; ++j2) {
      if (j1 == 0 && j2 == 0) continue;
      const bool axis = (j1 == 0 || j2 == 0);
      for (int v = 1; v <= 4; ++v) {
        if (axis && (v == 2 || v == 4)) continue;
        fn(ModeIndex{j1, j2, static_cast<Variant>(v)});
      }
    }
  }
}

/// 4 pi^2 (j1^2 + j2^2) / l^2. Throws ValidationError for (0,0) or l <= 0.
double eigenvalue(int j1, int j2, double l);

/// Real-valued field expanded in the canonical basis up to a cutoff.
///
/// Coefficients are stored densely over the square block
/// 0 <= j1, j2 <= cutoff, four slots per pair. Non-canonical slots are zero.
class SpectralField {
 public:
  SpectralField(double period, int cutoff);

  double period() const { return period_; }
  int cutoff() const { return cutoff_; }

  /// Coefficient of a mode; zero for modes beyond the cutoff or
  /// non-canonical slots.
  double operator()(const ModeIndex& mode) const;
  double operator()(int j1, int j2, Variant v) const { return (*this)(ModeIndex{j1, j2, v}); }

  /// Sets a coefficient. Nonzero values on non-canonical slots or beyond
  /// the cutoff are rejected.
  void set(const ModeIndex& mode, double value);

  /// Raw dense storage, index slot(j1, j2, v).
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  std::size_t slot(int j1, int j2, Variant v) const {
    return (static_cast<std::size_t>(j1) * static_cast<std::size_t>(cutoff_ + 1) +
            static_cast<std::size_t>(j2)) * 4 + (static_cast<std::size_t>(v) - 1);
  }

  /// Copy with a different cutoff; coefficients beyond the new cutoff are dropped.
  SpectralField resized(int cutoff) const;

  /// All coefficients finite and non-canonical slots zero.
  bool is_valid() const;
  bool is_zero() const;
  /// Largest max(j1, j2) carrying a nonzero coefficient; 0 for the zero field.
  int support_cutoff() const;
  double max_abs() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double alpha);
  /// this += alpha * x
  SpectralField& axpy(double alpha, const SpectralField& x);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double alpha, SpectralField a) { return a *= alpha; }

  /// Bitwise-equal coefficients (after zero extension), same period.
  friend bool operator==(const SpectralField& a, const SpectralField& b);

 private:
  void grow_to(int cutoff);

  double period_;
  int cutoff_;
  std::vector<double> coeffs_;
};

/// Throws ValidationError unless both fields share a period.
void require_same_period(const SpectralField& a, const SpectralField& b);

/// Largest absolute coefficient difference (zero extension on mismatch).
double max_abs_diff(const SpectralField& a, const SpectralField& b);

struct SpectralParams {
  double lambda = 0;  // least eigenvalue, 4 pi^2 / l^2
  double Lambda = 0;  // least eigenvalue outside the cutoff block
  double delta = 0;   // lambda / Lambda = 1/(m+1)^2
  double L = 0;       // 1 + ln(2 m^2)
  // Same quantities for the half block n = m/2; only defined for even m.
  std::optional<double> delta1;
  std::optional<double> L1;
};

SpectralParams spectral_params(int m, double l);

/// Number of real unknowns of the Galerkin system with cutoff m: 4m^2 + 4m.
int dof_count(int m);

enum class Projection { P_m, Q_m, P_p, P_q };

/// Zeroes the coefficients outside the named index set; keeps the cutoff.
/// P_m: max(j1,j2) <= m; Q_m: its complement; P_p: max(j1,j2) <= m/2;
/// P_q: P_m minus P_p. P_p and P_q need even m.
SpectralField project(const SpectralField& u, Projection which, int m);

/// True if all coefficients with max(j1,j2) > m vanish.
bool in_p_block(const SpectralField& u, int m);
/// True if all coefficients with max(j1,j2) <= m vanish.
bool in_q_block(const SpectralField& u, int m);

double inner(const SpectralField& u, const SpectralField& v);
double norm_l2(const SpectralField& u);
double norm_h1(const SpectralField& u);
double norm_lap(const SpectralField& u);

/// (nu A)^{-1}: c_k -> c_k / (nu lambda_k).
SpectralField inv_nuA(const SpectralField& u, double nu);
/// nu A: c_k -> nu lambda_k c_k.
SpectralField nuA(const SpectralField& u, double nu);

/// Deterministic pseudo-random field, |c_k| ~ (j1^2 + j2^2)^{-decay}.
SpectralField random_field(int cutoff, std::uint64_t seed, double decay,
                           double period = 6.283185307179586);

using Vec2 = std::array<double, 2>;
/// Row i is the gradient of component i: {d u_i/dx1, d u_i/dx2}.
using Mat2 = std::array<Vec2, 2>;

/// Pointwise value of one basis function from the closed-form expressions.
Vec2 basis_value(const ModeIndex& mode, double l, double x1, double x2);
Mat2 basis_gradient(const ModeIndex& mode, double l, double x1, double x2);

/// Direct (slow) pointwise evaluation by summing closed-form basis functions.
Vec2 evaluate_direct(const SpectralField& u, double x1, double x2);
Mat2 gradient_direct(const SpectralField& u, double x1, double x2);

/// Text format: header `ns-field v1 l=<real> cutoff=<int>` then rows
/// `j1,j2,variant,coefficient` (nonzero coefficients only, shortest
/// round-trip decimals).
void write_field(std::ostream& os, const SpectralField& u);
SpectralField read_field(std::istream& is);
void save_field(const std::string& path, const SpectralField& u);
SpectralField load_field(const std::string& path);

}  // namespace mgns
