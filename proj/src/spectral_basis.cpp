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

#include "mgns/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "mgns/errors.hpp"
#include "mgns/numfmt.hpp"

namespace mgns {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_positive_zero(double x) { return x == 0.0 && !std::signbit(x); }

double wavenumber_sq(int j1, int j2) {
  return static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2;
}

// Applies fn(coefficient&, lambda) over every canonical slot.
template <class Fn>
void for_each_coeff(SpectralField& u, Fn&& fn) {
  const double scale = kTwoPi * kTwoPi / (u.period() * u.period());
  auto c = u.coeffs();
  for_each_mode(u.cutoff(), [&](const ModeIndex& k) {
    fn(c[u.slot(k.j1, k.j2, k.variant)], scale * wavenumber_sq(k.j1, k.j2));
  });
}

template <class Fn>
double weighted_sum(const SpectralField& u, Fn&& weight) {
  const double scale = kTwoPi * kTwoPi / (u.period() * u.period());
  const auto c = u.coeffs();
  double sum = 0;
  for_each_mode(u.cutoff(), [&](const ModeIndex& k) {
    const double x = c[u.slot(k.j1, k.j2, k.variant)];
    sum += weight(scale * wavenumber_sq(k.j1, k.j2)) * x * x;
  });
  return sum;
}

}  // namespace

bool is_canonical(const ModeIndex& mode) {
  if (mode.j1 < 0 || mode.j2 < 0) return false;
  if (mode.j1 == 0 && mode.j2 == 0) return false;
  const int v = static_cast<int>(mode.variant);
  if (v < 1 || v > 4) return false;
  if (mode.j1 == 0 || mode.j2 == 0) return mode.variant == Variant::SPlus || mode.variant == Variant::CPlus;
  return true;
}

double eigenvalue(int j1, int j2, double l) {
  if (j1 == 0 && j2 == 0) throw ValidationError("eigenvalue: (0,0) is not an index of H");
  if (!(l > 0)) throw ValidationError("eigenvalue: period must be positive");
  return kTwoPi * kTwoPi * wavenumber_sq(j1, j2) / (l * l);
}

SpectralField::SpectralField(double period, int cutoff) : period_(period), cutoff_(cutoff) {
  if (!(period > 0) || !std::isfinite(period)) throw ValidationError("SpectralField: period must be positive");
  if (cutoff < 1) throw ValidationError("SpectralField: cutoff must be >= 1");
  coeffs_.assign(static_cast<std::size_t>(cutoff + 1) * (cutoff + 1) * 4, 0.0);
}

double SpectralField::operator()(const ModeIndex& mode) const {
  if (mode.j1 < 0 || mode.j2 < 0 || mode.j1 > cutoff_ || mode.j2 > cutoff_) return 0.0;
  const int v = static_cast<int>(mode.variant);
  if (v < 1 || v > 4) return 0.0;
  return coeffs_[slot(mode.j1, mode.j2, mode.variant)];
}

void SpectralField::set(const ModeIndex& mode, double value) {
  if (!is_canonical(mode)) {
    if (value == 0.0) return;
    throw ValidationError("SpectralField::set: non-canonical mode (" + std::to_string(mode.j1) + "," +
                          std::to_string(mode.j2) + "," + std::to_string(static_cast<int>(mode.variant)) +
                          ")");
  }
  if (mode.j1 > cutoff_ || mode.j2 > cutoff_) {
    if (value == 0.0) return;
    throw ValidationError("SpectralField::set: mode beyond cutoff " + std::to_string(cutoff_));
  }
  if (!std::isfinite(value)) throw ValidationError("SpectralField::set: non-finite coefficient");
  coeffs_[slot(mode.j1, mode.j2, mode.variant)] = value;
}

SpectralField SpectralField::resized(int cutoff) const {
  SpectralField out(period_, cutoff);
  const int common = std::min(cutoff, cutoff_);
  for (int j1 = 0; j1 <= common; ++j1) {
    for (int j2 = 0; j2 <= common; ++j2) {
      std::copy_n(coeffs_.begin() + static_cast<std::ptrdiff_t>(slot(j1, j2, Variant::SPlus)), 4,
                  out.coeffs_.begin() + static_cast<std::ptrdiff_t>(out.slot(j1, j2, Variant::SPlus)));
    }
  }
  return out;
}

void SpectralField::grow_to(int cutoff) {
  if (cutoff > cutoff_) *this = resized(cutoff);
}

bool SpectralField::is_valid() const {
  for (int j1 = 0; j1 <= cutoff_; ++j1) {
    for (int j2 = 0; j2 <= cutoff_; ++j2) {
      for (int v = 1; v <= 4; ++v) {
        const double x = coeffs_[slot(j1, j2, static_cast<Variant>(v))];
        if (!std::isfinite(x)) return false;
        if (x != 0.0 && !is_canonical(ModeIndex{j1, j2, static_cast<Variant>(v)})) return false;
      }
    }
  }
  return true;
}

bool SpectralField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double x) { return x == 0.0; });
}

int SpectralField::support_cutoff() const {
  int s = 0;
  for (int j1 = 0; j1 <= cutoff_; ++j1) {
    for (int j2 = 0; j2 <= cutoff_; ++j2) {
      for (int v = 1; v <= 4; ++v) {
        if (coeffs_[slot(j1, j2, static_cast<Variant>(v))] != 0.0) s = std::max({s, j1, j2});
      }
    }
  }
  return s;
}

double SpectralField::max_abs() const {
  double m = 0;
  for (double x : coeffs_) m = std::max(m, std::abs(x));
  return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_period(*this, other);
  grow_to(other.cutoff_);
  if (other.cutoff_ == cutoff_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
  }
  for (int j1 = 0; j1 <= other.cutoff_; ++j1) {
    for (int j2 = 0; j2 <= other.cutoff_; ++j2) {
      for (int v = 1; v <= 4; ++v) {
        const auto var = static_cast<Variant>(v);
        coeffs_[slot(j1, j2, var)] -= other.coeffs_[other.slot(j1, j2, var)];
      }
    }
  }
  return *this;
}

SpectralField& SpectralField::operator*=(double alpha) {
  for (double& x : coeffs_) x *= alpha;
  return *this;
}

SpectralField& SpectralField::axpy(double alpha, const SpectralField& x) {
  require_same_period(*this, x);
  grow_to(x.cutoff_);
  if (x.cutoff_ == cutoff_) {
    if (alpha == 1.0) {
      for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += x.coeffs_[i];
    } else {
      for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += alpha * x.coeffs_[i];
    }
    return *this;
  }
  for (int j1 = 0; j1 <= x.cutoff_; ++j1) {
    for (int j2 = 0; j2 <= x.cutoff_; ++j2) {
      for (int v = 1; v <= 4; ++v) {
        const auto var = static_cast<Variant>(v);
        const double xv = x.coeffs_[x.slot(j1, j2, var)];
        coeffs_[slot(j1, j2, var)] += alpha == 1.0 ? xv : alpha * xv;
      }
    }
  }
  return *this;
}

bool operator==(const SpectralField& a, const SpectralField& b) {
  if (a.period_ != b.period_) return false;
  const int c = std::max(a.cutoff_, b.cutoff_);
  for (int j1 = 0; j1 <= c; ++j1) {
    for (int j2 = 0; j2 <= c; ++j2) {
      for (int v = 1; v <= 4; ++v) {
        const ModeIndex k{j1, j2, static_cast<Variant>(v)};
        const double x = a(k), y = b(k);
        if (std::signbit(x) != std::signbit(y) || !(x == y)) {
          if (!(std::isnan(x) && std::isnan(y))) return false;
        }
      }
    }
  }
  return true;
}

void require_same_period(const SpectralField& a, const SpectralField& b) {
  if (a.period() != b.period()) {
    throw ValidationError("incompatible fields: period " + format_double(a.period()) + " vs " +
                          format_double(b.period()));
  }
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  require_same_period(a, b);
  const int c = std::max(a.cutoff(), b.cutoff());
  double m = 0;
  for_each_mode(c, [&](const ModeIndex& k) { m = std::max(m, std::abs(a(k) - b(k))); });
  return m;
}

SpectralParams spectral_params(int m, double l) {
  if (m < 1) throw ValidationError("spectral_params: m must be >= 1");
  if (!(l > 0)) throw ValidationError("spectral_params: period must be positive");
  SpectralParams p;
  p.lambda = kTwoPi * kTwoPi / (l * l);
  const double mp1 = m + 1.0;
  p.Lambda = p.lambda * mp1 * mp1;
  p.delta = 1.0 / (mp1 * mp1);
  p.L = 1.0 + std::log(2.0 * m * m);
  if (m % 2 == 0) {
    const int n = m / 2;
    p.delta1 = 1.0 / ((n + 1.0) * (n + 1.0));
    p.L1 = 1.0 + std::log(2.0 * n * n);
  }
  return p;
}

int dof_count(int m) {
  if (m < 1) throw ValidationError("dof_count: m must be >= 1");
  return 4 * m * m + 4 * m;
}

SpectralField project(const SpectralField& u, Projection which, int m) {
  if (m < 1) throw ValidationError("project: m must be >= 1");
  if ((which == Projection::P_p || which == Projection::P_q) && m % 2 != 0) {
    throw ValidationError("project: P_p/P_q need an even cutoff m = 2n, got m = " + std::to_string(m));
  }
  const int n = m / 2;
  auto keep = [&](int j1, int j2) {
    const int r = std::max(j1, j2);
    switch (which) {
      case Projection::P_m: return r <= m;
      case Projection::Q_m: return r > m;
      case Projection::P_p: return r <= n;
      case Projection::P_q: return r > n && r <= m;
    }
    return false;
  };
  SpectralField out = u;
  auto c = out.coeffs();
  for (int j1 = 0; j1 <= u.cutoff(); ++j1) {
    for (int j2 = 0; j2 <= u.cutoff(); ++j2) {
      if (keep(j1, j2)) continue;
      std::fill_n(c.begin() + static_cast<std::ptrdiff_t>(out.slot(j1, j2, Variant::SPlus)), 4, 0.0);
    }
  }
  return out;
}

bool in_p_block(const SpectralField& u, int m) {
  const auto c = u.coeffs();
  for (int j1 = 0; j1 <= u.cutoff(); ++j1) {
    for (int j2 = 0; j2 <= u.cutoff(); ++j2) {
      if (std::max(j1, j2) <= m) continue;
      for (int v = 1; v <= 4; ++v) {
        if (c[u.slot(j1, j2, static_cast<Variant>(v))] != 0.0) return false;
      }
    }
  }
  return true;
}

bool in_q_block(const SpectralField& u, int m) {
  const auto c = u.coeffs();
  const int top = std::min(m, u.cutoff());
  for (int j1 = 0; j1 <= top; ++j1) {
    for (int j2 = 0; j2 <= top; ++j2) {
      for (int v = 1; v <= 4; ++v) {
        if (c[u.slot(j1, j2, static_cast<Variant>(v))] != 0.0) return false;
      }
    }
  }
  return true;
}

double inner(const SpectralField& u, const SpectralField& v) {
  require_same_period(u, v);
  const int c = std::min(u.cutoff(), v.cutoff());
  double sum = 0;
  for_each_mode(c, [&](const ModeIndex& k) { sum += u(k) * v(k); });
  return sum;
}

double norm_l2(const SpectralField& u) {
  return std::sqrt(weighted_sum(u, [](double) { return 1.0; }));
}

double norm_h1(const SpectralField& u) {
  return std::sqrt(weighted_sum(u, [](double lam) { return lam; }));
}

double norm_lap(const SpectralField& u) {
  return std::sqrt(weighted_sum(u, [](double lam) { return lam * lam; }));
}

SpectralField inv_nuA(const SpectralField& u, double nu) {
  if (!(nu > 0)) throw ValidationError("inv_nuA: viscosity must be positive");
  SpectralField out = u;
  for_each_coeff(out, [nu](double& c, double lam) { c /= nu * lam; });
  return out;
}

SpectralField nuA(const SpectralField& u, double nu) {
  SpectralField out = u;
  for_each_coeff(out, [nu](double& c, double lam) { c *= nu * lam; });
  return out;
}

SpectralField random_field(int cutoff, std::uint64_t seed, double decay, double period) {
  SpectralField out(period, cutoff);
  std::mt19937_64 engine(seed);
  for_each_mode(cutoff, [&](const ModeIndex& k) {
    // Explicit 53-bit conversion: std distributions are not portable bit-for-bit.
    const double r = static_cast<double>(engine() >> 11) * 0x1p-53;
    const double amp = std::pow(wavenumber_sq(k.j1, k.j2), -decay);
    out.set(k, (2.0 * r - 1.0) * amp);
  });
  return out;
}

namespace {

struct ModeGeometry {
  double e1, e2;    // polarization (unit, perpendicular to the wavevector)
  double k1, k2;    // d(phase)/dx
  double phase0;    // phase = k1 x1 + k2 x2
  bool is_sine;
};

ModeGeometry geometry(const ModeIndex& mode, double l) {
  const bool plus = mode.variant == Variant::SPlus || mode.variant == Variant::CPlus;
  const double sgn = plus ? 1.0 : -1.0;
  const double norm = std::sqrt(wavenumber_sq(mode.j1, mode.j2));
  ModeGeometry g{};
  g.e1 = mode.j2 / norm;
  g.e2 = -sgn * mode.j1 / norm;
  g.k1 = kTwoPi * mode.j1 / l;
  g.k2 = sgn * kTwoPi * mode.j2 / l;
  g.is_sine = mode.variant == Variant::SPlus || mode.variant == Variant::SMinus;
  return g;
}

}  // namespace

Vec2 basis_value(const ModeIndex& mode, double l, double x1, double x2) {
  const auto g = geometry(mode, l);
  const double theta = g.k1 * x1 + g.k2 * x2;
  const double amp = std::numbers::sqrt2 / l * (g.is_sine ? std::sin(theta) : std::cos(theta));
  return {amp * g.e1, amp * g.e2};
}

Mat2 basis_gradient(const ModeIndex& mode, double l, double x1, double x2) {
  const auto g = geometry(mode, l);
  const double theta = g.k1 * x1 + g.k2 * x2;
  const double d = std::numbers::sqrt2 / l * (g.is_sine ? std::cos(theta) : -std::sin(theta));
  return Mat2{Vec2{d * g.e1 * g.k1, d * g.e1 * g.k2}, Vec2{d * g.e2 * g.k1, d * g.e2 * g.k2}};
}

Vec2 evaluate_direct(const SpectralField& u, double x1, double x2) {
  Vec2 out{0, 0};
  for_each_mode(u.cutoff(), [&](const ModeIndex& k) {
    const double c = u(k);
    if (c == 0.0) return;
    const auto w = basis_value(k, u.period(), x1, x2);
    out[0] += c * w[0];
    out[1] += c * w[1];
  });
  return out;
}

Mat2 gradient_direct(const SpectralField& u, double x1, double x2) {
  Mat2 out{};
  for_each_mode(u.cutoff(), [&](const ModeIndex& k) {
    const double c = u(k);
    if (c == 0.0) return;
    const auto g = basis_gradient(k, u.period(), x1, x2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) out[i][j] += c * g[i][j];
    }
  });
  return out;
}

void write_field(std::ostream& os, const SpectralField& u) {
  os << "ns-field v1 l=" << format_double(u.period()) << " cutoff=" << u.cutoff() << '\n';
  for_each_mode(u.cutoff(), [&](const ModeIndex& k) {
    const double c = u(k);
    if (is_positive_zero(c)) return;
    os << k.j1 << ',' << k.j2 << ',' << static_cast<int>(k.variant) << ',' << format_double(c) << '\n';
  });
}

SpectralField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("ns-field: empty input");
  std::istringstream header(line);
  std::string magic, version, lpart, cpart;
  header >> magic >> version >> lpart >> cpart;
  if (magic != "ns-field" || version != "v1" || lpart.rfind("l=", 0) != 0 || cpart.rfind("cutoff=", 0) != 0) {
    throw ValidationError("ns-field: bad header '" + line + "'");
  }
  const double l = parse_double(std::string_view(lpart).substr(2));
  const auto cutoff = parse_int(std::string_view(cpart).substr(7));
  SpectralField out(l, static_cast<int>(cutoff));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string_view rest(line);
    std::array<std::string_view, 4> cols;
    for (int i = 0; i < 4; ++i) {
      const auto pos = rest.find(',');
      if ((i < 3) == (pos == std::string_view::npos)) {
        throw ValidationError("ns-field: line " + std::to_string(lineno) + " needs 4 columns");
      }
      cols[i] = rest.substr(0, pos);
      if (i < 3) rest.remove_prefix(pos + 1);
    }
    const ModeIndex k{static_cast<int>(parse_int(cols[0])), static_cast<int>(parse_int(cols[1])),
                      static_cast<Variant>(parse_int(cols[2]))};
    if (!is_canonical(k) || k.j1 > cutoff || k.j2 > cutoff) {
      throw ValidationError("ns-field: line " + std::to_string(lineno) + " names an invalid mode");
    }
    const double c = parse_double(cols[3]);
    if (!std::isfinite(c)) throw ValidationError("ns-field: non-finite coefficient at line " + std::to_string(lineno));
    out.coeffs()[out.slot(k.j1, k.j2, k.variant)] = c;
  }
  return out;
}

void save_field(const std::string& path, const SpectralField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + path);
  write_field(os, u);
}

SpectralField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot read " + path);
  return read_field(is);
}

}  // namespace mgns
