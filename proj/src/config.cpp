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

#include "mgns/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <toml++/toml.hpp>

#include "mgns/errors.hpp"
#include "mgns/numfmt.hpp"
#include "mgns/reference.hpp"

namespace mgns {

namespace fs = std::filesystem;

std::string_view norm_name(Norm n) {
  switch (n) {
    case Norm::L2: return "L2";
    case Norm::H1: return "H1";
    case Norm::LAP: return "LAP";
  }
  return "?";
}

Norm parse_norm(std::string_view name) {
  if (name == "L2") return Norm::L2;
  if (name == "H1") return Norm::H1;
  if (name == "LAP") return Norm::LAP;
  throw ValidationError("unknown norm '" + std::string(name) + "' (expected L2, H1 or LAP)");
}

double norm_of(const SpectralField& u, Norm n) {
  switch (n) {
    case Norm::L2: return norm_l2(u);
    case Norm::H1: return norm_h1(u);
    case Norm::LAP: return norm_lap(u);
  }
  return 0;
}

namespace {

constexpr std::string_view kForcingNames[] = {"benchmark", "steady", "none", "file"};
constexpr std::string_view kInitialNames[] = {"random", "mode", "file"};

std::string_view forcing_name(ForcingKind k) { return kForcingNames[static_cast<int>(k)]; }
std::string_view initial_name(InitialKind k) { return kInitialNames[static_cast<int>(k)]; }

[[noreturn]] void field_error(std::string_view key, const std::string& what) {
  throw ValidationError("config field '" + std::string(key) + "': " + what);
}

double get_real(const toml::node& node, std::string_view key) {
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_integer()) return static_cast<double>(v->get());
  field_error(key, "expected a number");
}

long long get_int(const toml::node& node, std::string_view key) {
  if (auto v = node.as_integer()) return v->get();
  field_error(key, "expected an integer");
}

int get_small_int(const toml::node& node, std::string_view key) {
  const long long v = get_int(node, key);
  if (v < -1000000 || v > 1000000) field_error(key, "integer out of range");
  return static_cast<int>(v);
}

std::string get_string(const toml::node& node, std::string_view key) {
  if (auto v = node.as_string()) return v->get();
  field_error(key, "expected a string");
}

bool get_bool(const toml::node& node, std::string_view key) {
  if (auto v = node.as_boolean()) return v->get();
  field_error(key, "expected true or false");
}

const toml::array& get_array(const toml::node& node, std::string_view key) {
  if (auto v = node.as_array()) return *v;
  field_error(key, "expected an array");
}

template <std::size_t N>
int pick(std::string_view key, const std::string& value, const std::string_view (&names)[N]) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == value) return static_cast<int>(i);
  }
  std::string choices;
  for (std::size_t i = 0; i < N; ++i) choices += (i ? ", " : "") + std::string(names[i]);
  field_error(key, "unknown value '" + value + "' (expected one of " + choices + ")");
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

}  // namespace

int ExperimentConfig::largest_m() const {
  int mx = m;
  for (int s : sweep) mx = std::max(mx, s);
  return mx;
}

void validate_config(const ExperimentConfig& c) {
  auto positive = [](std::string_view key, double v) {
    if (!(v > 0) || !std::isfinite(v)) field_error(key, "must be a finite number > 0 (got " + format_double(v) + ")");
  };
  positive("l", c.l);
  positive("nu", c.nu);
  positive("T", c.T);
  positive("h", c.h);
  try {
    step_count(c.T, c.h);
  } catch (const ValidationError&) {
    field_error("h", "must divide T = " + format_double(c.T) + " (got " + format_double(c.h) + ")");
  }
  if (c.levels < 0 || c.levels > 16) field_error("levels", "must lie in 0..16");
  if (c.m < 1) field_error("m", "must be >= 1");
  if (c.sweep.empty()) field_error("sweep", "must list at least one cutoff");
  std::set<int> seen;
  for (int s : c.sweep) {
    if (s < 2) field_error("sweep", "values must be >= 2 (got " + std::to_string(s) + ")");
    if (!seen.insert(s).second) field_error("sweep", "values must be distinct (" + std::to_string(s) + " repeats)");
  }
  if (c.t_skip && (!(*c.t_skip >= 0) || !(*c.t_skip < c.T))) {
    field_error("t_skip", "must satisfy 0 <= t_skip < T (got " + format_double(*c.t_skip) + ")");
  }
  if (c.norms.empty()) field_error("norms", "must list at least one of L2, H1, LAP");
  if (std::set<Norm>(c.norms.begin(), c.norms.end()).size() != c.norms.size()) {
    field_error("norms", "values must be distinct");
  }
  if (c.m_out_factor < 1 || c.m_out_factor > 4) field_error("m_out_factor", "must lie in 1..4");
  if (c.m_ref < 0) field_error("m_ref", "must be >= 0 (0 selects an automatic cutoff)");
  if (c.m_ref > 0 && c.m_ref < 2 * c.m_out_factor * c.largest_m()) {
    field_error("m_ref", "must be >= 2 M_out = " + std::to_string(2 * c.m_out_factor * c.largest_m()));
  }
  if (c.h_ref_divisor < 1) field_error("h_ref_divisor", "must be >= 1");
  if (!(c.forcing_amplitude >= 0) || !std::isfinite(c.forcing_amplitude)) {
    field_error("forcing_amplitude", "must be a finite number >= 0");
  }
  if (c.forcing == ForcingKind::File && c.forcing_file.empty()) field_error("forcing_file", "required when forcing = \"file\"");
  if (c.initial == InitialKind::File && c.initial_file.empty()) field_error("initial_file", "required when initial = \"file\"");
  if (c.initial_cutoff < 1) field_error("initial_cutoff", "must be >= 1");
  const int smallest_ref = std::min(c.reference_cutoff(c.m), c.reference_cutoff(c.largest_m()));
  if (c.initial_cutoff > smallest_ref) {
    field_error("initial_cutoff", "must not exceed the reference cutoff " + std::to_string(smallest_ref));
  }
  if (!(c.initial_decay >= 0) || !std::isfinite(c.initial_decay)) field_error("initial_decay", "must be >= 0");
  if (!std::isfinite(c.initial_amplitude)) field_error("initial_amplitude", "must be finite");
  if (!is_canonical(c.mode)) field_error("mode", "must be a canonical [j1, j2, variant] triple");
  if (std::max(c.mode.j1, c.mode.j2) > c.m_out_factor * std::min(c.m, *std::min_element(c.sweep.begin(), c.sweep.end()))) {
    field_error("mode", "must lie within M_out of every run");
  }
  if (c.pp_diagnostics) {
    for (int s : c.sweep) {
      if (s % 2 != 0) {
        field_error("pp_diagnostics", "the P_p/P_q split needs even cutoffs m = 2n; sweep contains " + std::to_string(s));
      }
    }
    if (c.m % 2 != 0) field_error("pp_diagnostics", "the P_p/P_q split needs an even cutoff m = 2n; m = " + std::to_string(c.m));
  }
  if (c.output_dir.empty()) field_error("output_dir", "must not be empty");
  if (c.save_stride < 1) field_error("save_stride", "must be >= 1");
}

ExperimentConfig parse_config(std::string_view text, const std::string& source, const std::string& base_dir) {
  toml::table table;
  try {
    table = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config " << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
       << e.description();
    throw ValidationError(os.str());
  }

  ExperimentConfig c;
  for (const auto& [key_node, node] : table) {
    const std::string_view key = key_node.str();
    if (key == "l") c.l = get_real(node, key);
    else if (key == "nu") c.nu = get_real(node, key);
    else if (key == "T") c.T = get_real(node, key);
    else if (key == "h") c.h = get_real(node, key);
    else if (key == "m") c.m = get_small_int(node, key);
    else if (key == "levels") c.levels = get_small_int(node, key);
    else if (key == "sweep") {
      c.sweep.clear();
      for (const auto& v : get_array(node, key)) c.sweep.push_back(get_small_int(v, key));
    } else if (key == "t_skip") c.t_skip = get_real(node, key);
    else if (key == "norms") {
      c.norms.clear();
      for (const auto& v : get_array(node, key)) {
        try {
          c.norms.push_back(parse_norm(get_string(v, key)));
        } catch (const ValidationError& e) {
          field_error(key, e.what());
        }
      }
    } else if (key == "m_out_factor") c.m_out_factor = get_small_int(node, key);
    else if (key == "m_ref") c.m_ref = get_small_int(node, key);
    else if (key == "h_ref_divisor") c.h_ref_divisor = get_small_int(node, key);
    else if (key == "seed") {
      const long long s = get_int(node, key);
      if (s < 0) field_error(key, "must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "forcing") c.forcing = static_cast<ForcingKind>(pick(key, get_string(node, key), kForcingNames));
    else if (key == "forcing_amplitude") c.forcing_amplitude = get_real(node, key);
    else if (key == "forcing_file") c.forcing_file = resolve(get_string(node, key), base_dir);
    else if (key == "initial") c.initial = static_cast<InitialKind>(pick(key, get_string(node, key), kInitialNames));
    else if (key == "initial_cutoff") c.initial_cutoff = get_small_int(node, key);
    else if (key == "initial_decay") c.initial_decay = get_real(node, key);
    else if (key == "initial_amplitude") c.initial_amplitude = get_real(node, key);
    else if (key == "initial_file") c.initial_file = resolve(get_string(node, key), base_dir);
    else if (key == "mode") {
      const auto& a = get_array(node, key);
      if (a.size() != 3) field_error(key, "expected [j1, j2, variant]");
      const int v = get_small_int(a[2], key);
      if (v < 1 || v > 4) field_error(key, "variant must be 1 (s+), 2 (s-), 3 (c+) or 4 (c-)");
      c.mode = ModeIndex{get_small_int(a[0], key), get_small_int(a[1], key), static_cast<Variant>(v)};
    } else if (key == "pp_diagnostics") c.pp_diagnostics = get_bool(node, key);
    else if (key == "output_dir") c.output_dir = resolve(get_string(node, key), base_dir);
    else if (key == "save_stride") c.save_stride = get_small_int(node, key);
    else field_error(key, "unknown key");
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path, fs::path(path).parent_path().string());
}

std::string to_toml(const ExperimentConfig& c) {
  std::ostringstream os;
  auto ints = [](const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
  };
  os << "l = " << format_double(c.l) << "\n";
  os << "nu = " << format_double(c.nu) << "\n";
  os << "T = " << format_double(c.T) << "\n";
  os << "h = " << format_double(c.h) << "\n";
  os << "m = " << c.m << "\n";
  os << "levels = " << c.levels << "\n";
  os << "sweep = " << ints(c.sweep) << "\n";
  if (c.t_skip) os << "t_skip = " << format_double(*c.t_skip) << "\n";
  os << "norms = [";
  for (std::size_t i = 0; i < c.norms.size(); ++i) os << (i ? ", " : "") << '"' << norm_name(c.norms[i]) << '"';
  os << "]\n";
  os << "m_out_factor = " << c.m_out_factor << "\n";
  os << "m_ref = " << c.m_ref << "\n";
  os << "h_ref_divisor = " << c.h_ref_divisor << "\n";
  os << "seed = " << c.seed << "\n";
  os << "forcing = \"" << forcing_name(c.forcing) << "\"\n";
  os << "forcing_amplitude = " << format_double(c.forcing_amplitude) << "\n";
  if (!c.forcing_file.empty()) os << "forcing_file = " << quoted(c.forcing_file) << "\n";
  os << "initial = \"" << initial_name(c.initial) << "\"\n";
  os << "initial_cutoff = " << c.initial_cutoff << "\n";
  os << "initial_decay = " << format_double(c.initial_decay) << "\n";
  os << "initial_amplitude = " << format_double(c.initial_amplitude) << "\n";
  if (!c.initial_file.empty()) os << "initial_file = " << quoted(c.initial_file) << "\n";
  os << "mode = " << ints({c.mode.j1, c.mode.j2, static_cast<int>(c.mode.variant)}) << "\n";
  os << "pp_diagnostics = " << (c.pp_diagnostics ? "true" : "false") << "\n";
  os << "output_dir = " << quoted(c.output_dir) << "\n";
  os << "save_stride = " << c.save_stride << "\n";
  return os.str();
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write config file " + path);
  out << to_toml(cfg);
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Where results go is not part of the experiment's identity.
  ExperimentConfig keyed = cfg;
  keyed.output_dir = "-";
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_toml(keyed)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

ProblemSpec build_problem(const ExperimentConfig& c, int m) {
  SpectralField f(c.l, 2);
  switch (c.forcing) {
    case ForcingKind::Benchmark: {
      // Band-limited forcing on 1 <= j1, j2 <= 2, scaled to the requested L2 amplitude.
      const SpectralField r = random_field(2, c.seed, 0.0, c.l);
      for_each_mode(2, [&](const ModeIndex& k) {
        if (k.j1 >= 1 && k.j2 >= 1) f.set(k, r(k));
      });
      if (c.forcing_amplitude > 0) f *= c.forcing_amplitude / norm_l2(f);
      else f = SpectralField(c.l, 2);
      break;
    }
    case ForcingKind::Steady:
      f = exact_special_solution(SpecialKind::Steady, c.mode, c.forcing_amplitude, c.l, c.nu)
              .forcing(std::max(c.mode.j1, c.mode.j2));
      break;
    case ForcingKind::None: break;
    case ForcingKind::File: f = load_field(c.forcing_file); break;
  }

  SpectralField u0(c.l, 1);
  switch (c.initial) {
    case InitialKind::Random:
      u0 = random_field(c.initial_cutoff, c.seed + 1, c.initial_decay, c.l);
      u0 *= c.initial_amplitude / norm_l2(u0);
      break;
    case InitialKind::Mode:
      u0 = SpectralField(c.l, std::max(c.mode.j1, c.mode.j2));
      u0.set(c.mode, c.initial_amplitude);
      break;
    case InitialKind::File: u0 = load_field(c.initial_file); break;
  }

  ProblemSpec spec(std::move(f), std::move(u0));
  spec.l = c.l;
  spec.nu = c.nu;
  spec.m = m;
  spec.M_out = c.m_out_factor * m;
  spec.T = c.T;
  spec.h = c.h;
  spec.K = c.levels;
  validate(spec);
  return spec;
}

}  // namespace mgns
