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

// Experiment configuration: a flat TOML file of key = value pairs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgns/ladder.hpp"
#include "mgns/spectral_basis.hpp"

namespace mgns {

enum class Norm { L2, H1, LAP };

std::string_view norm_name(Norm n);
Norm parse_norm(std::string_view name);
/// |u|, ||u|| = |grad u| or |Laplacian u|.
double norm_of(const SpectralField& u, Norm n);

enum class ForcingKind { Benchmark, Steady, None, File };
enum class InitialKind { Random, Mode, File };

struct ExperimentConfig {
  double l = 6.283185307179586;
  double nu = 1.0;
  double T = 2.0;
  double h = 1e-3;
  int m = 8;                                // cutoff of the `run` subcommand
  int levels = 2;                           // highest ladder level K
  std::vector<int> sweep{4, 8, 12, 16};     // cutoffs of the `converge` subcommand
  std::optional<double> t_skip;             // start of the error window; T/2 when unset
  std::vector<Norm> norms{Norm::L2};
  int m_out_factor = 2;                     // M_out = m_out_factor * m
  int m_ref = 0;                            // reference cutoff; 0 selects max(4, 2 m_out_factor) * largest m
  int h_ref_divisor = 4;                    // reference step h / h_ref_divisor
  std::uint64_t seed = 7;
  ForcingKind forcing = ForcingKind::Benchmark;
  double forcing_amplitude = 100.0;
  std::string forcing_file;
  InitialKind initial = InitialKind::Random;
  int initial_cutoff = 8;
  double initial_decay = 1.0;
  double initial_amplitude = 1.0;
  std::string initial_file;
  ModeIndex mode{1, 1, Variant::SPlus};     // used by steady forcing and mode initial data
  bool pp_diagnostics = false;
  std::string output_dir = "out";
  int save_stride = 100;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  double transient_skip() const { return t_skip ? *t_skip : 0.5 * T; }
  int largest_m() const;
  /// Reference cutoff for runs up to cutoff largest: m_ref, or max(4, 2 m_out_factor) * largest.
  int reference_cutoff(int largest) const { return m_ref > 0 ? m_ref : std::max(4, 2 * m_out_factor) * largest; }
  double reference_step() const { return h / h_ref_divisor; }
};

/// Parses and validates config text; relative file paths are resolved against base_dir.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>",
                              const std::string& base_dir = {});
ExperimentConfig load_config(const std::string& path);

/// Checks every invariant; throws ValidationError naming the field.
void validate_config(const ExperimentConfig& cfg);

/// Canonical TOML text (fixed key order, shortest round-trip numbers).
std::string to_toml(const ExperimentConfig& cfg);
void save_config(const std::string& path, const ExperimentConfig& cfg);

/// 16 hex digits of the FNV-1a 64 hash of the canonical text, output_dir excluded.
std::string config_hash(const ExperimentConfig& cfg);

/// Problem at cutoff m (M_out = m_out_factor * m) described by the config.
ProblemSpec build_problem(const ExperimentConfig& cfg, int m);

}  // namespace mgns
