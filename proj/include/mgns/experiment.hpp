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

// Experiment drivers behind the command-line subcommands.

#include <iosfwd>
#include <string>
#include <vector>

#include "mgns/analysis.hpp"
#include "mgns/config.hpp"
#include "mgns/ladder.hpp"
#include "mgns/time_integration.hpp"

namespace mgns {

struct RunOptions {
  bool postprocess_only = false;
  Exec exec = Exec::Parallel;
  std::string out_dir;          // empty: write nothing
  std::ostream* log = nullptr;  // progress and warnings
};

/// Reference trajectory for ladder runs up to cutoff largest_m, sampled on the
/// ladder grid.
Trajectory compute_reference(const ExperimentConfig& cfg, int largest_m, const RunOptions& opts = {});

struct RunResult {
  LadderResult ladder;
  ErrorTable table;
};

/// One ladder at cfg.m against its reference (`run`).
RunResult run_single(const ExperimentConfig& cfg, const Trajectory& reference, const RunOptions& opts = {});

struct ConvergeResult {
  ErrorTable table;
  std::vector<EocFit> fits;
  std::vector<std::string> warnings;
};

/// Ladders for every sweep cutoff against one shared reference (`converge`).
ConvergeResult run_convergence(const ExperimentConfig& cfg, const Trajectory& reference, const RunOptions& opts = {});

/// Small-scale diagnostics of the reference over the sweep (`diag`).
Diagnostics run_diagnostics(const ExperimentConfig& cfg, const Trajectory& reference, const RunOptions& opts = {});

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick invariant checks of a build (`selftest`).
std::vector<SelftestCheck> run_selftest();

}  // namespace mgns
