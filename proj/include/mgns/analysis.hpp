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

// Error tables against a reference trajectory, convergence-order fits and
// small-scale diagnostics.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgns/config.hpp"
#include "mgns/ladder.hpp"
#include "mgns/time_integration.hpp"

namespace mgns {

struct ErrorRow {
  int m = 0;
  double delta = 0;    // 1 / (m + 1)^2
  int k = 0;           // ladder level
  Norm norm = Norm::L2;
  double err_T = 0;    // error at the final time
  double err_sup = 0;  // sup over grid times in [t_skip, T]

  friend bool operator==(const ErrorRow&, const ErrorRow&) = default;
};

struct ErrorTable {
  std::vector<ErrorRow> rows;

  friend bool operator==(const ErrorTable&, const ErrorTable&) = default;
};

/// Errors of every ladder level against the reference (sampled on the ladder
/// grid or interpolated onto it). The reference keeps all its modes, so the
/// part beyond M_out counts as error.
ErrorTable error_table(const LadderResult& ladder, const Trajectory& reference, const std::vector<Norm>& norms,
                       double t_skip);

enum class Measure { AtT, Sup };

struct EocFit {
  int k = 0;
  Norm norm = Norm::L2;
  Measure measure = Measure::AtT;
  double slope = 0;
  double intercept = 0;
  std::vector<int> m_used;              // cutoffs that entered the fit
  std::vector<std::string> warnings;    // excluded points
};

/// Least-squares slope of log(error) against log(delta) over the rows of
/// level k and the given norm; zero or non-finite errors are skipped with a
/// warning. Throws when fewer than two points remain.
EocFit eoc_fit(const ErrorTable& table, int k, Norm norm, Measure measure = Measure::AtT);

/// Least-squares line through (log x, log y); returns {slope, intercept}.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

void write_error_csv(std::ostream& os, const ErrorTable& table);
ErrorTable read_error_csv(std::istream& is);

struct DiagRow {
  int m = 0;
  double delta = 0;
  double q_l2 = 0;   // sup |Q_m u|
  double q_h1 = 0;   // sup ||Q_m u||
  double q_lap = 0;  // sup |Laplacian Q_m u|
  double q_dt = 0;   // sup |(Q_m u)'| by backward differences
  // Present when the P_p / P_q split is requested (even m = 2n).
  std::optional<double> delta1;      // 1 / (n + 1)^2
  std::optional<double> pq_l2;       // sup |P_q u|
  std::optional<double> pq_h1;       // sup ||P_q u||
  std::optional<double> pp_residual; // sup max-abs of Q_m B(P_p u, P_p u)
};

struct DiagFit {
  std::string column;
  double slope = 0;
  double intercept = 0;
  std::size_t points = 0;
};

struct Diagnostics {
  std::vector<DiagRow> rows;
  std::vector<DiagFit> fits;  // slopes of the sup norms against delta (or delta1)
};

Diagnostics smallscale_diagnostics(const Trajectory& reference, const std::vector<int>& m_list, double t_skip,
                                   bool pp_split = false);

void write_diag_csv(std::ostream& os, const Diagnostics& diag);

/// eoc.json body: one entry per (k, norm, measure).
std::string eoc_json(const std::vector<EocFit>& fits, const std::string& config_hash);
std::string diag_json(const Diagnostics& diag, const std::string& config_hash);

}  // namespace mgns
