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

#include "mgns/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mgns/errors.hpp"
#include "mgns/nonlinear.hpp"
#include "mgns/numfmt.hpp"

namespace mgns {

namespace {

double delta_of(int m) { return 1.0 / ((m + 1.0) * (m + 1.0)); }

bool in_window(const Trajectory& tr, std::size_t i, double t_skip) {
  return tr.time(i) >= t_skip - 1e-9 * tr.h() || i + 1 == tr.size();
}

SpectralField reference_at(const Trajectory& reference, double t) {
  if (auto idx = reference.index_of(t)) return reference[*idx];
  try {
    return sample_interpolate(reference, t);
  } catch (const ValidationError&) {
    throw ValidationError("error_table: time " + format_double(t) + " lies outside the reference grid [" +
                          format_double(reference.t0()) + ", " + format_double(reference.t_end()) + "]");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

std::string_view measure_name(Measure m) { return m == Measure::AtT ? "T" : "sup"; }

}  // namespace

ErrorTable error_table(const LadderResult& ladder, const Trajectory& reference, const std::vector<Norm>& norms,
                       double t_skip) {
  if (reference.empty()) throw ValidationError("error_table: empty reference trajectory");
  const int m = ladder.spec.m;
  ErrorTable table;
  for (const auto& level : ladder.levels) {
    const Trajectory& u = level.u;
    if (u.empty()) throw ValidationError("error_table: level " + std::to_string(level.k) + " has no samples");
    if (u.back().cutoff() > reference.back().cutoff()) {
      throw ValidationError("error_table: reference cutoff " + std::to_string(reference.back().cutoff()) +
                            " is below the ladder cutoff " + std::to_string(u.back().cutoff()));
    }
    if (std::abs(u.t_end() - reference.t_end()) > 1e-9 * u.h()) {
      throw ValidationError("error_table: ladder ends at t = " + format_double(u.t_end()) +
                            " but the reference ends at t = " + format_double(reference.t_end()));
    }
    const int cutoff = reference.back().cutoff();
    std::vector<double> err_T(norms.size(), 0.0), err_sup(norms.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!in_window(u, i, t_skip)) continue;
      const bool last = i + 1 == u.size();
      SpectralField diff = last ? reference.back() : reference_at(reference, u.time(i));
      diff -= u[i].resized(cutoff);
      for (std::size_t n = 0; n < norms.size(); ++n) {
        const double e = norm_of(diff, norms[n]);
        if (!std::isfinite(e)) throw NumericalError("error_table: non-finite error at t = " + format_double(u.time(i)));
        err_sup[n] = std::max(err_sup[n], e);
        if (last) err_T[n] = e;
      }
    }
    for (std::size_t n = 0; n < norms.size(); ++n) {
      table.rows.push_back(ErrorRow{m, delta_of(m), level.k, norms[n], err_T[n], err_sup[n]});
    }
  }
  return table;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ValidationError("loglog_fit: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (!(sxx > 0)) throw ValidationError("loglog_fit: abscissae must not all coincide");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

EocFit eoc_fit(const ErrorTable& table, int k, Norm norm, Measure measure) {
  EocFit fit;
  fit.k = k;
  fit.norm = norm;
  fit.measure = measure;
  std::vector<double> x, y;
  for (const auto& row : table.rows) {
    if (row.k != k || row.norm != norm) continue;
    const double e = measure == Measure::AtT ? row.err_T : row.err_sup;
    if (!(e > 0) || !std::isfinite(e) || !(e > std::numeric_limits<double>::min())) {
      fit.warnings.push_back("eoc_fit: m = " + std::to_string(row.m) + ", k = " + std::to_string(k) + ", " +
                             std::string(norm_name(norm)) + ": error " + format_double(e) + " excluded from the fit");
      continue;
    }
    x.push_back(row.delta);
    y.push_back(e);
    fit.m_used.push_back(row.m);
  }
  if (x.size() < 2) {
    throw ValidationError("eoc_fit: level " + std::to_string(k) + ", norm " + std::string(norm_name(norm)) +
                          " has " + std::to_string(x.size()) + " usable point(s); at least 2 are required");
  }
  std::tie(fit.slope, fit.intercept) = loglog_fit(x, y);
  return fit;
}

void write_error_csv(std::ostream& os, const ErrorTable& table) {
  os << "m,delta,k,norm,err_T,err_sup\n";
  for (const auto& r : table.rows) {
    os << r.m << ',' << format_double(r.delta) << ',' << r.k << ',' << norm_name(r.norm) << ','
       << format_double(r.err_T) << ',' << format_double(r.err_sup) << '\n';
  }
}

ErrorTable read_error_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "m,delta,k,norm,err_T,err_sup") {
    throw ValidationError("errors.csv: unexpected header");
  }
  ErrorTable table;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 6) throw ValidationError("errors.csv: expected 6 columns in '" + line + "'");
    table.rows.push_back(ErrorRow{static_cast<int>(parse_int(cells[0])), parse_double(cells[1]),
                                  static_cast<int>(parse_int(cells[2])), parse_norm(cells[3]),
                                  parse_double(cells[4]), parse_double(cells[5])});
  }
  return table;
}

Diagnostics smallscale_diagnostics(const Trajectory& reference, const std::vector<int>& m_list, double t_skip,
                                   bool pp_split) {
  if (reference.empty()) throw ValidationError("smallscale_diagnostics: empty reference trajectory");
  const int M_ref = reference.back().cutoff();
  Diagnostics diag;
  for (int m : m_list) {
    if (m < 1) throw ValidationError("smallscale_diagnostics: m must be >= 1");
    if (m >= M_ref) {
      throw ValidationError("smallscale_diagnostics: m = " + std::to_string(m) + " must be below the reference cutoff " +
                            std::to_string(M_ref));
    }
    if (pp_split && m % 2 != 0) {
      throw ValidationError("smallscale_diagnostics: the P_p/P_q split needs even m = 2n (got " + std::to_string(m) + ")");
    }
    DiagRow row;
    row.m = m;
    row.delta = delta_of(m);
    if (pp_split) {
      row.delta1 = delta_of(m / 2);
      row.pq_l2 = 0.0;
      row.pq_h1 = 0.0;
      row.pp_residual = 0.0;
    }
    const bool have_dt = reference.size() >= 2;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      if (!in_window(reference, i, t_skip)) continue;
      const SpectralField q = project(reference[i], Projection::Q_m, m);
      row.q_l2 = std::max(row.q_l2, norm_l2(q));
      row.q_h1 = std::max(row.q_h1, norm_h1(q));
      row.q_lap = std::max(row.q_lap, norm_lap(q));
      if (have_dt) row.q_dt = std::max(row.q_dt, norm_l2(project(time_derivative(reference, i), Projection::Q_m, m)));
      if (pp_split) {
        const SpectralField pq = project(reference[i], Projection::P_q, m);
        const SpectralField pp = project(reference[i], Projection::P_p, m).resized(m / 2);
        row.pq_l2 = std::max(*row.pq_l2, norm_l2(pq));
        row.pq_h1 = std::max(*row.pq_h1, norm_h1(pq));
        row.pp_residual =
            std::max(*row.pp_residual, project(bilinear_B(pp, pp, 2 * m), Projection::Q_m, m).max_abs());
      }
    }
    diag.rows.push_back(row);
  }

  auto add_fit = [&](const std::string& column, auto x_of, auto y_of) {
    std::vector<double> x, y;
    for (const auto& r : diag.rows) {
      const double v = y_of(r);
      if (v > std::numeric_limits<double>::min() && std::isfinite(v)) {
        x.push_back(x_of(r));
        y.push_back(v);
      }
    }
    if (x.size() < 2) return;
    const auto [slope, intercept] = loglog_fit(x, y);
    diag.fits.push_back(DiagFit{column, slope, intercept, x.size()});
  };
  auto by_delta = [](const DiagRow& r) { return r.delta; };
  add_fit("q_l2", by_delta, [](const DiagRow& r) { return r.q_l2; });
  add_fit("q_h1", by_delta, [](const DiagRow& r) { return r.q_h1; });
  add_fit("q_lap", by_delta, [](const DiagRow& r) { return r.q_lap; });
  add_fit("q_dt", by_delta, [](const DiagRow& r) { return r.q_dt; });
  if (pp_split) {
    auto by_delta1 = [](const DiagRow& r) { return *r.delta1; };
    add_fit("pq_l2", by_delta1, [](const DiagRow& r) { return *r.pq_l2; });
    add_fit("pq_h1", by_delta1, [](const DiagRow& r) { return *r.pq_h1; });
  }
  return diag;
}

void write_diag_csv(std::ostream& os, const Diagnostics& diag) {
  const bool pp = !diag.rows.empty() && diag.rows.front().delta1.has_value();
  os << "m,delta,q_l2,q_h1,q_lap,q_dt" << (pp ? ",delta1,pq_l2,pq_h1,pp_residual" : "") << '\n';
  for (const auto& r : diag.rows) {
    os << r.m << ',' << format_double(r.delta) << ',' << format_double(r.q_l2) << ',' << format_double(r.q_h1) << ','
       << format_double(r.q_lap) << ',' << format_double(r.q_dt);
    if (pp) {
      os << ',' << format_double(*r.delta1) << ',' << format_double(*r.pq_l2) << ',' << format_double(*r.pq_h1) << ','
         << format_double(*r.pp_residual);
    }
    os << '\n';
  }
}

std::string eoc_json(const std::vector<EocFit>& fits, const std::string& config_hash) {
  nlohmann::ordered_json doc;
  doc["config_hash"] = config_hash;
  doc["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : fits) {
    nlohmann::ordered_json e;
    e["k"] = f.k;
    e["norm"] = norm_name(f.norm);
    e["measure"] = measure_name(f.measure);
    e["slope"] = f.slope;
    e["intercept"] = f.intercept;
    e["points"] = f.m_used.size();
    e["m_used"] = f.m_used;
    // Predicted L2 rate 5/4 + k/2; no prediction is made for the other norms.
    if (f.norm == Norm::L2) e["predicted_slope"] = 1.25 + 0.5 * f.k;
    else e["predicted_slope"] = nullptr;
    doc["fits"].push_back(std::move(e));
  }
  return doc.dump(2) + "\n";
}

std::string diag_json(const Diagnostics& diag, const std::string& config_hash) {
  static const std::pair<const char*, double> kPredicted[] = {
      {"q_l2", 1.0}, {"q_h1", 0.5}, {"q_lap", 0.0}, {"q_dt", 1.0}, {"pq_l2", 1.0}, {"pq_h1", 0.5}};
  nlohmann::ordered_json doc;
  doc["config_hash"] = config_hash;
  doc["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : diag.fits) {
    nlohmann::ordered_json e;
    e["column"] = f.column;
    e["slope"] = f.slope;
    e["intercept"] = f.intercept;
    e["points"] = f.points;
    for (const auto& [name, value] : kPredicted) {
      if (f.column == name) e["predicted_slope"] = value;
    }
    doc["fits"].push_back(std::move(e));
  }
  return doc.dump(2) + "\n";
}

}  // namespace mgns
