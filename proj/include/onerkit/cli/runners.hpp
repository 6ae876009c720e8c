// Copyright 2026 The onerkit Authors
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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "onerkit/cli/csv.hpp"
#include "onerkit/cli/scenario.hpp"
#include "onerkit/efg/geometry.hpp"
#include "onerkit/oner/effective.hpp"
#include "onerkit/oner/fourier.hpp"
#include "onerkit/oner/rabi_fit.hpp"
#include "onerkit/oner/spin_dynamics.hpp"
#include "onerkit/oner/two_level.hpp"

namespace onerkit::cli {

/// Where notes go; never silent.
struct Log {
  std::ostream& out;
  bool verbose = false;

  void note(const std::string& s) const { out << "note: " << s << '\n'; }
  void info(const std::string& s) const {
    if (verbose) out << "info: " << s << '\n';
  }
};

inline constexpr int kFourierOrders = 10;

namespace detail {

inline const oner::StatePairNqi& require_pair(const Resolved& r) {
  if (!r.pair) throw Error(ErrorKind::Config, "this command needs NQI tensors (inline or efg_table)");
  return *r.pair;
}

inline std::string m_label(int two_m) { return spin::format_m(two_m); }

}  // namespace detail

inline void run_steady_state(const Scenario& scenario, std::ostream& out, const Log&) {
  const auto r = resolve(scenario);
  const auto ss = oner::steady_state(r.params);
  CsvWriter csv(out);
  csv.header({"rho_ee", "rho_eg_re", "rho_eg_im"});
  csv.row({ss.rho_ee, ss.rho_eg.real(), ss.rho_eg.imag()});
}

/// Square-pulse series over pulse_periods periods plus the Fourier
/// coefficients of the last period.
inline void run_pulse(const Scenario& scenario, std::ostream& out, const Log& log) {
  const auto r = resolve(scenario);
  auto p = r.params;
  if (!scenario.pulse_period_s) {
    const auto plan = oner::plan(detail::require_pair(r), r.nucleus, scenario.b0_t, scenario.theta_rad,
                                 r.params, r.transition, false);
    p.period = plan.period();
    log.info("pulse period from the " + r.transition.label() + " repetition rate");
  }
  if (scenario.unit_mode == UnitMode::Scaled) {
    p = oner::scale_electronic_tier(p, 1.0 / p.period, scenario.tier_ratio);
  }
  const int sps = std::max(scenario.samples_per_period, 2 * kFourierOrders + 1);
  if (sps != scenario.samples_per_period) {
    log.note("samples_per_period raised to " + std::to_string(sps) + " for the Fourier block");
  }
  const auto run = oner::simulate_pulsed_two_level(p, scenario.pulse_periods, sps);
  for (const auto& w : run.warnings) log.note(w);

  CsvWriter csv(out);
  csv.header({"t", "rho_ee", "rho_eg_re", "rho_eg_im"});
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    csv.row({run.times[k], run.rho_ee[k], run.rho_eg[k].real(), run.rho_eg[k].imag()});
  }
  const std::size_t first = static_cast<std::size_t>(scenario.pulse_periods - 1) * sps;
  const auto c = oner::fourier_coefficients(std::span(run.times).subspan(first, sps + 1),
                                            std::span(run.rho_ee).subspan(first, sps + 1), p.period,
                                            kFourierOrders);
  csv.separator();
  csv.header({"n", "a_n", "b_n"});
  for (int n = 0; n <= kFourierOrders; ++n) csv.row({static_cast<long long>(n), c.a[n], c.b[n]});
}

/// First-order line positions for every |dm| in {1, 2} transition.
inline void run_spectrum(const Scenario& scenario, std::ostream& out, const Log& log) {
  const auto r = resolve(scenario);
  const auto& pair = detail::require_pair(r);
  const double rho = oner::steady_state(r.params).rho_ee;
  const auto eff = oner::q0_q1(pair.rotated(scenario.theta_rad), rho);
  const spin::SpinSystem s(r.nucleus.two_i);
  const double gamma = r.nucleus.gamma_hz_per_t();
  if (const auto w = spin::first_order_energies(gamma, scenario.b0_t, eff.q0(2, 2), s).warning) log.note(*w);
  CsvWriter csv(out);
  csv.header({"transition", "zeeman_Hz", "quadrupole_correction_Hz", "total_Hz"});
  for (const auto& t : spin::quadrupole_transitions(s)) {
    const double zeeman = std::abs(gamma * scenario.b0_t) * t.delta_m();
    const double correction = -units::rad_to_hz(spin::transition_correction(t, eff.q0(2, 2), s));
    csv.row({t.label(), zeeman, correction, zeeman + correction});
  }
}

struct RabiMapRow {
  double theta;
  double field_au;
  spin::Transition transition;
  double rabi_hz;
  double correction_hz;
};

/// Rabi frequency and line shift over the sweep grid. Rows are ordered by
/// theta index, then field index, then transition.
inline std::vector<RabiMapRow> rabi_map(const Scenario& scenario, unsigned workers = 0) {
  const auto r = resolve(scenario);
  const auto* table_src = std::get_if<TableNqi>(&scenario.nqi);
  if (!table_src || !r.table) throw Error(ErrorKind::Config, "rabi-map needs an efg_table source");
  if (!scenario.sweep) throw Error(ErrorKind::Config, "rabi-map needs the sweep_* keys");
  const SweepGrid& g = *scenario.sweep;
  for (const double f : {g.field_min_au, g.field_max_au}) {
    for (const auto& state : {table_src->ground_state, table_src->excited_state}) {
      r.table->interpolate_khz(state, f);  // refuses extrapolation, naming the field
    }
  }
  const spin::SpinSystem s(r.nucleus.two_i);
  const auto transitions = spin::quadrupole_transitions(s);
  const double rho = oner::steady_state(r.params).rho_ee;
  const std::size_t nodes = static_cast<std::size_t>(g.theta_count) * g.field_count;
  std::vector<std::vector<RabiMapRow>> results(nodes);

  auto evaluate = [&](std::size_t node) {
    const int i = static_cast<int>(node / g.field_count);
    const int j = static_cast<int>(node % g.field_count);
    const double theta = g.theta(i), field = g.field(j);
    const auto pair = pair_from_table(*r.table, *table_src, field);
    const auto eff = oner::q0_q1(pair.rotated(theta), rho);
    for (const auto& t : transitions) {
      const auto p = oner::detail::finish_plan(eff, rho, r.nucleus, scenario.b0_t, t, false);
      results[node].push_back(
          {theta, field, t, p.predicted_rabi_hz, -units::rad_to_hz(spin::transition_correction(t, eff.q0(2, 2), s))});
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, nodes));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t n; (n = next.fetch_add(1)) < nodes;) evaluate(n);
      } catch (...) {
        errors[w] = std::current_exception();
        next = nodes;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<RabiMapRow> rows;
  rows.reserve(nodes * transitions.size());
  for (auto& node : results) rows.insert(rows.end(), node.begin(), node.end());
  return rows;
}

inline void run_rabi_map(const Scenario& scenario, std::ostream& out, const Log&, unsigned workers = 0) {
  CsvWriter csv(out);
  csv.header({"theta", "field", "transition", "rabi_Hz", "correction_Hz"});
  for (const auto& row : rabi_map(scenario, workers)) {
    csv.row({row.theta, row.field_au, row.transition.label(), row.rabi_hz, row.correction_hz});
  }
}

struct CoupledSummary {
  oner::RabiFit fit;
  double predicted_hz = 0.0;
  double relative_deviation = 0.0;  // NaN without oscillation or prediction
  double effective_max_deviation = 0.0;
};

struct CoupledReport {
  oner::CoupledResult result;
  oner::SpinSeries effective;
  CoupledSummary summary;
};

/// Coupled electronic-nuclear run alongside the effective spin-only model.
inline CoupledReport coupled_report(const Scenario& scenario, const Log& log) {
  const auto r = resolve(scenario);
  const auto& pair = detail::require_pair(r);
  const auto plan = oner::plan(pair, r.nucleus, scenario.b0_t, scenario.theta_rad, r.params, r.transition, false);
  double duration = 0.0;
  if (scenario.duration_rabi_periods && plan.predicted_rabi_hz > 0.0) {
    duration = *scenario.duration_rabi_periods / plan.predicted_rabi_hz;
  } else if (scenario.duration_s) {
    duration = *scenario.duration_s;
  } else {
    throw Error(ErrorKind::Config,
                "coupled run needs duration_s, or duration_rabi_periods with a nonzero predicted Rabi "
                "frequency");
  }
  auto params = r.params;
  if (scenario.unit_mode == UnitMode::Scaled) {
    params = oner::scale_electronic_tier(params, plan.repetition_rate_hz, scenario.tier_ratio);
    if (const auto w = oner::spin_tier_warning(pair, r.nucleus, scenario.b0_t, scenario.tier_ratio)) {
      log.note(*w);
    }
  }
  oner::CoupledOptions opt;
  opt.samples_per_period = scenario.samples_per_period;
  if (scenario.carrier_hz) opt.carrier = units::hz_to_rad(*scenario.carrier_hz);
  CoupledReport rep{oner::simulate_coupled(pair, r.nucleus, scenario.b0_t, scenario.theta_rad, params,
                                           r.transition, duration, opt)};
  for (const auto& w : rep.result.warnings) log.note(w);

  oner::SpinRunOptions eff_opt;
  eff_opt.samples_per_period = scenario.samples_per_period;
  rep.effective = oner::simulate_spin_effective(rep.result.plan.drive(), r.nucleus, scenario.b0_t,
                                                r.transition.two_m_from, duration, eff_opt);

  auto& sum = rep.summary;
  sum.predicted_hz = rep.result.plan.predicted_rabi_hz;
  const double nu_ref = sum.predicted_hz > 0.0 ? sum.predicted_hz : 1.0 / duration;
  sum.fit = oner::fit_rabi(rep.result.spin.times, rep.result.spin.population_of(r.transition.two_m_to),
                           0.5 * nu_ref, 2.0 * nu_ref);
  sum.relative_deviation = sum.fit.oscillates && sum.predicted_hz > 0.0
                               ? sum.fit.nu_hz / sum.predicted_hz - 1.0
                               : std::nan("");
  const auto& a = rep.result.spin.populations;
  const auto& b = rep.effective.populations;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    for (std::size_t m = 0; m < a[k].size(); ++m) {
      sum.effective_max_deviation = std::max(sum.effective_max_deviation, std::abs(a[k][m] - b[k][m]));
    }
  }
  return rep;
}

/// Sentinel written in place of a fitted frequency when nothing oscillates.
inline constexpr const char* kNoOscillation = "no-oscillation";

inline void run_coupled(const Scenario& scenario, std::ostream& out, const Log& log) {
  const auto rep = coupled_report(scenario, log);
  const auto& spin = rep.result.spin;
  const double scale = rep.summary.predicted_hz > 0.0 ? rep.summary.predicted_hz : 1.0;
  if (!(rep.summary.predicted_hz > 0.0)) log.note("no predicted Rabi frequency; t_normalized is in seconds");

  CsvWriter csv(out);
  std::vector<std::string> head{"t_normalized"};
  for (const int m : spin.two_m) head.push_back("p_" + detail::m_label(m));
  csv.header(head);
  for (std::size_t k = 0; k < spin.times.size(); ++k) {
    std::vector<Cell> row{spin.times[k] * scale};
    for (const double p : spin.populations[k]) row.emplace_back(p);
    csv.row(row);
  }
  const auto& s = rep.summary;
  csv.separator();
  csv.header({"fit_rabi_Hz", "predicted_rabi_Hz", "relative_deviation", "effective_max_deviation"});
  csv.row({s.fit.oscillates ? format_number(s.fit.nu_hz) : std::string(kNoOscillation),
           format_number(s.predicted_hz),
           std::isnan(s.relative_deviation) ? std::string(kNoOscillation) : format_number(s.relative_deviation),
           format_number(s.effective_max_deviation)});
}

/// Surface r = s |g| of the scenario's mesh tensor. The first line carries
/// its asymmetry parameter as a '#' comment.
inline void run_efg_mesh(const Scenario& scenario, std::ostream& out, const Log& log) {
  if (!scenario.mesh) throw Error(ErrorKind::Config, "efg-mesh needs mesh_tensor, mesh_n_theta and mesh_n_phi");
  const auto& m = *scenario.mesh;
  const Eigen::Matrix3d t = detail::to_eigen(m.tensor);
  if (max_abs(t - t.transpose()) > 1e-12 * std::max(max_abs(t), 1e-300)) {
    throw Error(ErrorKind::Config, "mesh_tensor must be symmetric");
  }
  const auto mesh = efg::surface_mesh(t, m.scale, m.n_theta, m.n_phi);
  std::string eta = "undefined";
  try {
    eta = format_number(efg::asymmetry(t));
  } catch (const Error& e) {
    log.note(e.what());
  }
  out << "# eta," << eta << '\n';
  CsvWriter csv(out);
  csv.header({"theta", "phi", "radius", "sign"});
  for (const auto& n : mesh) csv.row({n.theta, n.phi, n.radius, static_cast<long long>(n.sign)});
}

/// Loads a table and summarizes it per state.
inline void run_ingest_check(const std::string& path, std::ostream& out, const Log&) {
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::Ingestion, "'" + path + "' does not exist");
  const auto table = efg::EfgTable::load(path);
  CsvWriter csv(out);
  csv.header({"state", "rows", "field_min_au", "field_max_au"});
  for (const auto& state : table.states()) {
    const auto [lo, hi] = table.field_range(state);
    csv.row({state, static_cast<long long>(table.rows_of(state).size()), lo, hi});
  }
}

inline void run_ingest_check(const Scenario& scenario, std::ostream& out, const Log& log) {
  const auto* t = std::get_if<TableNqi>(&scenario.nqi);
  if (!t) throw Error(ErrorKind::Config, "ingest-check needs an efg_table path");
  run_ingest_check(resolve_path(scenario, t->path).string(), out, log);
}

/// Exit status for a library error.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IntegrationFailure:
    case ErrorKind::NoSteadyState:
      return 3;
    case ErrorKind::Ingestion:
      return 4;
    default:
      return 2;
  }
}

}  // namespace onerkit::cli
