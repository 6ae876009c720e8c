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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "onerkit/efg/geometry.hpp"
#include "onerkit/efg/nucleus.hpp"
#include "onerkit/oner/effective.hpp"
#include "onerkit/oner/fourier.hpp"
#include "onerkit/oner/rabi_fit.hpp"
#include "onerkit/oner/spin_dynamics.hpp"
#include "onerkit/oner/two_level.hpp"
#include "onerkit/spin/hamiltonians.hpp"
#include "onerkit/spin/levels.hpp"

namespace {

using namespace onerkit;
using namespace onerkit::oner;
using spin::Frame;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

// Every propagation below feeds these records.
qdyn::PropagationDiagnostics g_diag;
std::vector<std::pair<std::string, qdyn::PropagationDiagnostics>> g_sources;

void track(const std::string& source, const qdyn::PropagationDiagnostics& d) {
  g_diag.merge(d);
  for (auto& [name, acc] : g_sources) {
    if (name == source) {
      acc.merge(d);
      return;
    }
  }
  g_sources.emplace_back(source, d);
}

struct Outcome {
  bool pass;
  std::string detail;
};

int g_failures = 0;

void report(int id, const char* title, const Outcome& o, double seconds) {
  std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

void run(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, title, o, std::chrono::duration<double>(Clock::now() - t0).count());
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Eigen::Matrix3d diag(double a, double b, double c) { return Eigen::Vector3d(a, b, c).asDiagonal(); }

Eigen::Matrix3d random_rotation(std::mt19937& rng) {
  std::normal_distribution<double> d;
  return Eigen::Quaterniond(d(rng), d(rng), d(rng), d(rng)).normalized().toRotationMatrix();
}

Eigen::Matrix3d random_traceless(std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = d(rng);
  Eigen::Matrix3d s = 0.5 * (a + a.transpose());
  s -= (s.trace() / 3.0) * Eigen::Matrix3d::Identity();
  return s;
}

efg::NucleusRecord be9() { return *efg::find_nucleus("Be9"); }

TwoLevelParams be9_ratio() {
  TwoLevelParams p;
  p.omega_rabi = 1.0;
  p.decay = 0.4;
  return p;
}

// Scaled scenario: axial excited-state NQI diag(-1,-1,2) Hz, ground state 0,
// Zeeman splitting 30 x |Q| and electronic rates 30 x the repetition rate.
constexpr double kTierRatio = 30.0;
constexpr double kQHz = 2.0;
const double kB0 = kTierRatio * kQHz / 8.9755e6;
constexpr double kTheta = kPi / 4;

StatePairNqi scenario_pair() {
  return {NqiTensor::from_hz(Eigen::Matrix3d::Zero(), Frame::EField),
          NqiTensor::from_hz(diag(-1, -1, 2), Frame::EField)};
}

// ------------------------------------------------------------------------ 1

Outcome steady_state_check() {
  const auto t0 = Clock::now();
  const TwoLevelParams p = be9_ratio();
  const double closed = steady_state(p).rho_ee;
  const std::vector<double> grid{0.0, 40.0 / p.decay};
  const auto series = simulate_continuous_two_level(p, grid);
  track("steady state", series.diagnostics);
  const double propagated = series.rho_ee.back();
  const double secs = elapsed(t0);
  const double target = 25.0 / 54.0;
  const bool ok = std::abs(closed - target) <= 1e-6 && std::abs(propagated - target) <= 1e-6 && secs < 1.0;
  return {ok, fmt("closed form %.9f, propagated %.9f, target %.9f, runtime %.3f s (< 1 s)", closed,
                  propagated, target, secs)};
}

// ------------------------------------------------------------------------ 2

struct PulsedFourier {
  double h, a0, b1;
  double worst_even;  // max |b_n| over even n <= 10, relative to b1
  std::string evens;
};

PulsedFourier pulsed_fourier(const TwoLevelParams& p, int periods, int samples) {
  const auto run = simulate_pulsed_two_level(p, periods, samples);
  track("pulsed two-level", run.diagnostics);
  const std::size_t first = static_cast<std::size_t>(periods - 1) * samples;
  const auto c = fourier_coefficients(std::span(run.times).subspan(first, samples),
                                      std::span(run.rho_ee).subspan(first, samples), p.period, 10);
  double worst = 0.0;
  std::string evens;
  for (int n = 2; n <= 10; n += 2) {
    worst = std::max(worst, std::abs(c.b[n]) / c.b[1]);
    evens += fmt("%sb%d/b1 %+.4f", n > 2 ? ", " : "", n, c.b[n] / c.b[1]);
  }
  return {steady_state(p).rho_ee, c.a[0], c.b[1], worst, evens};
}

Outcome fourier_check() {
  const auto t0 = Clock::now();
  // Gamma ~ Omega with Gamma tau = 50.
  TwoLevelParams p;
  p.omega_rabi = 1.0;
  p.decay = 1.0;
  p.period = 50.0 / p.decay;
  const auto f = pulsed_fourier(p, 3, 2000);
  const double secs = elapsed(t0);
  const double ea0 = f.a0 / f.h - 1.0;
  const double eb1 = f.b1 / (2.0 * f.h / kPi) - 1.0;
  const bool ok = std::abs(ea0) <= 0.02 && std::abs(eb1) <= 0.03 && f.worst_even < 0.02 && secs < 10.0;
  return {ok, fmt("Gamma = Omega, Gamma tau = 50: a0/rho_inf - 1 = %+.4f (|.| <= 0.02), "
                  "b1/(2 rho_inf/pi) - 1 = %+.4f (|.| <= 0.03), even harmonics [%s] (|.| < 0.02), "
                  "runtime %.2f s (< 10 s)",
                  ea0, eb1, f.evens.c_str(), secs)};
}

void fourier_note() {
  TwoLevelParams p = be9_ratio();
  p.period = 50.0 / p.decay;
  const auto f = pulsed_fourier(p, 3, 2000);
  std::printf("NOTE [2] Gamma = 0.4 Omega, Gamma tau = 50: a0/rho_inf - 1 = %+.4f, "
              "b1/(2 rho_inf/pi) - 1 = %+.4f, even harmonics [%s]\n",
              f.a0 / f.h - 1.0, f.b1 / (2.0 * f.h / kPi) - 1.0, f.evens.c_str());
}

// ------------------------------------------------------------------------ 3

Outcome selection_rules_check() {
  const auto s = spin::make_spin(3);
  const double a32 = spin::alpha_prefactor(3, s);
  const double b32 = spin::beta_prefactor(3, s);
  const double a12 = spin::alpha_prefactor(1, s);
  const bool ok = std::abs(a32 - std::sqrt(3.0)) <= 1e-12 && std::abs(b32 - std::sqrt(3.0) / 2.0) <= 1e-12 &&
                  std::abs(a12) <= 1e-12;
  return {ok, fmt("alpha(3/2<->1/2) - sqrt3 = %.1e, beta(3/2<->-1/2) - sqrt3/2 = %.1e, "
                  "alpha(1/2<->-1/2) = %.1e (all <= 1e-12)",
                  a32 - std::sqrt(3.0), b32 - std::sqrt(3.0) / 2.0, a12)};
}

// ------------------------------------------------------------------------ 4

Outcome perturbation_check() {
  std::mt19937 rng(20240401);
  const auto s = spin::make_spin(3);
  const double gamma = be9().gamma_hz_per_t();
  const double b0 = 1.0;
  const double zeeman = units::hz_to_rad(gamma * b0);
  const double ratio = 1e-3;
  const double bound = 2.0 * ratio;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Matrix3d r = random_rotation(rng);
    Eigen::Matrix3d q = r * diag(-0.5, -0.5, 1.0) * r.transpose();
    q *= ratio * zeeman / max_abs(q);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(spin::zeeman_hamiltonian(gamma, b0, s) +
                                              spin::quadrupole_hamiltonian(q, s));
    std::vector<double> approx;
    for (const auto& l : spin::first_order_energies(gamma, b0, q(2, 2), s).levels) approx.push_back(l.energy);
    std::sort(approx.begin(), approx.end());
    for (Index k = 0; k < s.dim(); ++k) {
      const double exact = es.eigenvalues()(k);
      worst = std::max(worst, std::abs(approx[k] - exact) / std::abs(exact));
    }
  }
  return {worst <= bound, fmt("20 random axial tensors, |Q|/|gamma B0| = 1e-3: worst relative error "
                              "%.2e (<= %.1e)",
                              worst, bound)};
}

// ------------------------------------------------------------------------ 5, 9

struct CoupledRun {
  CoupledResult result;
  RabiFit fit;
  double peak = 0.0;
};

CoupledRun coupled_run(const spin::Transition& t) {
  const auto pair = scenario_pair();
  const auto p = plan(pair, be9(), kB0, kTheta, be9_ratio(), t);
  const auto params = scale_electronic_tier(be9_ratio(), p.repetition_rate_hz, kTierRatio);
  CoupledOptions opt;
  opt.samples_per_period = 8;
  CoupledRun out{simulate_coupled(pair, be9(), kB0, kTheta, params, t, 2.0 / p.predicted_rabi_hz, opt)};
  track("coupled " + t.label(), out.result.spin.diagnostics);
  const auto target = out.result.spin.population_of(t.two_m_to);
  out.fit = fit_rabi(out.result.spin.times, target, 0.5 * p.predicted_rabi_hz, 2.0 * p.predicted_rabi_hz);
  out.peak = *std::max_element(target.begin(), target.end());
  return out;
}

std::vector<CoupledRun> g_coupled;

Outcome coupled_check() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const spin::Transition t : {spin::Transition{3, 1}, spin::Transition{3, -1}}) {
    g_coupled.push_back(coupled_run(t));
    const auto& c = g_coupled.back();
    const double predicted = c.result.plan.predicted_rabi_hz;
    const double dev = c.fit.nu_hz / predicted - 1.0;
    ok = ok && std::abs(dev) <= 0.10 && c.peak >= 0.9;
    detail += fmt("%s fit %.5f Hz vs predicted %.5f Hz (%+.4f, |.| <= 0.10), peak %.4f (>= 0.9); ",
                  t.label().c_str(), c.fit.nu_hz, predicted, dev, c.peak);
  }

  // Angular shapes from the analytic plan over theta in [0, pi/2].
  const auto pair = scenario_pair();
  const int n = 90;
  std::vector<double> dm1(n + 1), dm2(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double theta = 0.5 * kPi * i / n;
    dm1[i] = plan(pair, be9(), kB0, theta, be9_ratio(), {3, 1}, false).predicted_rabi_hz;
    dm2[i] = plan(pair, be9(), kB0, theta, be9_ratio(), {3, -1}, false).predicted_rabi_hz;
  }
  const double peak1 = *std::max_element(dm1.begin(), dm1.end());
  double shape = 0.0;
  for (int i = 0; i <= n; ++i) {
    shape = std::max(shape, std::abs(dm1[i] / peak1 - std::abs(std::sin(2.0 * 0.5 * kPi * i / n))));
  }
  const double nodes = std::max(dm1.front(), dm1.back()) / peak1;
  const double peak2 = *std::max_element(dm2.begin(), dm2.end());
  const double zero2 = dm2.front() / peak2;
  ok = ok && nodes <= 1e-3 && shape <= 1e-3 && zero2 <= 1e-3;
  const double secs = elapsed(t0);
  ok = ok && secs < 300.0;
  detail += fmt("dm=1 node/peak %.1e, max ||sin 2theta| - shape| %.1e, dm=2 theta=0 value/peak %.1e "
                "(all <= 1e-3); runtime %.1f s (< 300 s)",
                nodes, shape, zero2, secs);
  return {ok, detail};
}

Outcome backaction_check() {
  if (g_coupled.empty()) return {false, "coupled runs unavailable"};
  double worst = 0.0;
  for (const auto& c : g_coupled) {
    const auto& r = c.result;
    const int s = 8;
    const int periods = static_cast<int>(std::ceil((r.rho_ee.size() - 1) / static_cast<double>(s)));
    const auto alone = simulate_pulsed_two_level(r.pulse, periods, s);
    track("standalone two-level", alone.diagnostics);
    for (std::size_t k = 0; k < r.rho_ee.size(); ++k) {
      worst = std::max(worst, std::abs(r.rho_ee[k] - alone.rho_ee[k]));
    }
  }
  return {worst <= 1e-3, fmt("max |rho_ee coupled - rho_ee standalone| = %.2e over both coupled runs "
                             "(<= 1e-3)",
                             worst)};
}

void effective_vs_coupled_note() {
  for (const auto& c : g_coupled) {
    const auto& r = c.result;
    SpinRunOptions opt;
    opt.samples_per_period = 8;
    const double duration = r.spin.times.back();
    const auto eff = simulate_spin_effective(r.plan.drive(), be9(), kB0, r.plan.transition.two_m_from,
                                             duration, opt);
    track("effective " + r.plan.transition.label(), eff.diagnostics);
    double worst = 0.0;
    for (std::size_t k = 0; k < std::min(eff.populations.size(), r.spin.populations.size()); ++k)
      for (std::size_t m = 0; m < eff.populations[k].size(); ++m)
        worst = std::max(worst, std::abs(eff.populations[k][m] - r.spin.populations[k][m]));
    std::printf("NOTE [5] %s effective vs coupled spin populations: max deviation %.4f\n",
                r.plan.transition.label().c_str(), worst);
  }
}

// ------------------------------------------------------------------------ 6

Outcome hygiene_check() {
  // Convergence ladder on the pure-decay benchmark.
  CMatrix sigma = CMatrix::Zero(2, 2);
  sigma(0, 1) = 1.0;
  const std::vector<qdyn::CollapseChannel> ch{{sigma, 1.0}};
  const qdyn::TimeDependentHamiltonian h(CMatrix::Zero(2, 2));
  const std::vector<double> grid{0.0, 2.0};
  std::vector<double> err;
  for (double f : {0.2, 0.1, 0.05}) {
    qdyn::PropagateOptions opt;
    opt.step_factor = f;
    const auto traj = qdyn::propagate(h, ch, qdyn::DensityOperator::basis_state(2, 1), grid, opt);
    err.push_back(std::abs(traj.states.back().population(1) - std::exp(-2.0)));
  }
  const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
  const auto& d = g_diag;
  for (const auto& [name, acc] : g_sources) {
    std::printf("NOTE [6] %-22s substeps %10zu, trace drift %.1e, hermiticity %.1e, min eigenvalue %+.1e\n",
                name.c_str(), acc.substeps, acc.max_step_trace_drift, acc.max_hermiticity_residual,
                acc.min_eigenvalue);
  }
  const bool ok = d.substeps > 0 && d.max_step_trace_drift <= 1e-8 && d.max_hermiticity_residual <= 1e-10 &&
                  d.min_eigenvalue >= -1e-8 && order >= 3.5;
  return {ok, fmt("over %zu RK4 substeps: max per-step trace drift %.1e (<= 1e-8), hermiticity residual "
                  "%.1e (<= 1e-10), min eigenvalue %.1e (>= -1e-8); convergence order %.2f (>= 3.5)",
                  d.substeps, d.max_step_trace_drift, d.max_hermiticity_residual, d.min_eigenvalue,
                  order)};
}

// ------------------------------------------------------------------------ 7

Outcome tensor_check() {
  const double e0 = efg::asymmetry(diag(1, 1, -2));
  const double e1 = efg::asymmetry(diag(1, -1, 0));
  const double e3 = efg::asymmetry(diag(-3, 2, 1));
  const double eta_err = std::max({std::abs(e0), std::abs(e1 - 1.0), std::abs(e3 - 1.0 / 3.0)});
  std::mt19937 rng(7);
  double spectrum_err = 0.0, comm_err = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const efg::EfgTensor phi(random_traceless(rng), efg::EfgUnit::AtomicUnits, Frame::EField);
    const double theta = 2.0 * kPi * rep / 50.0 + 0.1;
    const auto r = efg::rotate_about_x(phi, theta);
    spectrum_err = std::max(spectrum_err, (efg::principal_axes(phi.matrix).values -
                                   efg::principal_axes(r.matrix).values).cwiseAbs().maxCoeff() /
                                      max_abs(phi.matrix));
    const auto a = efg::rotate_about_x(efg::nqi_from_efg(phi, be9()), theta);
    const auto b = efg::nqi_from_efg(r, be9());
    comm_err = std::max(comm_err, max_abs(a.matrix - b.matrix) / max_abs(a.matrix));
  }
  const bool ok = eta_err <= 1e-12 && spectrum_err <= 1e-12 && comm_err <= 1e-12;
  return {ok, fmt("eta {0, 1, 1/3} max error %.1e, rotation eigenvalue drift %.1e, nqi/rotation "
                  "commutator %.1e (all <= 1e-12)",
                  eta_err, spectrum_err, comm_err)};
}

// ------------------------------------------------------------------------ 8

struct ForbiddenRun {
  double transfer;
  double would_be_rabi_hz;
};

ForbiddenRun forbidden_run(const NqiTensor& q0, const NqiTensor& q1) {
  const auto s = spin::make_spin(3);
  const double rate = units::rad_to_hz(
      std::abs(spin::transition_energy({1, -1}, be9().gamma_hz_per_t(), kB0, q0(2, 2), s)));
  // Rabi frequency the same modulation would give on the 3/2 <-> 1/2 line.
  const double would_be = spin::alpha_prefactor(3, s) * units::rad_to_hz(q1.max_norm());
  const SpinDrive drive{q0, q1, rate};
  const auto run = simulate_spin_effective(drive, be9(), kB0, 1, 10.0 / would_be);
  track("forbidden", run.diagnostics);
  const auto p = run.population_of(-1);
  return {*std::max_element(p.begin(), p.end()), would_be};
}

Outcome forbidden_check() {
  const auto base = plan(scenario_pair(), be9(), kB0, kTheta, be9_ratio(), {3, 1});
  std::mt19937 rng(88);
  double worst = 0.0;
  std::string per;
  std::vector<NqiTensor> q1s{base.q1};
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::Matrix3d m = random_traceless(rng);
    m *= base.q1.max_norm() / max_abs(m);
    q1s.emplace_back(m, Frame::BField);
  }
  for (std::size_t i = 0; i < q1s.size(); ++i) {
    const auto r = forbidden_run(base.q0, q1s[i]);
    worst = std::max(worst, r.transfer);
    per += fmt("%s%.2e", i ? ", " : "", r.transfer);
  }
  return {worst <= 1e-6, fmt("rate tuned to 1/2<->-1/2, start in 1/2, 10 would-be Rabi periods: max "
                             "population reaching -1/2 per Q1 [planned, 5 random] = [%s]; worst %.2e "
                             "(<= 1e-6)",
                             per.c_str(), worst)};
}

void forbidden_note() {
  // Modulations without double-quantum components and an axial constant
  // part: the two halves of the level scheme are not connected.
  std::mt19937 rng(89);
  std::normal_distribution<double> d;
  const NqiTensor q0 = NqiTensor::from_hz(diag(-0.5, -0.5, 1.0), Frame::BField);
  double worst = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 2) = m(2, 0) = d(rng);
    m(1, 2) = m(2, 1) = d(rng);
    worst = std::max(worst, forbidden_run(q0, NqiTensor::from_hz(m, Frame::BField)).transfer);
  }
  std::printf("NOTE [8] axial Q0 with Q1 restricted to xz/yz components: worst transfer %.2e\n", worst);
}

}  // namespace

int main() {
  run(1, "Steady state", steady_state_check);
  run(2, "Square-pulse Fourier", fourier_check);
  fourier_note();
  run(3, "Selection rules", selection_rules_check);
  run(4, "Perturbation consistency", perturbation_check);
  run(5, "Coupled-vs-analytic Rabi", coupled_check);
  effective_vs_coupled_note();
  run(7, "Tensor toolbox", tensor_check);
  run(8, "Forbidden transition", forbidden_check);
  forbidden_note();
  run(9, "Back-action negligibility", backaction_check);
  // Last: covers every propagation above.
  run(6, "Propagator hygiene", hygiene_check);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures;
}
