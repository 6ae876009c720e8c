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

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "onerkit/common.hpp"
#include "onerkit/efg/nucleus.hpp"
#include "onerkit/efg/table.hpp"
#include "onerkit/oner/effective.hpp"
#include "onerkit/oner/two_level.hpp"
#include "onerkit/spin/levels.hpp"

namespace onerkit::cli {

using Matrix3 = std::array<std::array<double, 3>, 3>;

enum class UnitMode { Physical, Scaled };

inline const char* to_string(UnitMode m) { return m == UnitMode::Scaled ? "scaled" : "physical"; }

inline UnitMode parse_unit_mode(const std::string& s) {
  if (s == "physical") return UnitMode::Physical;
  if (s == "scaled") return UnitMode::Scaled;
  throw Error(ErrorKind::Config, "unit_mode must be 'physical' or 'scaled', got '" + s + "'");
}

/// E-frame tensors in Hz.
struct InlineNqi {
  Matrix3 ground{};
  Matrix3 excited{};
  std::optional<Matrix3> coherence;

  friend bool operator==(const InlineNqi&, const InlineNqi&) = default;
};

/// Tensors read from an NQI-vs-field table at one field value.
struct TableNqi {
  std::string path;
  double field_au = 0.0;
  std::string ground_state;
  std::string excited_state;

  friend bool operator==(const TableNqi&, const TableNqi&) = default;
};

struct SweepGrid {
  double theta_min = 0.0;
  double theta_max = 0.0;
  int theta_count = 0;
  double field_min_au = 0.0;
  double field_max_au = 0.0;
  int field_count = 0;

  void validate() const {
    if (theta_count < 2 || field_count < 2) {
      throw Error(ErrorKind::Config, "sweep counts must be >= 2");
    }
    if (!std::isfinite(theta_min) || !std::isfinite(theta_max) || !std::isfinite(field_min_au) ||
        !std::isfinite(field_max_au)) {
      throw Error(ErrorKind::Config, "sweep ranges must be finite");
    }
  }

  double theta(int i) const { return theta_min + (theta_max - theta_min) * i / (theta_count - 1); }
  double field(int j) const {
    return field_min_au + (field_max_au - field_min_au) * j / (field_count - 1);
  }

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct MeshSpec {
  Matrix3 tensor{};
  double scale = 1.0;
  int n_theta = 0;
  int n_phi = 0;

  friend bool operator==(const MeshSpec&, const MeshSpec&) = default;
};

/// A run configuration. Frequencies are ordinary frequencies (Hz), angles
/// radians, fields tesla.
struct Scenario {
  std::variant<std::string, efg::NucleusRecord> nucleus = std::string("Be9");
  double b0_t = 1.0;
  double theta_rad = 0.0;

  double omega_hz = 0.0;
  double decay_hz = 0.0;
  double dephasing_hz = 0.0;
  double detuning_hz = 0.0;
  double duty = 0.5;
  std::optional<double> pulse_period_s;
  std::optional<double> carrier_hz;

  std::variant<std::monostate, InlineNqi, TableNqi> nqi;

  std::string transition = "3/2->1/2";

  int pulse_periods = 3;
  int samples_per_period = 16;
  std::optional<double> duration_rabi_periods;
  std::optional<double> duration_s;

  UnitMode unit_mode = UnitMode::Physical;
  double tier_ratio = 30.0;

  std::optional<SweepGrid> sweep;
  std::optional<MeshSpec> mesh;
  std::string note;

  /// Directory relative paths are resolved against (not serialized).
  std::filesystem::path base_dir;

  bool operator==(const Scenario& o) const {
    return nucleus == o.nucleus && b0_t == o.b0_t && theta_rad == o.theta_rad &&
           omega_hz == o.omega_hz && decay_hz == o.decay_hz && dephasing_hz == o.dephasing_hz &&
           detuning_hz == o.detuning_hz && duty == o.duty && pulse_period_s == o.pulse_period_s &&
           carrier_hz == o.carrier_hz && nqi == o.nqi && transition == o.transition &&
           pulse_periods == o.pulse_periods && samples_per_period == o.samples_per_period &&
           duration_rabi_periods == o.duration_rabi_periods && duration_s == o.duration_s &&
           unit_mode == o.unit_mode && tier_ratio == o.tier_ratio && sweep == o.sweep &&
           mesh == o.mesh && note == o.note;
  }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

inline Eigen::Matrix3d to_eigen(const Matrix3& m) {
  Eigen::Matrix3d out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = m[i][j];
  return out;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("key '") + key + "': " + e.what());
  }
}

template <class T>
void get_to(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = get<T>(j, key);
}

template <class T>
void get_to(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key)) out = get<T>(j, key);
}

inline const std::array<const char*, 34>& known_keys() {
  static const std::array<const char*, 34> keys{
      "nucleus",         "B0_T",          "theta_rad",       "omega_Hz",        "decay_Hz",
      "dephasing_Hz",    "detuning_Hz",   "duty",            "pulse_period_s",  "carrier_Hz",
      "nqi_ground_Hz",   "nqi_excited_Hz", "nqi_coherence_Hz", "efg_table",      "field_au",
      "state_ground",    "state_excited", "transition",      "pulse_periods",   "samples_per_period",
      "duration_rabi_periods", "duration_s", "unit_mode",     "tier_ratio",      "sweep_theta_min_rad",
      "sweep_theta_max_rad", "sweep_theta_count", "sweep_field_min_au", "sweep_field_max_au",
      "sweep_field_count", "mesh_tensor",  "mesh_scale",      "mesh_n_theta",    "mesh_n_phi"};
  return keys;
}

}  // namespace detail

/// Reads the flat key set; unknown keys are rejected except "note".
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::get;
  using detail::get_to;
  if (!j.is_object()) detail::config_error("scenario must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const auto& keys = detail::known_keys();
    if (key != "note" && std::find(keys.begin(), keys.end(), key) == keys.end()) {
      detail::config_error("unknown key '" + key + "'");
    }
  }
  Scenario s;
  if (j.contains("nucleus")) {
    const auto& n = j.at("nucleus");
    if (n.is_string()) {
      s.nucleus = n.get<std::string>();
    } else if (n.is_object()) {
      efg::NucleusRecord r;
      r.name = get<std::string>(n, "name");
      r.two_i = get<int>(n, "two_I");
      r.q_barn = get<double>(n, "q_barn");
      r.gamma_mhz_per_t = get<double>(n, "gamma_MHz_per_T");
      s.nucleus = r;
    } else {
      detail::config_error("'nucleus' must be a name or a record");
    }
  }
  get_to(j, "B0_T", s.b0_t);
  get_to(j, "theta_rad", s.theta_rad);
  get_to(j, "omega_Hz", s.omega_hz);
  get_to(j, "decay_Hz", s.decay_hz);
  get_to(j, "dephasing_Hz", s.dephasing_hz);
  get_to(j, "detuning_Hz", s.detuning_hz);
  get_to(j, "duty", s.duty);
  get_to(j, "pulse_period_s", s.pulse_period_s);
  get_to(j, "carrier_Hz", s.carrier_hz);

  const bool inline_nqi = j.contains("nqi_ground_Hz") || j.contains("nqi_excited_Hz");
  const bool table_nqi = j.contains("efg_table");
  if (inline_nqi && table_nqi) detail::config_error("give either inline tensors or efg_table, not both");
  if (inline_nqi) {
    InlineNqi q;
    q.ground = get<Matrix3>(j, "nqi_ground_Hz");
    q.excited = get<Matrix3>(j, "nqi_excited_Hz");
    get_to(j, "nqi_coherence_Hz", q.coherence);
    s.nqi = q;
  } else if (table_nqi) {
    TableNqi t;
    t.path = get<std::string>(j, "efg_table");
    t.field_au = get<double>(j, "field_au");
    t.ground_state = get<std::string>(j, "state_ground");
    t.excited_state = get<std::string>(j, "state_excited");
    s.nqi = t;
  } else if (j.contains("nqi_coherence_Hz")) {
    detail::config_error("nqi_coherence_Hz needs nqi_ground_Hz and nqi_excited_Hz");
  }

  get_to(j, "transition", s.transition);
  get_to(j, "pulse_periods", s.pulse_periods);
  get_to(j, "samples_per_period", s.samples_per_period);
  get_to(j, "duration_rabi_periods", s.duration_rabi_periods);
  get_to(j, "duration_s", s.duration_s);
  if (j.contains("unit_mode")) s.unit_mode = parse_unit_mode(get<std::string>(j, "unit_mode"));
  get_to(j, "tier_ratio", s.tier_ratio);

  if (j.contains("sweep_theta_count") || j.contains("sweep_field_count")) {
    SweepGrid g;
    g.theta_min = get<double>(j, "sweep_theta_min_rad");
    g.theta_max = get<double>(j, "sweep_theta_max_rad");
    g.theta_count = get<int>(j, "sweep_theta_count");
    g.field_min_au = get<double>(j, "sweep_field_min_au");
    g.field_max_au = get<double>(j, "sweep_field_max_au");
    g.field_count = get<int>(j, "sweep_field_count");
    s.sweep = g;
  }
  if (j.contains("mesh_tensor")) {
    MeshSpec m;
    m.tensor = get<Matrix3>(j, "mesh_tensor");
    get_to(j, "mesh_scale", m.scale);
    m.n_theta = get<int>(j, "mesh_n_theta");
    m.n_phi = get<int>(j, "mesh_n_phi");
    s.mesh = m;
  }
  get_to(j, "note", s.note);
  return s;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  if (const auto* name = std::get_if<std::string>(&s.nucleus)) {
    j["nucleus"] = *name;
  } else {
    const auto& r = std::get<efg::NucleusRecord>(s.nucleus);
    j["nucleus"] = {{"name", r.name},
                    {"two_I", r.two_i},
                    {"q_barn", r.q_barn},
                    {"gamma_MHz_per_T", r.gamma_mhz_per_t}};
  }
  j["B0_T"] = s.b0_t;
  j["theta_rad"] = s.theta_rad;
  j["omega_Hz"] = s.omega_hz;
  j["decay_Hz"] = s.decay_hz;
  j["dephasing_Hz"] = s.dephasing_hz;
  j["detuning_Hz"] = s.detuning_hz;
  j["duty"] = s.duty;
  if (s.pulse_period_s) j["pulse_period_s"] = *s.pulse_period_s;
  if (s.carrier_hz) j["carrier_Hz"] = *s.carrier_hz;
  if (const auto* q = std::get_if<InlineNqi>(&s.nqi)) {
    j["nqi_ground_Hz"] = q->ground;
    j["nqi_excited_Hz"] = q->excited;
    if (q->coherence) j["nqi_coherence_Hz"] = *q->coherence;
  } else if (const auto* t = std::get_if<TableNqi>(&s.nqi)) {
    j["efg_table"] = t->path;
    j["field_au"] = t->field_au;
    j["state_ground"] = t->ground_state;
    j["state_excited"] = t->excited_state;
  }
  j["transition"] = s.transition;
  j["pulse_periods"] = s.pulse_periods;
  j["samples_per_period"] = s.samples_per_period;
  if (s.duration_rabi_periods) j["duration_rabi_periods"] = *s.duration_rabi_periods;
  if (s.duration_s) j["duration_s"] = *s.duration_s;
  j["unit_mode"] = to_string(s.unit_mode);
  j["tier_ratio"] = s.tier_ratio;
  if (s.sweep) {
    j["sweep_theta_min_rad"] = s.sweep->theta_min;
    j["sweep_theta_max_rad"] = s.sweep->theta_max;
    j["sweep_theta_count"] = s.sweep->theta_count;
    j["sweep_field_min_au"] = s.sweep->field_min_au;
    j["sweep_field_max_au"] = s.sweep->field_max_au;
    j["sweep_field_count"] = s.sweep->field_count;
  }
  if (s.mesh) {
    j["mesh_tensor"] = s.mesh->tensor;
    j["mesh_scale"] = s.mesh->scale;
    j["mesh_n_theta"] = s.mesh->n_theta;
    j["mesh_n_phi"] = s.mesh->n_phi;
  }
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

inline Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("scenario is not valid JSON: ") + e.what());
  }
  Scenario s = scenario_from_json(j);
  s.base_dir = base_dir;
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open scenario file '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(text, path.parent_path());
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

inline std::filesystem::path resolve_path(const Scenario& s, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || s.base_dir.empty() ? path : s.base_dir / path;
}

inline efg::NucleusRecord nucleus_of(const Scenario& s) {
  if (const auto* name = std::get_if<std::string>(&s.nucleus)) {
    const auto r = efg::find_nucleus(*name);
    if (!r) throw Error(ErrorKind::Config, "unknown nucleus '" + *name + "'");
    return *r;
  }
  const auto& r = std::get<efg::NucleusRecord>(s.nucleus);
  if (r.two_i < 1) throw Error(ErrorKind::Config, "nucleus two_I must be a positive integer");
  if (!std::isfinite(r.q_barn) || !std::isfinite(r.gamma_mhz_per_t)) {
    throw Error(ErrorKind::Config, "nucleus record must be finite");
  }
  return r;
}

/// "3/2->1/2", "1->-1", ... into a Transition of 2m values.
inline spin::Transition parse_transition(const std::string& text) {
  const auto arrow = text.find("->");
  if (arrow == std::string::npos) {
    throw Error(ErrorKind::Config, "transition '" + text + "' must look like '3/2->1/2'");
  }
  auto two_m = [&](std::string part) {
    std::erase(part, ' ');
    const auto slash = part.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const int m = std::stoi(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
        return 2 * m;
      }
      const int num = std::stoi(part.substr(0, slash), &used);
      if (used != slash || part.substr(slash + 1) != "2") throw std::invalid_argument(part);
      return num;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "transition '" + text + "': cannot read '" + part + "'");
    }
  };
  return {two_m(text.substr(0, arrow)), two_m(text.substr(arrow + 2))};
}

/// Checks the scenario invariants that do not need the physics.
inline void validate(const Scenario& s) {
  const auto nucleus = nucleus_of(s);
  auto finite = [](double v, const char* name) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Config, std::string(name) + " must be finite");
  };
  finite(s.b0_t, "B0_T");
  finite(s.theta_rad, "theta_rad");
  finite(s.detuning_hz, "detuning_Hz");
  for (const auto& [v, name] : {std::pair{s.omega_hz, "omega_Hz"}, std::pair{s.decay_hz, "decay_Hz"},
                                std::pair{s.dephasing_hz, "dephasing_Hz"}}) {
    finite(v, name);
    if (v < 0.0) throw Error(ErrorKind::Config, std::string(name) + " must be >= 0");
  }
  if (!(s.duty > 0.0 && s.duty < 1.0)) throw Error(ErrorKind::Config, "duty must lie in (0, 1)");
  if (s.pulse_period_s && !(*s.pulse_period_s > 0.0)) {
    throw Error(ErrorKind::Config, "pulse_period_s must be > 0");
  }
  if (s.carrier_hz && !(*s.carrier_hz >= 0.0)) throw Error(ErrorKind::Config, "carrier_Hz must be >= 0");
  if (s.pulse_periods < 1) throw Error(ErrorKind::Config, "pulse_periods must be >= 1");
  if (s.samples_per_period < 2) throw Error(ErrorKind::Config, "samples_per_period must be >= 2");
  if (s.duration_rabi_periods && !(*s.duration_rabi_periods > 0.0)) {
    throw Error(ErrorKind::Config, "duration_rabi_periods must be > 0");
  }
  if (s.duration_s && !(*s.duration_s > 0.0)) throw Error(ErrorKind::Config, "duration_s must be > 0");
  if (!(s.tier_ratio > 0.0)) throw Error(ErrorKind::Config, "tier_ratio must be > 0");
  try {
    spin::detail::check_transition(parse_transition(s.transition), spin::SpinSystem(nucleus.two_i));
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, "transition '" + s.transition + "' for " + nucleus.name + ": " + e.what());
  }
  if (const auto* t = std::get_if<TableNqi>(&s.nqi)) {
    const auto path = resolve_path(s, t->path);
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorKind::Config, "efg_table '" + path.string() + "' does not exist");
    }
  }
  if (s.sweep) s.sweep->validate();
}

/// Physics-facing view of a scenario.
struct Resolved {
  efg::NucleusRecord nucleus;
  oner::TwoLevelParams params;  // rad/s
  spin::Transition transition;
  std::optional<oner::StatePairNqi> pair;  // E-frame, rad/s
  std::optional<efg::EfgTable> table;
};

inline oner::TwoLevelParams two_level_params(const Scenario& s) {
  oner::TwoLevelParams p;
  p.omega_rabi = units::hz_to_rad(s.omega_hz);
  p.decay = units::hz_to_rad(s.decay_hz);
  p.dephasing = units::hz_to_rad(s.dephasing_hz);
  p.detuning = units::hz_to_rad(s.detuning_hz);
  p.duty = s.duty;
  if (s.pulse_period_s) p.period = *s.pulse_period_s;
  return p;
}

inline oner::StatePairNqi pair_from_table(const efg::EfgTable& table, const TableNqi& t, double field_au) {
  return {table.interpolate(t.ground_state, field_au), table.interpolate(t.excited_state, field_au)};
}

inline Resolved resolve(const Scenario& s) {
  validate(s);
  Resolved r{nucleus_of(s), two_level_params(s), parse_transition(s.transition)};
  if (const auto* q = std::get_if<InlineNqi>(&s.nqi)) {
    auto tensor = [](const Matrix3& m, const char* key) {
      try {
        return spin::NqiTensor::from_hz(detail::to_eigen(m), spin::Frame::EField);
      } catch (const Error& e) {
        throw Error(ErrorKind::Config, std::string(key) + ": " + e.what());
      }
    };
    std::optional<spin::NqiTensor> eg;
    if (q->coherence) eg = tensor(*q->coherence, "nqi_coherence_Hz");
    r.pair.emplace(tensor(q->ground, "nqi_ground_Hz"), tensor(q->excited, "nqi_excited_Hz"), eg);
  } else if (const auto* t = std::get_if<TableNqi>(&s.nqi)) {
    r.table = efg::EfgTable::load(resolve_path(s, t->path).string());
    r.pair = pair_from_table(*r.table, *t, t->field_au);
  }
  return r;
}

}  // namespace onerkit::cli
