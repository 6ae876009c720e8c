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
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "onerkit/efg/tensor.hpp"

namespace onerkit::efg {

/// NQI-vs-field tables: comma-separated with the header
///   field_au,state_label,Qxx_kHz,Qyy_kHz,Qzz_kHz,Qxy_kHz,Qxz_kHz,Qyz_kHz
/// (columns in any order). Tensors are in the E-frame. Lines starting with
/// '#' and blank lines are ignored.
class EfgTable {
 public:
  struct Row {
    double field_au;
    Eigen::Matrix3d q_khz;
    int line;
  };

  static constexpr std::array<std::string_view, 8> kColumns{
      "field_au", "state_label", "Qxx_kHz", "Qyy_kHz", "Qzz_kHz", "Qxy_kHz", "Qxz_kHz", "Qyz_kHz"};
  static constexpr double kTraceTol = 1e-6;

  static EfgTable parse(std::istream& in, const std::string& source = "<stream>") {
    EfgTable table;
    table.source_ = source;
    std::string line;
    int lineno = 0;
    std::array<int, 8> col{};
    bool have_header = false;
    std::size_t n_fields = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string_view trimmed = trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      const auto fields = split(trimmed);
      if (!have_header) {
        n_fields = fields.size();
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
          auto it = std::find(fields.begin(), fields.end(), kColumns[c]);
          if (it == fields.end()) {
            fail(source, lineno, "header lacks column '" + std::string(kColumns[c]) + "'");
          }
          col[c] = static_cast<int>(it - fields.begin());
        }
        have_header = true;
        continue;
      }
      if (fields.size() != n_fields) {
        fail(source, lineno,
             "expected " + std::to_string(n_fields) + " fields, found " + std::to_string(fields.size()));
      }
      Row row{};
      row.line = lineno;
      row.field_au = number(fields[col[0]], source, lineno, kColumns[0]);
      const std::string state(fields[col[1]]);
      if (state.empty()) fail(source, lineno, "empty state_label");
      std::array<double, 6> v{};
      for (int k = 0; k < 6; ++k) v[k] = number(fields[col[2 + k]], source, lineno, kColumns[2 + k]);
      row.q_khz << v[0], v[3], v[4],
                   v[3], v[1], v[5],
                   v[4], v[5], v[2];
      const double scale = max_abs(row.q_khz);
      if (std::abs(row.q_khz.trace()) > kTraceTol * scale) {
        std::ostringstream os;
        os << "row for state '" << state << "' at field " << row.field_au
           << " is not traceless (Qxx+Qyy+Qzz = " << row.q_khz.trace() << " kHz)";
        fail(source, lineno, os.str());
      }
      auto& rows = table.states_[state];
      if (!rows.empty() && !(row.field_au > rows.back().field_au)) {
        fail(source, lineno, "field_au for state '" + state + "' must be strictly increasing");
      }
      rows.push_back(row);
      ++table.n_rows_;
    }
    if (!have_header) fail(source, lineno, "missing header");
    if (table.n_rows_ == 0) fail(source, lineno, "table has no data rows");
    return table;
  }

  static EfgTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Ingestion, "cannot open EFG table '" + path + "'");
    return parse(in, path);
  }

  std::size_t rows() const { return n_rows_; }
  const std::string& source() const { return source_; }

  std::vector<std::string> states() const {
    std::vector<std::string> out;
    for (const auto& [name, rows] : states_) out.push_back(name);
    return out;
  }

  const std::vector<Row>& rows_of(const std::string& state) const {
    auto it = states_.find(state);
    if (it == states_.end()) {
      throw Error(ErrorKind::Ingestion, "state '" + state + "' not present in " + source_);
    }
    return it->second;
  }

  std::pair<double, double> field_range(const std::string& state) const {
    const auto& rows = rows_of(state);
    return {rows.front().field_au, rows.back().field_au};
  }

  /// Linear interpolation in field; returns the E-frame tensor in kHz.
  Eigen::Matrix3d interpolate_khz(const std::string& state, double field_au) const {
    const auto& rows = rows_of(state);
    const double lo = rows.front().field_au, hi = rows.back().field_au;
    if (!(field_au >= lo && field_au <= hi)) {
      std::ostringstream os;
      os << "field " << field_au << " a.u. outside the tabulated range [" << lo << ", " << hi
         << "] for state '" << state << "'; extrapolation is refused";
      throw Error(ErrorKind::Ingestion, os.str());
    }
    if (rows.size() == 1) return rows.front().q_khz;
    auto upper = std::lower_bound(rows.begin(), rows.end(), field_au,
                                  [](const Row& r, double f) { return r.field_au < f; });
    if (upper == rows.begin()) return upper->q_khz;
    const auto lower = upper - 1;
    const double w = (field_au - lower->field_au) / (upper->field_au - lower->field_au);
    return (1.0 - w) * lower->q_khz + w * upper->q_khz;
  }

  /// Interpolated E-frame NQI tensor in rad/s.
  NqiTensor interpolate(const std::string& state, double field_au) const {
    Eigen::Matrix3d q = interpolate_khz(state, field_au) * 1e3;
    q -= (q.trace() / 3.0) * Eigen::Matrix3d::Identity();
    return NqiTensor::from_hz(q, Frame::EField);
  }

 private:
  [[noreturn]] static void fail(const std::string& source, int line, const std::string& what) {
    throw Error(ErrorKind::Ingestion, source + ":" + std::to_string(line) + ": " + what);
  }

  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  static double number(std::string_view field, const std::string& source, int line,
                       std::string_view column) {
    double v = 0.0;
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
      fail(source, line, "column " + std::string(column) + ": '" + std::string(field) +
                             "' is not a number");
    }
    return v;
  }

  std::string source_;
  std::map<std::string, std::vector<Row>> states_;
  std::size_t n_rows_ = 0;
};

}  // namespace onerkit::efg
