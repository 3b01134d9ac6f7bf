// Copyright 2026 The bosonkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bosonkit/characterization.hpp"
#include "bosonkit/distribution.hpp"
#include "bosonkit/error.hpp"
#include "bosonkit/events.hpp"
#include "bosonkit/unitary.hpp"
#include "bosonkit/validation.hpp"

// File formats. Modes and ports are 1-indexed in every file and 0-indexed in
// memory; conversion happens only here. Floats are written with 17
// significant digits. See docs/FORMATS.md.

namespace bosonkit::io {

using nlohmann::json;

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

/// Parses JSON, turning syntax errors into FormatError with line and column.
inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw FormatError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                      e.what() + ")");
  }
}

namespace detail {

template <class T>
T get_field(const json& j, const char* key, const std::string& origin) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(origin + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(origin + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

inline std::vector<std::vector<double>> get_table(const json& j, const char* key, const std::string& origin) {
  auto t = get_field<std::vector<std::vector<double>>>(j, key, origin);
  for (const auto& row : t) {
    if (row.size() != t.front().size()) throw FormatError(origin + ": ragged array '" + key + "'");
    for (double v : row) {
      if (!std::isfinite(v)) throw FormatError(origin + ": non-finite entry in '" + key + "'");
    }
  }
  return t;
}

inline void append_table(std::string& s, const char* key, Eigen::Index rows, Eigen::Index cols,
                         const auto& entry) {
  s += "  \"";
  s += key;
  s += "\": [";
  for (Eigen::Index r = 0; r < rows; ++r) {
    s += r ? ",\n    [" : "\n    [";
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (c) s += ", ";
      s += format_double(entry(r, c));
    }
    s += "]";
  }
  s += "\n  ]";
}

inline std::vector<int> split_ints(const std::string& text, char sep, const std::string& origin) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw FormatError(origin + ": '" + tok + "' is not an integer");
    }
    if (used != tok.size()) throw FormatError(origin + ": '" + tok + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Parses a 1-indexed port list such as "1,3,4" into 0-indexed modes.
inline std::vector<int> parse_port_list(const std::string& text) {
  std::vector<int> ports = detail::split_ints(text, ',', "port list");
  if (ports.empty()) throw InvalidArgument("port list is empty");
  for (int& p : ports) {
    if (p < 1) throw InvalidArgument("ports are 1-indexed; got " + std::to_string(p));
    --p;
  }
  return ports;
}

/// {"m": cols, "re": [[...]], "im": [[...]]}, row-major; "rows" is added for
/// non-square blocks.
inline std::string matrix_to_json(const ComplexMatrix& a) {
  std::string s = "{\n  \"m\": " + std::to_string(a.cols()) + ",\n";
  if (a.rows() != a.cols()) s += "  \"rows\": " + std::to_string(a.rows()) + ",\n";
  detail::append_table(s, "re", a.rows(), a.cols(), [&](Eigen::Index r, Eigen::Index c) { return a(r, c).real(); });
  s += ",\n";
  detail::append_table(s, "im", a.rows(), a.cols(), [&](Eigen::Index r, Eigen::Index c) { return a(r, c).imag(); });
  s += "\n}\n";
  return s;
}

inline ComplexMatrix matrix_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  const int m = detail::get_field<int>(j, "m", origin);
  const auto re = detail::get_table(j, "re", origin);
  const auto im = detail::get_table(j, "im", origin);
  const int rows = j.contains("rows") ? detail::get_field<int>(j, "rows", origin) : m;
  if (m < 1 || rows < 1) throw FormatError(origin + ": matrix dimensions must be positive");
  if (static_cast<int>(re.size()) != rows || static_cast<int>(im.size()) != rows ||
      static_cast<int>(re.front().size()) != m || static_cast<int>(im.front().size()) != m) {
    throw FormatError(origin + ": 're'/'im' must be " + std::to_string(rows) + "x" + std::to_string(m));
  }
  ComplexMatrix a(rows, m);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < m; ++c) a(r, c) = Complex(re[r][c], im[r][c]);
  }
  return a;
}

inline void save_matrix(const std::string& path, const ComplexMatrix& a) { write_text_file(path, matrix_to_json(a)); }

inline ComplexMatrix load_matrix(const std::string& path) { return matrix_from_json(read_text_file(path), path); }

/// Loads a square transfer matrix; source is MatrixSource::file.
inline TransferMatrix load_transfer_matrix(const std::string& path) {
  ComplexMatrix u = load_matrix(path);
  if (u.rows() != u.cols()) throw FormatError(path + ": transfer matrix must be square");
  return TransferMatrix::from_matrix(std::move(u), MatrixSource::file);
}

/// CSV "index,modes,probability"; modes quoted as "(i,j,k)".
inline std::string distribution_to_csv(const OutputDistribution& d) {
  std::string s = "index,modes,probability\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    s += std::to_string(i) + ",\"" + occupation_at(i, d.m, d.n, d.support).label() + "\"," + format_double(d[i]) + "\n";
  }
  return s;
}

/// One line per event: "event_index,mode_1,...,mode_n", event_index from 1.
inline std::string events_to_csv(const EventStream& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    s += std::to_string(k + 1);
    for (int mode : e.events[k].modes()) s += "," + std::to_string(mode + 1);
    s += "\n";
  }
  return s;
}

inline std::string events_sidecar(const EventStream& e) {
  json j;
  j["m"] = e.m;
  j["n"] = e.n;
  j["seed"] = e.seed;
  j["provenance"] = to_string(e.provenance);
  j["events"] = e.size();
  return j.dump(2) + "\n";
}

inline std::string sidecar_path(const std::string& path) { return path + ".json"; }

/// Writes the event CSV and its "<path>.json" sidecar.
inline void save_events(const std::string& path, const EventStream& e) {
  write_text_file(path, events_to_csv(e));
  write_text_file(sidecar_path(path), events_sidecar(e));
}

inline EventStream events_from_csv(const std::string& text, const std::string& sidecar_text, const std::string& origin) {
  const json meta = parse_json(sidecar_text, origin + ".json");
  EventStream e;
  e.m = detail::get_field<int>(meta, "m", origin + ".json");
  e.n = detail::get_field<int>(meta, "n", origin + ".json");
  e.seed = detail::get_field<std::uint64_t>(meta, "seed", origin + ".json");
  e.provenance = sampler_kind_from_string(detail::get_field<std::string>(meta, "provenance", origin + ".json"));
  if (e.m < 1 || e.n < 1) throw FormatError(origin + ".json: m and n must be positive");
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::vector<int> fields = detail::split_ints(line, ',', where);
    if (static_cast<int>(fields.size()) != e.n + 1) {
      throw FormatError(where + ": expected " + std::to_string(e.n + 1) + " fields");
    }
    if (fields[0] != static_cast<int>(e.size()) + 1) throw FormatError(where + ": event index out of sequence");
    std::vector<int> modes(fields.begin() + 1, fields.end());
    for (int& v : modes) {
      if (v < 1 || v > e.m) throw FormatError(where + ": mode " + std::to_string(v) + " outside 1.." + std::to_string(e.m));
      --v;
    }
    e.events.emplace_back(std::move(modes));
  }
  return e;
}

inline EventStream load_events(const std::string& path) {
  return events_from_csv(read_text_file(path), read_text_file(sidecar_path(path)), path);
}

/// CSV "event_number,counter_value".
inline std::string trace_to_csv(const CounterTrace& t) {
  std::string s = "event_number,counter_value\n";
  for (std::size_t k = 0; k < t.values.size(); ++k) s += std::to_string(k + 1) + "," + std::to_string(t.values[k]) + "\n";
  return s;
}

inline std::string trace_sidecar(const CounterTrace& t) {
  json j;
  j["test"] = to_string(t.test);
  j["events"] = t.values.size();
  j["final_counter"] = t.final_value();
  if (t.test == ValidationTest::likelihood_ratio) {
    j["a1"] = t.a1;
    j["a2"] = t.a2;
    j["infinite_ratio_events"] = t.infinite_ratio_events;
  }
  return j.dump(2) + "\n";
}

inline void save_trace(const std::string& path, const CounterTrace& t) {
  write_text_file(path, trace_to_csv(t));
  write_text_file(sidecar_path(path), trace_sidecar(t));
}

/// {"m", "probes", "noise_sigma", "amplitudes", "visibilities": [{k,l,i,j,V}]}.
inline std::string dataset_to_json(const CharacterizationDataset& d) {
  std::string s = "{\n  \"m\": " + std::to_string(d.m) + ",\n  \"probes\": [";
  for (std::size_t r = 0; r < d.probes.size(); ++r) s += (r ? ", " : "") + std::to_string(d.probes[r] + 1);
  s += "],\n  \"noise_sigma\": " + format_double(d.noise_sigma) + ",\n";
  detail::append_table(s, "amplitudes", d.amplitudes.rows(), d.amplitudes.cols(),
                       [&](Eigen::Index r, Eigen::Index c) { return d.amplitudes(r, c); });
  s += ",\n  \"visibilities\": [";
  for (std::size_t k = 0; k < d.visibilities.size(); ++k) {
    const VisibilityRecord& v = d.visibilities[k];
    s += k ? ",\n    " : "\n    ";
    s += "{\"k\": " + std::to_string(v.input_k + 1) + ", \"l\": " + std::to_string(v.input_l + 1) +
         ", \"i\": " + std::to_string(v.output_i + 1) + ", \"j\": " + std::to_string(v.output_j + 1) +
         ", \"V\": " + format_double(v.value) + "}";
  }
  s += d.visibilities.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return s;
}

inline CharacterizationDataset dataset_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  CharacterizationDataset d;
  const auto amp = detail::get_table(j, "amplitudes", origin);
  if (amp.empty()) throw FormatError(origin + ": 'amplitudes' is empty");
  d.m = j.contains("m") ? detail::get_field<int>(j, "m", origin) : static_cast<int>(amp.front().size());
  if (j.contains("probes")) {
    d.probes = detail::get_field<std::vector<int>>(j, "probes", origin);
    for (int& p : d.probes) {
      if (p < 1) throw FormatError(origin + ": probe ports are 1-indexed");
      --p;
    }
  }
  if (j.contains("noise_sigma")) d.noise_sigma = detail::get_field<double>(j, "noise_sigma", origin);
  d.amplitudes.resize(static_cast<Eigen::Index>(amp.size()), static_cast<Eigen::Index>(amp.front().size()));
  for (std::size_t r = 0; r < amp.size(); ++r) {
    for (std::size_t c = 0; c < amp[r].size(); ++c) d.amplitudes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = amp[r][c];
  }
  const json& vis = j.contains("visibilities") ? j.at("visibilities") : json::array();
  if (!vis.is_array()) throw FormatError(origin + ": 'visibilities' must be an array");
  for (const json& v : vis) {
    VisibilityRecord rec;
    rec.input_k = detail::get_field<int>(v, "k", origin) - 1;
    rec.input_l = detail::get_field<int>(v, "l", origin) - 1;
    rec.output_i = detail::get_field<int>(v, "i", origin) - 1;
    rec.output_j = detail::get_field<int>(v, "j", origin) - 1;
    rec.value = detail::get_field<double>(v, "V", origin);
    d.visibilities.push_back(rec);
  }
  return d;
}

inline void save_dataset(const std::string& path, const CharacterizationDataset& d) {
  write_text_file(path, dataset_to_json(d));
}

inline CharacterizationDataset load_dataset(const std::string& path) {
  return dataset_from_json(read_text_file(path), path);
}

/// CSV "k,l,i,j,measured,predicted,residual", ports and modes 1-indexed.
inline std::string residuals_to_csv(const Reconstruction& r) {
  std::string s = "k,l,i,j,measured,predicted,residual\n";
  for (const VisibilityResidual& v : r.residuals) {
    s += std::to_string(v.record.input_k + 1) + "," + std::to_string(v.record.input_l + 1) + "," +
         std::to_string(v.record.output_i + 1) + "," + std::to_string(v.record.output_j + 1) + "," +
         format_double(v.record.value) + "," + format_double(v.predicted) + "," + format_double(v.residual) + "\n";
  }
  return s;
}

}  // namespace bosonkit::io
