#pragma once
// File formats of the command-line tools: JSON case configs in, CSV tables
// out, with deterministic number formatting so identical configs produce
// byte-identical outputs.

#include <array>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "axibie/contour.hpp"
#include "axibie/errors.hpp"
#include "axibie/material.hpp"
#include "axibie/ring_kernels.hpp"
#include "axibie/version.hpp"

namespace axibie {

// 17 significant digits round-trip a double exactly; -0 collapses to 0 so
// algebraically zero columns print the same everywhere.
inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  if (!in.good() && !in.eof()) throw ConfigError("cannot read file: " + path);
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open file for writing: " + path);
  out << text;
  out.flush();
  if (!out.good()) throw ConfigError("cannot write file: " + path);
}

// Every CSV output starts with this comment tying it to the config bytes.
inline std::string csv_comment(std::uint64_t config_hash) {
  return std::string("# axibie ") + kVersion + " config=0x" + hex16(config_hash);
}

inline std::string render_csv(std::uint64_t config_hash, const std::vector<std::string>& header,
                              const std::vector<std::vector<double>>& rows) {
  std::string out = csv_comment(config_hash) + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_g17(row[i]);
    }
    out += '\n';
  }
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Column index by header name, or -1.
  int column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

}  // namespace detail

// Parses a CSV with optional '#' comment lines; the first non-comment line
// is the header, every later line a numeric row.
inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = detail::split_csv_line(t);
    if (!have_header) {
      table.header = fields;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0') {
        throw ConfigError("CSV line " + std::to_string(lineno) + ": not a number: '" + f + "'");
      }
      row.push_back(v);
    }
    if (row.size() != table.header.size()) {
      throw ConfigError("CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(row.size()));
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw ConfigError("CSV has no header line");
  return table;
}

// ---------------------------------------------------------------------------
// JSON configs

inline const nlohmann::json& json_field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("config missing field '") + key + "'");
  }
  return j.at(key);
}

inline double json_number(const nlohmann::json& j, const char* key) {
  const auto& v = json_field(j, key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline ElasticConstants material_from_json(const nlohmann::json& j) {
  ElasticConstants m;
  m.a11 = json_number(j, "a11");
  m.a12 = json_number(j, "a12");
  m.a13 = json_number(j, "a13");
  m.a33 = json_number(j, "a33");
  m.a44 = json_number(j, "a44");
  return m;
}

inline Contour contour_from_json(const nlohmann::json& j) {
  const auto& kind = json_field(j, "kind");
  if (!kind.is_string()) throw ConfigError("contour 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "torus") return Contour::torus(json_number(j, "R0"), json_number(j, "rho"));
  if (k == "sphere") return Contour::sphere(json_number(j, "R"));
  if (k == "samples") {
    const auto& pts = json_field(j, "points");
    if (!pts.is_array()) throw ConfigError("contour 'points' must be an array of [r,z] pairs");
    std::vector<std::array<double, 2>> sampled;
    for (const auto& p : pts) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError("contour 'points' entries must be [r,z] number pairs");
      }
      sampled.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return Contour::through_samples(sampled);
  }
  throw ConfigError("unknown contour kind '" + k + "'");
}

struct DataSource {
  enum class Kind { csv, manufactured };
  Kind kind = Kind::manufactured;
  std::string path;                   // csv
  RingPole pole{1.0, 0.0};            // manufactured
  std::array<double, 2> coeffs{};     // manufactured
};

struct CaseOutputs {
  std::string densities = "densities.csv";
  std::string report = "report.json";
};

struct CaseConfig {
  ElasticConstants material;
  Contour contour;
  int n = 0;
  DataSource data;
  CaseOutputs out;
  std::string text;        // raw config bytes (hashed into outputs)
  std::uint64_t hash = 0;
};

inline DataSource data_source_from_json(const nlohmann::json& j) {
  DataSource d;
  const auto& kind = json_field(j, "kind");
  if (!kind.is_string()) throw ConfigError("data 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "csv") {
    d.kind = DataSource::Kind::csv;
    const auto& p = json_field(j, "path");
    if (!p.is_string()) throw ConfigError("data 'path' must be a string");
    d.path = p.get<std::string>();
    return d;
  }
  if (k == "manufactured") {
    d.kind = DataSource::Kind::manufactured;
    const auto& pole = json_field(j, "pole");
    if (!pole.is_array() || pole.size() != 2 || !pole[0].is_number() || !pole[1].is_number()) {
      throw ConfigError("data 'pole' must be [a, z]");
    }
    d.pole = {pole[0].get<double>(), pole[1].get<double>()};
    const auto& c = json_field(j, "coeffs");
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ConfigError("data 'coeffs' must be [c1, c2]");
    }
    d.coeffs = {c[0].get<double>(), c[1].get<double>()};
    return d;
  }
  throw ConfigError("unknown data kind '" + k + "' (expected 'csv' or 'manufactured')");
}

inline CaseConfig parse_case_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const auto& nval = json_field(j, "N");
  if (!nval.is_number_integer()) throw ConfigError("'N' must be an integer");
  CaseConfig cfg{material_from_json(json_field(j, "material")),
                 contour_from_json(json_field(j, "contour")),
                 nval.get<int>(),
                 data_source_from_json(json_field(j, "data")),
                 CaseOutputs{},
                 text,
                 fnv1a64(text)};
  if (cfg.n < 16 || cfg.n % 2 != 0) {
    throw ConfigError("'N' must be even and at least 16, got " + std::to_string(cfg.n));
  }
  if (j.contains("out")) {
    const auto& o = j.at("out");
    if (!o.is_object()) throw ConfigError("'out' must be an object");
    if (o.contains("densities")) cfg.out.densities = o.at("densities").get<std::string>();
    if (o.contains("report")) cfg.out.report = o.at("report").get<std::string>();
  }
  return cfg;
}

// Boundary data columns g1,g2 from a CSV file, checked against the node count.
inline std::pair<std::vector<double>, std::vector<double>> boundary_from_csv(
    const std::string& text, int n) {
  const CsvTable table = parse_csv(text);
  const int c1 = table.column("g1");
  const int c2 = table.column("g2");
  if (c1 < 0 || c2 < 0) throw ConfigError("boundary CSV must have columns 'g1' and 'g2'");
  if (static_cast<int>(table.rows.size()) != n) {
    throw ConfigError("boundary CSV has " + std::to_string(table.rows.size()) +
                      " rows but the grid has " + std::to_string(n) + " nodes");
  }
  std::vector<double> g1, g2;
  g1.reserve(table.rows.size());
  g2.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    g1.push_back(row[static_cast<std::size_t>(c1)]);
    g2.push_back(row[static_cast<std::size_t>(c2)]);
  }
  return {std::move(g1), std::move(g2)};
}

}  // namespace axibie
