#pragma once

// File formats: AlgebraElement and IntervalUnion JSON, eigenvalue and sample
// CSV, and the row-major OperatorMatrix CSV with its `.meta` JSON sidecar.
// Doubles are printed with 17 significant digits so every value round-trips.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfsim/algebra.hpp"
#include "selfsim/error.hpp"
#include "selfsim/hecke.hpp"
#include "selfsim/intervals.hpp"
#include "selfsim/spectra.hpp"

namespace selfsim {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json to_json(const AlgebraElement& m) {
  json terms = json::array();
  for (const auto& t : m.terms()) terms.push_back({{"word", t.word.str()}, {"coef", t.coef}});
  return {{"terms", terms}};
}

inline AlgebraElement algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw Error(ErrorKind::Parse, "algebra element JSON needs a \"terms\" array");
  AlgebraElement m;
  for (const auto& t : j["terms"]) {
    if (!t.contains("word") || !t["word"].is_string() || !t.contains("coef") || !t["coef"].is_number())
      throw Error(ErrorKind::Parse, "each term needs a string \"word\" and a numeric \"coef\"");
    m.add(GroupWord::parse(t["word"].get<std::string>()), t["coef"].get<double>());
  }
  return m;
}

inline json to_json(const IntervalUnion& u) {
  json out = json::array();
  for (const auto& p : u.parts()) out.push_back(json::array({p.lo, p.hi}));
  return out;
}

inline IntervalUnion interval_union_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "interval union JSON must be an array of [lo, hi] pairs");
  std::vector<Interval> parts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::Parse, "interval must be a [lo, hi] pair");
    parts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return IntervalUnion(std::move(parts));
}

inline std::string eig_report_csv(const EigReport& r) {
  std::string out = "# dim=" + std::to_string(r.dim) + ",residual_bound=" + format_double(r.residual_bound) + "\n";
  out += "eigenvalue\n";
  for (double v : r.eigenvalues) out += format_double(v) + "\n";
  return out;
}

inline EigReport eig_report_from_csv(const std::string& text) {
  EigReport r;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# dim=", 0) == 0) {
      const auto comma = line.find(",residual_bound=");
      if (comma == std::string::npos) throw Error(ErrorKind::Parse, "bad eigenvalue CSV header: " + line);
      r.dim = std::stoull(line.substr(6, comma - 6));
      r.residual_bound = std::stod(line.substr(comma + 16));
      continue;
    }
    if (line.empty() || line == "eigenvalue") continue;
    r.eigenvalues.push_back(std::stod(line));
  }
  if (!r.eigenvalues.empty())
    r.norm = std::max(std::abs(r.eigenvalues.front()), std::abs(r.eigenvalues.back()));
  return r;
}

inline std::string values_csv(const std::vector<double>& values) {
  std::string out = "value\n";
  for (double v : values) out += format_double(v) + "\n";
  return out;
}

inline std::string matrix_csv(const OperatorMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      if (j) out += ',';
      out += format_double(m.entries(i, j));
    }
    out += '\n';
  }
  return out;
}

inline json matrix_meta(const OperatorMatrix& m) {
  json meta{{"dim", m.dim()}, {"level", m.level}, {"symmetric", m.symmetric()}};
  if (!m.boundary.empty()) meta["boundary_rows"] = m.boundary_rows();
  return meta;
}

inline OperatorMatrix matrix_from_csv(const std::string& csv, const json& meta) {
  const auto dim = meta.at("dim").get<Eigen::Index>();
  OperatorMatrix m{Eigen::MatrixXd::Zero(dim, dim), meta.at("level").get<int>(), {}};
  std::istringstream is(csv);
  std::string line;
  Eigen::Index i = 0;
  while (std::getline(is, line) && i < dim) {
    std::istringstream row(line);
    std::string cell;
    Eigen::Index j = 0;
    while (std::getline(row, cell, ',') && j < dim) m.entries(i, j++) = std::stod(cell);
    if (j != dim) throw Error(ErrorKind::Parse, "matrix row " + std::to_string(i) + " has the wrong length");
    ++i;
  }
  if (i != dim) throw Error(ErrorKind::Parse, "matrix CSV has the wrong number of rows");
  return m;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << content;
}

}  // namespace selfsim
