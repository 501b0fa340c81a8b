// SPDX-License-Identifier: Apache-2.0
//
// Serialization contract shared by the CLI and the test fixtures.
//
// JSON: a complex scalar is a two-element array [re, im]; vectors are arrays
// of complex scalars; matrices are row-major nested arrays. A pure state is
// {"dim": d, "amplitudes": [...]}; a density matrix {"dim": d, "matrix":
// [...]}. Bases store their vectors as an ordered list. CSV: complex joint
// tables use the header "a,b,re,im", probability tables "a,b,p", rows in
// row-major (a, b) order, numbers at 17 significant digits.

#pragma once

#include "kdtomo/hilbert.hpp"
#include "kdtomo/tables.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

namespace kdtomo {

using Json = nlohmann::json;

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Content was read but does not conform to the documented format.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
// Plain file helpers
//==============================================================================

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failure: " + path);
}

inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline Json load_json(const std::string& path) { return parse_json(read_text_file(path), path); }

//==============================================================================
// JSON encoding
//==============================================================================

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex scalar must be a two-element numeric array");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
  return arr;
}

inline Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
  return v;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError(where + ": rows must be nonempty arrays");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError(where + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c], where);
  }
  return m;
}

inline const Json& require_field(const Json& j, const char* field, const std::string& where) {
  if (!j.is_object() || !j.contains(field))
    throw ParseError(where + ": missing field '" + field + "'");
  return j[field];
}

inline int dim_from_json(const Json& j, const std::string& where) {
  const Json& d = require_field(j, "dim", where);
  if (!d.is_number_integer() || d.get<int>() < 1)
    throw ParseError(where + ": 'dim' must be a positive integer");
  return d.get<int>();
}

inline Json pure_state_to_json(const PureState& psi) {
  return Json{{"dim", psi.dim()}, {"amplitudes", vector_to_json(psi.amplitudes())}};
}

inline PureState pure_state_from_json(const Json& j, const std::string& where = "pure state") {
  const int d = dim_from_json(j, where);
  Vector amp = vector_from_json(require_field(j, "amplitudes", where), where);
  if (amp.size() != d) throw ParseError(where + ": amplitude count does not match dim");
  try {
    return PureState(d, std::move(amp));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline Json density_to_json(const DensityMatrix& rho) {
  return Json{{"dim", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}};
}

inline DensityMatrix density_from_json(const Json& j, const std::string& where = "density matrix") {
  const int d = dim_from_json(j, where);
  Matrix m = matrix_from_json(require_field(j, "matrix", where), where);
  if (m.rows() != d || m.cols() != d) throw ParseError(where + ": matrix shape does not match dim");
  try {
    return DensityMatrix(d, std::move(m));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

/// Accepts either a pure state ("amplitudes") or a density matrix ("matrix")
/// and returns the density form.
inline DensityMatrix state_from_json(const Json& j, const std::string& where = "state") {
  if (j.is_object() && j.contains("amplitudes"))
    return DensityMatrix::pure(pure_state_from_json(j, where));
  if (j.is_object() && j.contains("matrix")) return density_from_json(j, where);
  throw ParseError(where + ": expected an object with 'amplitudes' or 'matrix'");
}

inline Json basis_to_json(const OrthonormalBasis& basis) {
  Json vecs = Json::array();
  for (int k = 0; k < basis.dim(); ++k) vecs.push_back(vector_to_json(basis.vector(k)));
  return Json{{"dim", basis.dim()}, {"label", basis.label()}, {"vectors", vecs}};
}

inline OrthonormalBasis basis_from_json(const Json& j, const std::string& where = "basis") {
  const int d = dim_from_json(j, where);
  const Json& label = require_field(j, "label", where);
  const Json& vecs = require_field(j, "vectors", where);
  if (!label.is_string()) throw ParseError(where + ": 'label' must be a string");
  if (!vecs.is_array() || static_cast<int>(vecs.size()) != d)
    throw ParseError(where + ": expected " + std::to_string(d) + " basis vectors");
  Matrix m(d, d);
  for (int k = 0; k < d; ++k) {
    Vector v = vector_from_json(vecs[k], where);
    if (v.size() != d) throw ParseError(where + ": basis vector length does not match dim");
    m.col(k) = v;
  }
  try {
    return OrthonormalBasis(std::move(m), label.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline Json kd_table_to_json(const ComplexJointTable& t) {
  return Json{{"dim", t.dim()},
              {"entries", matrix_to_json(t.entries())},
              {"basis_a", basis_to_json(t.basis_a())},
              {"basis_b", basis_to_json(t.basis_b())}};
}

inline ComplexJointTable kd_table_from_json(const Json& j, const std::string& where = "kd table") {
  const int d = dim_from_json(j, where);
  Matrix entries = matrix_from_json(require_field(j, "entries", where), where);
  if (entries.rows() != d || entries.cols() != d)
    throw ParseError(where + ": entries shape does not match dim");
  OrthonormalBasis ba = basis_from_json(require_field(j, "basis_a", where), where + ".basis_a");
  OrthonormalBasis bb = basis_from_json(require_field(j, "basis_b", where), where + ".basis_b");
  try {
    return ComplexJointTable(std::move(entries), std::move(ba), std::move(bb));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline Json prob_table_to_json(const ProbTable& t) {
  Json rows = Json::array();
  for (int a = 0; a < t.dim(); ++a) {
    Json row = Json::array();
    for (int b = 0; b < t.dim(); ++b) row.push_back(t.entry(a, b));
    rows.push_back(std::move(row));
  }
  Json j{{"dim", t.dim()}, {"entries", rows}};
  if (t.control_tag()) j["control"] = *t.control_tag();
  if (t.basis_a()) j["basis_a"] = basis_to_json(*t.basis_a());
  if (t.basis_b()) j["basis_b"] = basis_to_json(*t.basis_b());
  return j;
}

inline ProbTable prob_table_from_json(const Json& j, const std::string& where = "prob table") {
  const int d = dim_from_json(j, where);
  const Json& rows = require_field(j, "entries", where);
  if (!rows.is_array() || static_cast<int>(rows.size()) != d)
    throw ParseError(where + ": expected " + std::to_string(d) + " rows");
  RealMatrix entries(d, d);
  for (int a = 0; a < d; ++a) {
    if (!rows[a].is_array() || static_cast<int>(rows[a].size()) != d)
      throw ParseError(where + ": ragged rows");
    for (int b = 0; b < d; ++b) {
      if (!rows[a][b].is_number()) throw ParseError(where + ": entries must be numbers");
      entries(a, b) = rows[a][b].get<double>();
    }
  }
  std::optional<OrthonormalBasis> ba, bb;
  if (j.contains("basis_a")) ba = basis_from_json(j["basis_a"], where + ".basis_a");
  if (j.contains("basis_b")) bb = basis_from_json(j["basis_b"], where + ".basis_b");
  std::optional<std::string> tag;
  if (j.contains("control")) {
    if (!j["control"].is_string()) throw ParseError(where + ": 'control' must be a string");
    tag = j["control"].get<std::string>();
  }
  try {
    return ProbTable(std::move(entries), std::move(ba), std::move(bb), std::move(tag));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

//==============================================================================
// CSV encoding
//==============================================================================

/// 17 significant digits: enough for exact double round-trips, few enough to
/// stay stable across libc implementations.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string kd_table_to_csv(const ComplexJointTable& t) {
  std::string out = "a,b,re,im\n";
  for (int a = 0; a < t.dim(); ++a)
    for (int b = 0; b < t.dim(); ++b) {
      const Complex e = t.entry(a, b);
      out += std::to_string(a) + "," + std::to_string(b) + "," + format_double(e.real()) + "," +
             format_double(e.imag()) + "\n";
    }
  return out;
}

inline std::string prob_table_to_csv(const ProbTable& t) {
  std::string out = "a,b,p\n";
  for (int a = 0; a < t.dim(); ++a)
    for (int b = 0; b < t.dim(); ++b)
      out += std::to_string(a) + "," + std::to_string(b) + "," + format_double(t.entry(a, b)) +
             "\n";
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

/// Parses "a,b,<values...>" rows into a flat list; checks the header and that
/// the (a, b) indices enumerate a full square table in row-major order.
inline std::vector<std::vector<double>> parse_csv_table(const std::string& text,
                                                        const std::string& header,
                                                        std::size_t value_count,
                                                        const std::string& origin, int& dim_out) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line) != detail::split_csv_line(header))
    throw ParseError(origin + ": expected header '" + header + "'");
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != value_count + 2)
      throw ParseError(origin + ": line " + std::to_string(line_no) + ": expected " +
                       std::to_string(value_count + 2) + " fields");
    std::vector<double> parsed;
    for (const auto& f : fields) {
      std::size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(f, &pos);
      } catch (const std::exception&) {
        throw ParseError(origin + ": line " + std::to_string(line_no) + ": bad number '" + f + "'");
      }
      if (pos != f.size())
        throw ParseError(origin + ": line " + std::to_string(line_no) + ": bad number '" + f + "'");
      parsed.push_back(v);
    }
    rows.push_back(std::move(parsed));
  }
  const std::size_t n = rows.size();
  int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || static_cast<std::size_t>(d) * d != n)
    throw ParseError(origin + ": row count " + std::to_string(n) + " is not a perfect square");
  for (std::size_t i = 0; i < n; ++i) {
    const int a = static_cast<int>(i) / d, b = static_cast<int>(i) % d;
    if (rows[i][0] != a || rows[i][1] != b)
      throw ParseError(origin + ": rows must enumerate (a, b) in row-major order");
  }
  dim_out = d;
  return rows;
}

}  // namespace detail

/// Reads a complex joint table from CSV. The bases are not part of the CSV
/// format, so the result is entries-only: (dim, entries).
inline std::pair<int, Matrix> kd_table_from_csv(const std::string& text,
                                                const std::string& origin = "csv") {
  int d = 0;
  const auto rows = detail::parse_csv_table(text, "a,b,re,im", 2, origin, d);
  Matrix entries(d, d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    entries(static_cast<int>(i) / d, static_cast<int>(i) % d) = Complex(rows[i][2], rows[i][3]);
  return {d, std::move(entries)};
}

inline ProbTable prob_table_from_csv(const std::string& text, const std::string& origin = "csv") {
  int d = 0;
  const auto rows = detail::parse_csv_table(text, "a,b,p", 1, origin, d);
  RealMatrix entries(d, d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    entries(static_cast<int>(i) / d, static_cast<int>(i) % d) = rows[i][2];
  return ProbTable(std::move(entries));
}

}  // namespace kdtomo
