#pragma once

// JSON encodings of matrices, geometries and Lagrangian descriptors. Matrices
// are row-major arrays of arrays; doubles are written in shortest
// round-trip form, so a value read back is bit-identical to the one written.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "strain_dec/errors.hpp"
#include "strain_dec/invariants.hpp"
#include "strain_dec/lagrangian.hpp"
#include "strain_dec/multilinear.hpp"

namespace strain_dec::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

/// Parses JSON, reporting syntax errors as "<source>:<line>:<column>: ...".
inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": malformed JSON (" + e.what() + ")");
  }
}

inline json parse_json_file(const std::string& path) {
  return parse_json_text(read_text_file(path), path);
}

/// Field access with a JSON-pointer-style path in every error message.
class FieldReader {
 public:
  FieldReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ParseError("field '" + path_ + "': expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key) && !node_[key].is_null(); }

  const json& at(const std::string& key) const {
    if (!node_.contains(key)) throw ParseError("field '" + child(key) + "': missing");
    return node_[key];
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ParseError("field '" + child(key) + "': expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ParseError("field '" + child(key) + "': expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ParseError("field '" + child(key) + "': expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ParseError("field '" + child(key) + "': expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_boolean()) throw ParseError("field '" + child(key) + "': expected a boolean");
    return v.get<bool>();
  }

  FieldReader object(const std::string& key) const { return FieldReader(at(key), child(key)); }

  const json& raw() const { return node_; }
  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

inline void require_schema_version(const FieldReader& r) {
  const auto version = r.integer("schema_version");
  if (version != kSchemaVersion) {
    throw SchemaVersionError("field '" + r.child("schema_version") + "': version " +
                             std::to_string(version) + " is not supported (expected " +
                             std::to_string(kSchemaVersion) + ")");
  }
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Matrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError("field '" + path + "': expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw ParseError("field '" + path + "/0': expected a non-empty row");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string row_path = path + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("field '" + row_path + "': expected a row of " + std::to_string(cols) +
                       " numbers");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw ParseError("field '" + row_path + "/" + std::to_string(c) + "': expected a number");
      }
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

inline Vector vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError("field '" + path + "': expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("field '" + path + "/" + std::to_string(i) + "': expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline json to_json(const PointGeometry& geom) {
  return json{{"g", to_json(geom.g.matrix())},
              {"h", to_json(geom.h.matrix())},
              {"dphi", to_json(geom.dphi)}};
}

inline PointGeometry geometry_from_json(const FieldReader& r) {
  const Matrix g = matrix_from_json(r.at("g"), r.child("g"));
  const Matrix h = matrix_from_json(r.at("h"), r.child("h"));
  const Matrix dphi = matrix_from_json(r.at("dphi"), r.child("dphi"));
  try {
    return PointGeometry::make(g, h, dphi);
  } catch (const ArgumentError& e) {
    throw ParseError("field '" + r.path() + "': " + e.what());
  }
}

inline json to_json(const LagrangianFlags& f) {
  return json{{"defocusing", f.defocusing}, {"zeroed", f.zeroed}, {"nondegenerate", f.nondegenerate}};
}

inline LagrangianFlags flags_from_json(const FieldReader& r) {
  return LagrangianFlags{r.boolean("defocusing"), r.boolean("zeroed"), r.boolean("nondegenerate")};
}

inline json to_json(const LagrangianConfig& c) {
  json out{{"name", c.name}};
  if (c.name == "linear_combination" || c.name == "skyrme") out["coefficients"] = c.coefficients;
  if (c.name == "born_infeld") out["b"] = c.b;
  if (c.name == "elementary") out["degree"] = c.degree;
  if (c.name == "born_infeld" || c.name == "sqrt_sm") out["domain_margin"] = c.domain_margin;
  if (c.declared_flags) out["declared_flags"] = to_json(*c.declared_flags);
  return out;
}

inline LagrangianConfig lagrangian_config_from_json(const FieldReader& r) {
  LagrangianConfig c;
  c.name = r.string("name");
  if (r.has("coefficients")) {
    const json& arr = r.at("coefficients");
    if (!arr.is_array()) throw ParseError("field '" + r.child("coefficients") + "': expected an array");
    const Vector v = vector_from_json(arr, r.child("coefficients"));
    c.coefficients.assign(v.data(), v.data() + v.size());
  }
  c.b = r.number_or("b", c.b);
  if (r.has("degree")) c.degree = static_cast<int>(r.integer("degree"));
  c.domain_margin = r.number_or("domain_margin", c.domain_margin);
  if (r.has("declared_flags")) c.declared_flags = flags_from_json(r.object("declared_flags"));
  return c;
}

}  // namespace strain_dec::harness
