#pragma once

#include <cinttypes>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"

#include "framelab/errors.hpp"
#include "framelab/spaces.hpp"

namespace framelab {

using OrderedJson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Canonical serialization: fixed field order, 17-significant-digit floats.
// Identical values always produce identical bytes, which is what makes
// machine reports and frame files diffable and golden-testable.
// ---------------------------------------------------------------------------

namespace canonical {

inline std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

// Arrays print inline when they hold only scalars or one further level of
// scalar arrays (vector rows and complex pairs); deeper nesting breaks
// across lines.
inline bool flat_printable(const OrderedJson& j, int depth = 0) {
  if (j.is_object()) return false;
  if (!j.is_array()) return true;
  if (depth >= 2) return false;
  for (const auto& el : j) {
    if (!flat_printable(el, depth + 1)) return false;
  }
  return true;
}

inline void dump(const OrderedJson& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case OrderedJson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        escape_string(it.key(), out);
        out += ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case OrderedJson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (flat_printable(j)) {
        out += "[";
        bool first = true;
        for (const auto& el : j) {
          if (!first) out += ", ";
          first = false;
          dump(el, out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump(el, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case OrderedJson::value_t::string:
      escape_string(j.get<std::string>(), out);
      return;
    case OrderedJson::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case OrderedJson::value_t::number_integer:
    case OrderedJson::value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
      out += buf;
      return;
    }
    case OrderedJson::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

inline std::string dump(const OrderedJson& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace canonical

// ---------------------------------------------------------------------------
// Frame files
// ---------------------------------------------------------------------------

/// On-disk description of one or two vector families with their exponents.
/// Entries are held as complex regardless of kind; real files carry zero
/// imaginary parts.
struct FrameFileData {
  ScalarKind scalar = ScalarKind::real;
  Index m = 0;  // ambient dimension
  Index n = 0;  // family size
  double p = 2.0;
  double r = 2.0;
  Mat<std::complex<double>> x;
  std::optional<Mat<std::complex<double>>> y;
  std::string meta_name;
  std::string meta_description;
};

namespace detail {

inline OrderedJson exponent_to_json(double p) {
  if (is_inf_exponent(p)) return OrderedJson("inf");
  return OrderedJson(p);
}

inline double exponent_from_json(const OrderedJson& j, const char* field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfExponent;
    throw FileFormatError(std::string("frame file: field '") + field + "' must be a number or \"inf\"");
  }
  if (!j.is_number()) throw FileFormatError(std::string("frame file: field '") + field + "' must be a number or \"inf\"");
  return j.get<double>();
}

inline OrderedJson entry_to_json(const std::complex<double>& z, ScalarKind kind) {
  if (kind == ScalarKind::real) return OrderedJson(z.real());
  return OrderedJson::array({z.real(), z.imag()});
}

inline std::complex<double> entry_from_json(const OrderedJson& j, ScalarKind kind) {
  if (kind == ScalarKind::real) {
    if (!j.is_number()) throw FileFormatError("frame file: real entries must be plain numbers");
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FileFormatError("frame file: complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline OrderedJson matrix_to_json(const Mat<std::complex<double>>& mat, ScalarKind kind) {
  OrderedJson rows = OrderedJson::array();
  for (Index i = 0; i < mat.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (Index j = 0; j < mat.cols(); ++j) row.push_back(entry_to_json(mat(i, j), kind));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat<std::complex<double>> matrix_from_json(const OrderedJson& j, Index rows, Index cols, ScalarKind kind,
                                                  const char* field) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw FileFormatError(std::string("frame file: field '") + field + "' must be an array of " +
                          std::to_string(rows) + " rows");
  }
  Mat<std::complex<double>> mat(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw FileFormatError(std::string("frame file: row ") + std::to_string(i) + " of '" + field + "' must have " +
                            std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) mat(i, c) = entry_from_json(row[static_cast<std::size_t>(c)], kind);
  }
  return mat;
}

inline const OrderedJson& require_field(const OrderedJson& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw FileFormatError(std::string("frame file: missing field '") + name + "'");
  return *it;
}

}  // namespace detail

inline OrderedJson frame_file_to_json(const FrameFileData& data) {
  OrderedJson j = OrderedJson::object();
  j["scalar"] = data.scalar == ScalarKind::real ? "real" : "complex";
  j["m"] = static_cast<std::int64_t>(data.m);
  j["n"] = static_cast<std::int64_t>(data.n);
  j["p"] = detail::exponent_to_json(data.p);
  j["r"] = detail::exponent_to_json(data.r);
  j["x"] = detail::matrix_to_json(data.x, data.scalar);
  if (data.y) j["y"] = detail::matrix_to_json(*data.y, data.scalar);
  if (!data.meta_name.empty() || !data.meta_description.empty()) {
    OrderedJson meta = OrderedJson::object();
    if (!data.meta_name.empty()) meta["name"] = data.meta_name;
    if (!data.meta_description.empty()) meta["description"] = data.meta_description;
    j["meta"] = std::move(meta);
  }
  return j;
}

inline std::string write_frame_file(const FrameFileData& data) { return canonical::dump(frame_file_to_json(data)); }

inline FrameFileData parse_frame_file(const std::string& text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FileFormatError(std::string("frame file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FileFormatError("frame file: top level must be an object");

  FrameFileData data;
  const auto& scalar = detail::require_field(j, "scalar");
  if (!scalar.is_string() || (scalar != "real" && scalar != "complex")) {
    throw FileFormatError("frame file: field 'scalar' must be \"real\" or \"complex\"");
  }
  data.scalar = scalar == "real" ? ScalarKind::real : ScalarKind::complex;

  const auto& m = detail::require_field(j, "m");
  const auto& n = detail::require_field(j, "n");
  if (!m.is_number_integer() || !n.is_number_integer()) {
    throw FileFormatError("frame file: fields 'm' and 'n' must be integers");
  }
  data.m = m.get<Index>();
  data.n = n.get<Index>();
  if (data.m < 1 || data.n < 1) throw FileFormatError("frame file: 'm' and 'n' must be positive");

  data.p = detail::exponent_from_json(detail::require_field(j, "p"), "p");
  data.r = detail::exponent_from_json(detail::require_field(j, "r"), "r");
  data.x = detail::matrix_from_json(detail::require_field(j, "x"), data.n, data.m, data.scalar, "x");
  if (j.contains("y")) data.y = detail::matrix_from_json(j["y"], data.n, data.m, data.scalar, "y");
  if (j.contains("meta")) {
    const auto& meta = j["meta"];
    if (!meta.is_object()) throw FileFormatError("frame file: 'meta' must be an object");
    if (meta.contains("name")) data.meta_name = meta["name"].get<std::string>();
    if (meta.contains("description")) data.meta_description = meta["description"].get<std::string>();
  }
  return data;
}

inline FrameFileData read_frame_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError("frame file: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_frame_file(buf.str());
}

inline void save_frame_file(const std::string& path, const FrameFileData& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError("frame file: cannot write '" + path + "'");
  out << write_frame_file(data);
}

// ---------------------------------------------------------------------------
// Operator files (square or rectangular dense maps fed to the CLI)
// ---------------------------------------------------------------------------

struct OperatorFileData {
  ScalarKind scalar = ScalarKind::real;
  Index rows = 0;
  Index cols = 0;
  Mat<std::complex<double>> entries;
};

inline OrderedJson operator_file_to_json(const OperatorFileData& data) {
  OrderedJson j = OrderedJson::object();
  j["scalar"] = data.scalar == ScalarKind::real ? "real" : "complex";
  j["rows"] = static_cast<std::int64_t>(data.rows);
  j["cols"] = static_cast<std::int64_t>(data.cols);
  j["entries"] = detail::matrix_to_json(data.entries, data.scalar);
  return j;
}

inline std::string write_operator_file(const OperatorFileData& data) {
  return canonical::dump(operator_file_to_json(data));
}

inline OperatorFileData parse_operator_file(const std::string& text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FileFormatError(std::string("operator file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FileFormatError("operator file: top level must be an object");
  OperatorFileData data;
  const auto& scalar = detail::require_field(j, "scalar");
  if (!scalar.is_string() || (scalar != "real" && scalar != "complex")) {
    throw FileFormatError("operator file: field 'scalar' must be \"real\" or \"complex\"");
  }
  data.scalar = scalar == "real" ? ScalarKind::real : ScalarKind::complex;
  const auto& rows = detail::require_field(j, "rows");
  const auto& cols = detail::require_field(j, "cols");
  if (!rows.is_number_integer() || !cols.is_number_integer()) {
    throw FileFormatError("operator file: 'rows' and 'cols' must be integers");
  }
  data.rows = rows.get<Index>();
  data.cols = cols.get<Index>();
  if (data.rows < 1 || data.cols < 1) throw FileFormatError("operator file: dimensions must be positive");
  data.entries = detail::matrix_from_json(detail::require_field(j, "entries"), data.rows, data.cols, data.scalar,
                                          "entries");
  return data;
}

inline OperatorFileData read_operator_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError("operator file: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_operator_file(buf.str());
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Structured result of one CLI run. The machine rendering contains only
/// seed-deterministic content; wall time appears in the human rendering.
struct Report {
  std::string command;
  std::uint64_t seed = 0;
  OrderedJson tolerances = OrderedJson::object();
  OrderedJson verdicts = OrderedJson::object();
  OrderedJson constants = OrderedJson::object();
  OrderedJson residuals = OrderedJson::object();
  OrderedJson witnesses = OrderedJson::object();
  double wall_ms = 0.0;
};

inline std::string to_machine(const Report& report) {
  OrderedJson j = OrderedJson::object();
  j["command"] = report.command;
  j["seed"] = static_cast<std::int64_t>(report.seed);
  j["tolerances"] = report.tolerances;
  j["verdicts"] = report.verdicts;
  j["constants"] = report.constants;
  j["residuals"] = report.residuals;
  j["witnesses"] = report.witnesses;
  return canonical::dump(j);
}

namespace detail {

inline void human_rows(const OrderedJson& j, const std::string& prefix, std::string& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      human_rows(*it, key, out);
      continue;
    }
    std::string rendered;
    if (it->is_string()) {
      rendered = it->get<std::string>();
    } else {
      canonical::dump(*it, rendered, 0);
    }
    char line[512];
    std::snprintf(line, sizeof(line), "  %-24s %s\n", key.c_str(), rendered.c_str());
    out += line;
  }
}

}  // namespace detail

inline std::string to_human(const Report& report) {
  std::string out;
  out += "framelab report\n";
  out += "  ------------------------ ----------------------------------------\n";
  char line[512];
  std::snprintf(line, sizeof(line), "  %-24s %s\n", "command", report.command.c_str());
  out += line;
  std::snprintf(line, sizeof(line), "  %-24s %" PRIu64 "\n", "seed", report.seed);
  out += line;
  detail::human_rows(report.tolerances, "", out);
  detail::human_rows(report.verdicts, "", out);
  detail::human_rows(report.constants, "", out);
  detail::human_rows(report.residuals, "", out);
  detail::human_rows(report.witnesses, "witness", out);
  std::snprintf(line, sizeof(line), "  %-24s %.3f\n", "wall_ms", report.wall_ms);
  out += line;
  return out;
}

/// Serializes a coordinate vector for a report, following the frame-file
/// entry conventions.
inline OrderedJson vector_to_json(const Vec<std::complex<double>>& v, ScalarKind kind) {
  OrderedJson arr = OrderedJson::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(detail::entry_to_json(v[i], kind));
  return arr;
}

}  // namespace framelab
