#pragma once

// Tabular output for the command-line front end: CSV and JSON with a fixed
// number of significant digits, independent of the C locale.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pleijel/error.hpp"

namespace pleijel::io {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Parameters and solver tolerances; emitted with JSON output only.
  json meta = json::object();

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw DomainError("table row arity mismatch");
    rows.push_back(std::move(row));
  }
};

enum class Format { csv, json };

struct OutputSpec {
  Format format = Format::csv;
  std::string path;  ///< empty or "-" means standard output
  int precision = 12;

  void validate() const {
    if (precision < 4 || precision > 17) {
      throw DomainError("precision must lie in [4, 17], got " + std::to_string(precision));
    }
  }
};

/// Shortest decimal with `precision` significant digits ("%.*g" without locale).
[[nodiscard]] inline std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  if (res.ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

/// The double that format_double(v, precision) denotes.
[[nodiscard]] inline double round_to_precision(double v, int precision) {
  if (!std::isfinite(v)) return v;
  const std::string s = format_double(v, precision);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string cell_text(const Cell& c, int precision) {
  return std::visit(
      [precision](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v, precision);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return csv_escape(v);
        }
      },
      c);
}

inline json cell_json(const Cell& c, int precision) {
  return std::visit(
      [precision](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return round_to_precision(v, precision);
        } else {
          return v;
        }
      },
      c);
}

}  // namespace detail

inline void write_csv(const Table& t, std::ostream& os, int precision) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << detail::csv_escape(t.columns[i]);
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << detail::cell_text(row[i], precision);
    }
    os << '\n';
  }
}

[[nodiscard]] inline json to_json(const Table& t, int precision) {
  json doc = json::object();
  doc["columns"] = t.columns;
  doc["meta"] = t.meta;
  doc["meta"]["precision"] = precision;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[t.columns[i]] = detail::cell_json(row[i], precision);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

inline void write_json(const Table& t, std::ostream& os, int precision) {
  os << to_json(t, precision).dump(2) << '\n';
}

inline void write(const Table& t, const OutputSpec& spec, std::ostream& stdout_stream) {
  spec.validate();
  auto emit = [&](std::ostream& os) {
    if (spec.format == Format::csv) {
      write_csv(t, os, spec.precision);
    } else {
      write_json(t, os, spec.precision);
    }
  };
  if (spec.path.empty() || spec.path == "-") {
    emit(stdout_stream);
    return;
  }
  std::ofstream file(spec.path);
  if (!file) throw Error("cannot open output file " + spec.path);
  emit(file);
  if (!file) throw Error("failed writing output file " + spec.path);
}

}  // namespace pleijel::io
