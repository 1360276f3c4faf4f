#pragma once

// Flat tabular output. CSV carries the metadata as one leading
// "# {json}" line; JSON wraps the same content as {meta, columns, rows}.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "anyon_lab/types.hpp"

namespace anyon_lab {

struct Column {
  std::string name;
  std::string unit;  // empty for dimensionless
};

using Cell = std::variant<double, long long, std::string>;

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ArgumentError("unknown format '" + text + "' (expected csv or json)");
}

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {}

  nlohmann::ordered_json& meta() { return meta_; }
  const nlohmann::ordered_json& meta() const { return meta_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      throw ArgumentError("dataset row has " + std::to_string(row.size()) + " cells, schema has " +
                          std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i].name == name) return i;
    }
    throw ArgumentError("dataset has no column '" + name + "'");
  }

  double number(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
    throw ArgumentError("column '" + column + "' is not numeric");
  }

  void write_csv(std::ostream& os) const {
    os << "# " << meta_.dump() << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << header(columns_[i]);
    os << "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << "\n";
    }
  }

  void write_json(std::ostream& os) const {
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const auto& c : columns_) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    os << "{\"meta\":" << meta_.dump() << ",\"columns\":" << cols.dump() << ",\"rows\":[";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      os << (r ? ",\n" : "\n") << "[";
      for (std::size_t i = 0; i < rows_[r].size(); ++i) os << (i ? "," : "") << json_cell(rows_[r][i]);
      os << "]";
    }
    os << "\n]}\n";
  }

  void write(std::ostream& os, OutputFormat f) const {
    if (f == OutputFormat::csv) {
      write_csv(os);
    } else {
      write_json(os);
    }
  }

  std::string str(OutputFormat f) const {
    std::ostringstream os;
    write(os, f);
    return os.str();
  }

  void save(const std::string& path, OutputFormat f) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
    write(out, f);
  }

 private:
  static std::string header(const Column& c) { return c.unit.empty() ? c.name : c.name + "[" + c.unit + "]"; }

  static std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) quoted += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
    return quoted + "\"";
  }

  static std::string json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
      return std::isfinite(*d) ? format_number(*d) : "null";
    }
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return nlohmann::json(std::get<std::string>(c)).dump();
  }

  nlohmann::ordered_json meta_ = nlohmann::ordered_json::object();
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace anyon_lab
