#ifndef MINTORUS_REPORT_HPP
#define MINTORUS_REPORT_HPP

// Output model shared by the command-line tools: a document of named tables
// rendered as JSON, CSV or aligned text with a fixed number of significant
// digits.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mintorus/errors.hpp"

namespace mintorus {

enum class Format { json, csv, text };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw InvalidArgument("unknown format '" + s + "' (json, csv, text)");
}

struct OutputConfig {
  Format format = Format::text;
  std::optional<std::string> out_path;
  int precision = 12;

  void validate() const {
    if (precision < 4 || precision > 17) throw InvalidArgument("precision must lie in [4, 17]");
  }
};

using Cell = std::variant<std::string, long long, double, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw Error("row width does not match the header");
    rows.push_back(std::move(row));
  }
  bool empty() const { return rows.empty(); }
};

/// Top-level output: {params, checks[], spectra[], functionals}.
struct Document {
  std::vector<std::pair<std::string, Cell>> params;
  Table checks;
  Table spectra;
  Table functionals;
  /// Table written in CSV mode.
  enum class Primary { checks, spectra, functionals } primary = Primary::spectra;
  /// Extra lines appended in text mode.
  std::vector<std::string> notes;

  const Table& primary_table() const {
    switch (primary) {
      case Primary::checks: return checks;
      case Primary::functionals: return functionals;
      default: return spectra;
    }
  }
};

inline std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

inline std::string format_cell(const Cell& c, int precision) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return format_number(std::get<double>(c), precision);
}

namespace detail {

inline nlohmann::ordered_json to_json(const Cell& c, int precision) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  const double v = std::get<double>(c);
  if (!std::isfinite(v)) return nullptr;
  // rounded to the declared precision; the shortest repr of the result is printed
  return std::strtod(format_number(v, precision).c_str(), nullptr);
}

inline nlohmann::ordered_json rows_json(const Table& t, int precision) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = to_json(row[i], precision);
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline void write_text_table(std::ostream& os, const Table& t, int precision) {
  std::vector<std::size_t> width(t.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    std::vector<std::string> r;
    for (std::size_t i = 0; i < row.size(); ++i) {
      r.push_back(format_cell(row[i], precision));
      width[i] = std::max(width[i], r.back().size());
    }
    cells.push_back(std::move(r));
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
    }
    os << '\n';
  };
  line(t.columns);
  for (const auto& r : cells) line(r);
}

}  // namespace detail

inline std::string render_json(const Document& doc, int precision) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : doc.params) params[k] = detail::to_json(v, precision);
  j["params"] = std::move(params);
  j["checks"] = detail::rows_json(doc.checks, precision);
  j["spectra"] = detail::rows_json(doc.spectra, precision);
  nlohmann::ordered_json functionals = nlohmann::ordered_json::object();
  functionals["rows"] = detail::rows_json(doc.functionals, precision);
  j["functionals"] = std::move(functionals);
  return j.dump(2) + "\n";
}

inline std::string render_csv(const Table& t, int precision) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << detail::csv_field(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_field(format_cell(row[i], precision));
    os << '\n';
  }
  return os.str();
}

inline std::string render_text(const Document& doc, int precision) {
  std::ostringstream os;
  if (!doc.params.empty()) {
    for (std::size_t i = 0; i < doc.params.size(); ++i)
      os << (i ? "  " : "") << doc.params[i].first << '=' << format_cell(doc.params[i].second, precision);
    os << "\n\n";
  }
  bool first = true;
  for (const Table* t : {&doc.spectra, &doc.functionals, &doc.checks}) {
    if (t->empty()) continue;
    if (!first) os << '\n';
    detail::write_text_table(os, *t, precision);
    first = false;
  }
  for (const std::string& n : doc.notes) os << n << '\n';
  return os.str();
}

inline std::string render(const Document& doc, const OutputConfig& cfg) {
  cfg.validate();
  switch (cfg.format) {
    case Format::json: return render_json(doc, cfg.precision);
    case Format::csv: return render_csv(doc.primary_table(), cfg.precision);
    default: return render_text(doc, cfg.precision);
  }
}

/// Writes to cfg.out_path, or to `fallback` when no path is set.
inline void emit(const std::string& content, const OutputConfig& cfg, std::ostream& fallback = std::cout) {
  if (!cfg.out_path) {
    fallback << content;
    fallback.flush();
    return;
  }
  std::ofstream f(*cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + *cfg.out_path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("write to '" + *cfg.out_path + "' failed");
}

/// Minimal CSV reader for the output above (quoted fields, no embedded newlines).
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cur += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(std::move(cur));
    out.push_back(std::move(fields));
  }
  return out;
}

}  // namespace mintorus

#endif  // MINTORUS_REPORT_HPP
