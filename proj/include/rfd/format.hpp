#pragma once

// Text, CSV and JSON renderings of designs, plus the weights-file reader.

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfd/exact_design.hpp"
#include "rfd/orbit.hpp"

namespace rfd {

enum class OutputFormat { Json, Csv, PmText, Table };

inline OutputFormat parse_output_format(std::string_view name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "pm-text") return OutputFormat::PmText;
  if (name == "table") return OutputFormat::Table;
  throw std::invalid_argument("unknown format '" + std::string(name) +
                              "' (expected json, csv, pm-text or table)");
}

// Unicode minus, used for empty cells in the reproduced tables.
inline constexpr std::string_view kDash = "−";

// printf-style fixed rounding: exact binary ties round to even, so
// 0.03125 -> "0.0312" and 0.46875 -> "0.4688".
inline std::string format_fixed(double value, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, value);
  return buf;
}

inline std::string format_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

// ---- design matrices ------------------------------------------------------

inline std::string to_pm_text(const DesignMatrix& rows) {
  std::string out;
  for (const auto& x : rows) {
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
      if (j) out += ' ';
      out += x.coords[j] > 0 ? '+' : '-';
    }
    out += '\n';
  }
  return out;
}

inline std::string to_csv(const DesignMatrix& rows) {
  std::string out;
  for (const auto& x : rows) {
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
      if (j) out += ',';
      out += x.coords[j] > 0 ? "1" : "-1";
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const DesignMatrix& rows) {
  auto out = nlohmann::json::array();
  for (const auto& x : rows) out.push_back(x.coords);
  return out;
}

// Reads +-text rows; "-" and the Unicode minus both denote -1.
inline DesignMatrix parse_pm_text(std::string_view text) {
  DesignMatrix rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    DesignPoint x;
    for (std::size_t i = 0; i < line.size();) {
      if (line[i] == '+') {
        x.coords.push_back(1);
        ++i;
      } else if (line[i] == '-') {
        x.coords.push_back(-1);
        ++i;
      } else if (line.compare(i, kDash.size(), kDash) == 0) {
        x.coords.push_back(-1);
        i += kDash.size();
      } else if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
      } else {
        throw std::invalid_argument("unexpected character in +-text row: '" + line + "'");
      }
    }
    if (x.coords.empty()) continue;
    if (!rows.empty() && rows.front().coords.size() != x.coords.size()) {
      throw std::invalid_argument("+-text rows differ in length");
    }
    rows.push_back(std::move(x));
  }
  return rows;
}

// ---- orbit weights ---------------------------------------------------------

// Orbit index -> "p/q" string for exact designs, full-precision number
// otherwise.
inline nlohmann::json weights_to_json(const OrbitDesign& design) {
  auto out = nlohmann::json::object();
  if (design.is_exact()) {
    for (const auto& [k, w] : *design.exact_weights()) out[std::to_string(k)] = to_string(w);
  } else {
    for (const auto& [k, w] : design.weights()) out[std::to_string(k)] = w;
  }
  return out;
}

// Accepts either the bare mapping or an object holding it under "weights".
// Values are numbers or rational strings; the design is exact iff every value
// is a string.
inline OrbitDesign parse_weights_json(const nlohmann::json& doc, const OrbitSpace& space) {
  const nlohmann::json& map =
      (doc.is_object() && doc.contains("weights")) ? doc.at("weights") : doc;
  if (!map.is_object()) {
    throw std::invalid_argument("weights must be a JSON object mapping orbit to weight");
  }
  std::map<int, Rational> exact;
  std::map<int, double> approx;
  bool all_exact = true;
  for (const auto& [key, value] : map.items()) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw std::invalid_argument("orbit key '" + key + "' is not an integer");
    }
    if (value.is_string()) {
      const Rational r = parse_rational(value.get<std::string>());
      exact[k] = r;
      approx[k] = to_double(r);
    } else if (value.is_number()) {
      all_exact = false;
      approx[k] = value.get<double>();
    } else {
      throw std::invalid_argument("weight for orbit '" + key + "' must be a number or string");
    }
  }
  if (all_exact && !exact.empty()) {
    return OrbitDesign(space, exact);
  }
  return OrbitDesign(space, approx);
}

inline OrbitDesign parse_weights_text(std::string_view text, const OrbitSpace& space) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("weights file is not valid JSON: ") + e.what());
  }
  return parse_weights_json(doc, space);
}

// ---- generic tables --------------------------------------------------------

struct TextTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string render_text(const TextTable& t) {
  std::vector<std::size_t> width(t.columns.size(), 0);
  auto cell_width = [](const std::string& s) {
    // Count code points so the Unicode dash aligns like a single character.
    std::size_t n = 0;
    for (unsigned char c : s) n += ((c & 0xC0) != 0x80) ? 1 : 0;
    return n;
  };
  for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = cell_width(t.columns[j]);
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], cell_width(row[j]));
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j) out += "  ";
      out.append(width[j] - cell_width(cells[j]), ' ');
      out += cells[j];
    }
    return out;
  };
  std::string out = "# " + t.title + "\n# " + line(t.columns) + "\n";
  for (const auto& row : t.rows) out += "  " + line(row) + "\n";
  return out;
}

inline std::string render_csv(const TextTable& t) {
  auto join = [](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j) out += ',';
      out += cells[j];
    }
    return out + "\n";
  };
  std::string out = join(t.columns);
  for (const auto& row : t.rows) out += join(row);
  return out;
}

// Rows become objects keyed by column; dashes become null and numeric cells
// numbers.
inline nlohmann::json render_json(const TextTable& t) {
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    auto obj = nlohmann::json::object();
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& cell = row[j];
      if (cell == kDash) {
        obj[t.columns[j]] = nullptr;
        continue;
      }
      try {
        std::size_t used = 0;
        if (cell.find('.') == std::string::npos) {
          const long long v = std::stoll(cell, &used);
          if (used == cell.size()) {
            obj[t.columns[j]] = v;
            continue;
          }
        }
        const double v = std::stod(cell, &used);
        if (used == cell.size()) {
          obj[t.columns[j]] = v;
          continue;
        }
      } catch (const std::exception&) {
      }
      obj[t.columns[j]] = cell;
    }
    rows.push_back(std::move(obj));
  }
  return {{"title", t.title}, {"rows", rows}};
}

}  // namespace rfd
