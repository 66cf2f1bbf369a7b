#include "chatnet/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chatnet::cli {

using oj = nlohmann::ordered_json;

std::string cell_text(const oj& cell) {
  if (cell.is_null()) return "-";
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_boolean()) return cell.get<bool>() ? "yes" : "no";
  if (cell.is_number_integer()) return std::to_string(cell.get<long long>());
  if (cell.is_number()) {
    const double x = cell.get<double>();
    if (x == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
  }
  return cell.dump();
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Round floating cells the same way the text forms do.
oj stable(const oj& cell) {
  if (cell.is_number_float()) return std::stod(cell_text(cell));
  return cell;
}

}  // namespace

void render(const Table& table, Format format, std::ostream& out) {
  switch (format) {
    case Format::kTable: {
      std::vector<std::size_t> width;
      for (const auto& c : table.columns) width.push_back(c.size());
      std::vector<std::vector<std::string>> text;
      for (const auto& row : table.rows) {
        auto& line = text.emplace_back();
        for (std::size_t k = 0; k < row.size(); ++k) {
          line.push_back(cell_text(row[k]));
          width[k] = std::max(width[k], line.back().size());
        }
      }
      auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t k = 0; k < cells.size(); ++k) {
          if (k) line += "  ";
          line += cells[k];
          if (k + 1 < cells.size()) line.append(width[k] - cells[k].size(), ' ');
        }
        out << line << '\n';
      };
      emit(table.columns);
      std::vector<std::string> rule;
      for (std::size_t w : width) rule.emplace_back(w, '-');
      emit(rule);
      for (const auto& line : text) emit(line);
      for (const auto& [key, value] : table.summary.items()) {
        out << key << ": " << cell_text(value) << '\n';
      }
      break;
    }
    case Format::kCsv: {
      for (std::size_t k = 0; k < table.columns.size(); ++k) {
        out << (k ? "," : "") << csv_escape(table.columns[k]);
      }
      out << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
          out << (k ? "," : "") << (row[k].is_null() ? "" : csv_escape(cell_text(row[k])));
        }
        out << '\n';
      }
      break;
    }
    case Format::kJsonLines: {
      for (const auto& row : table.rows) {
        oj obj = oj::object();
        for (std::size_t k = 0; k < row.size(); ++k) obj[table.columns[k]] = stable(row[k]);
        out << obj.dump() << '\n';
      }
      if (!table.summary.empty()) {
        oj tail = oj::object();
        for (const auto& [key, value] : table.summary.items()) tail[key] = stable(value);
        oj line = oj::object();
        line["summary"] = std::move(tail);
        out << line.dump() << '\n';
      }
      break;
    }
  }
}

}  // namespace chatnet::cli
