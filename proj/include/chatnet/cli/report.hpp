#pragma once

// Tabular results rendered as an aligned table, CSV, or one JSON object per
// row.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace chatnet::cli {

enum class Format { kTable, kCsv, kJsonLines };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
  // Key/value lines after a table, a trailing {"summary": ...} line in
  // json-lines, omitted from CSV.
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  void add(std::vector<nlohmann::ordered_json> row) { rows.push_back(std::move(row)); }
};

// Numbers print with up to 12 significant digits so output is stable.
std::string cell_text(const nlohmann::ordered_json& cell);

void render(const Table& table, Format format, std::ostream& out);

}  // namespace chatnet::cli
