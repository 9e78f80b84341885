#include "febe/cli/table.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "febe/csv.hpp"
#include "febe/version.hpp"

namespace febe::cli {

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("ResultTable: row width does not match the header");
  rows.push_back(std::move(row));
}

void ResultTable::note(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }

std::size_t ResultTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("ResultTable: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

void ResultTable::write_csv(std::ostream& os, const std::string& resolved_config) const {
  os << "# febe " << kVersion << '\n';
  os << "# " << title << '\n';
  for (const auto& [key, value] : metadata) os << "# " << key << ": " << value << '\n';
  std::istringstream config(resolved_config);
  for (std::string line; std::getline(config, line);) os << "# config " << line << '\n';
  if (!units.empty()) {
    os << "# units: ";
    for (std::size_t i = 0; i < units.size(); ++i) os << (i ? "," : "") << (units[i].empty() ? "1" : units[i]);
    os << '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) write_csv_row(os, row);
}

}  // namespace febe::cli
