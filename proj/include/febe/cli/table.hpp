#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace febe::cli {

struct PlotSpec {
  std::size_t x = 0;
  std::vector<std::size_t> y;
  bool log_x = false;
  bool log_y = false;
  std::string y_label;
};

/// Scenario output: named columns of reals plus a metadata block.
struct ResultTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  PlotSpec plot;

  void add_row(std::vector<double> row);
  void note(std::string key, std::string value);
  std::size_t column(const std::string& name) const;

  /// Metadata and the resolved configuration as '#' lines, then the header
  /// and rows with 12 significant digits.
  void write_csv(std::ostream& os, const std::string& resolved_config) const;
};

/// Standalone SVG line plot built only from the table contents.
std::string render_svg(const ResultTable& table);

}  // namespace febe::cli
