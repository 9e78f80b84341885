#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>

namespace febe {

/// Fixed 12-significant-digit formatting used for every numeric CSV field.
inline std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

inline void write_csv_row(std::ostream& os, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format_number(values[i]);
  }
  os << '\n';
}

inline void write_csv_row(std::ostream& os, std::initializer_list<double> values) {
  write_csv_row(os, std::span<const double>(values.begin(), values.size()));
}

}  // namespace febe
