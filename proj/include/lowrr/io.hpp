#pragma once

#include <stdexcept>
#include <string>

#include "lowrr/mat.hpp"

namespace lowrr {

struct CsvError : std::runtime_error {
  int line;
  CsvError(const std::string& msg, int line_number)
      : std::runtime_error(msg + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
};

/// Rectangular numeric CSV, '.' decimal, comma separated. A non-numeric
/// first row is treated as a header and skipped. Ragged rows, non-numeric
/// cells, and empty files raise CsvError with the offending line number.
Mat read_matrix_csv(const std::string& path);

/// Writes with 17 significant digits, so a read round-trip is exact.
void write_matrix_csv(const Mat& m, const std::string& path);

}  // namespace lowrr
