#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qplab {

// One number, 17 significant digits, locale-independent. Round-trips every
// finite double and keeps artifacts byte-stable across runs.
std::string format_g17(double v);

// Writes "# key = value" provenance lines, a column-name header row, then
// the data rows. Fails loudly (std::runtime_error) if the file cannot be
// written or a row width disagrees with the header.
void write_csv(const std::string& path,
               const std::vector<std::pair<std::string, std::string>>& provenance,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// Reads a two-column CSV written by write_csv (or by hand): '#' lines and a
// leading non-numeric header row are skipped. Returns the rows.
std::vector<std::pair<double, double>> read_csv_pairs(const std::string& path);

}  // namespace qplab
