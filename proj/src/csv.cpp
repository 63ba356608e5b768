#include "qplab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qplab {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path,
               const std::vector<std::pair<std::string, std::string>>& provenance,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);  // fixed '\n' endings everywhere
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& [key, value] : provenance) out << "# " << key << " = " << value << "\n";
    for (size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::runtime_error("row width mismatch in " + path);
        for (size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_g17(row[c]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<std::pair<double, double>> read_csv_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (ss >> a >> b) rows.emplace_back(a, b);
        // non-numeric rows (the header) are skipped
    }
    return rows;
}

}  // namespace qplab
