#include "edtwk/csv.hpp"

#include <sstream>

namespace edtwk {

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void write_labeled_matrix_csv(std::ostream& out, const Matrix& m,
                              const std::vector<std::string>& labels, const std::string& corner) {
    out << corner;
    for (long j = 0; j < m.cols(); ++j) out << ',' << labels[j];
    out << '\n';
    for (long i = 0; i < m.rows(); ++i) {
        out << labels[i];
        for (long j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
        out << '\n';
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace edtwk
