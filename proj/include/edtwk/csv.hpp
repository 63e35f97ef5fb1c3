#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "edtwk/common.hpp"

namespace edtwk {

/// 12 significant digits, shortest form.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

/// Matrix with a header row of labels and a leading label column.
void write_labeled_matrix_csv(std::ostream& out, const Matrix& m,
                              const std::vector<std::string>& labels,
                              const std::string& corner = "label");

/// Split one CSV line on commas; no quoting (the formats here never need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace edtwk
