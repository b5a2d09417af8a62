#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "paulloc/common.hpp"

namespace paulloc {

// 17 significant digits: lossless round trip for 64-bit floats
std::string format_full(double v);
// shortest representation that round-trips exactly
std::string format_exact(double v);

// Writer for the artifact CSV format: '#' metadata lines, one header row,
// numeric rows at full precision.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void comment(const std::string& text);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t n_cols_ = 0;
};

// Reads the same format back; comment lines are skipped.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows; // row-major

    std::size_t col_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

} // namespace paulloc
