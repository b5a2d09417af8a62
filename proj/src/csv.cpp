#include "paulloc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace paulloc {

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_exact(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw ConfigError("cannot open output file " + path);
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::header(const std::vector<std::string>& cols) {
    n_cols_ = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out_ << cols[i] << (i + 1 < cols.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& vals) {
    if (n_cols_ && vals.size() != n_cols_)
        throw ConfigError("csv row width mismatch in " + path_);
    for (std::size_t i = 0; i < vals.size(); ++i)
        out_ << format_full(vals[i]) << (i + 1 < vals.size() ? "," : "\n");
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw ConfigError("failed writing " + path_);
}

std::size_t CsvTable::col_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ConfigError("csv: no column named " + name);
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const std::size_t idx = col_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(idx));
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string field;
        if (!have_header) {
            while (std::getline(ss, field, ',')) t.columns.push_back(field);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ConfigError("csv: bad number '" + field + "' in " + path);
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace paulloc
