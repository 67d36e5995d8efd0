#include "tanglesim/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace tanglesim {

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    out_ << header << '\n';
}

void CsvWriter::sep() {
    if (row_open_) out_ << ',';
    row_open_ = true;
}

CsvWriter& CsvWriter::field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    sep();
    out_ << buf;
    return *this;
}

CsvWriter& CsvWriter::field(const std::string& v) {
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::field(const char* v) {
    sep();
    out_ << v;
    return *this;
}

void CsvWriter::endrow() {
    out_ << '\n';
    row_open_ = false;
}

}  // namespace tanglesim
