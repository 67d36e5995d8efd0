#pragma once

#include <fstream>
#include <string>
#include <type_traits>

namespace tanglesim {

// Minimal CSV emitter: comma delimiter, dot decimal separator, LF line
// endings, header row first. Doubles print with %.12g so reruns under the
// same seed are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);

    CsvWriter& field(double v);
    CsvWriter& field(const std::string& v);
    CsvWriter& field(const char* v);

    template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
    CsvWriter& field(T v) {
        sep();
        out_ << v;
        return *this;
    }

    void endrow();

private:
    void sep();
    std::ofstream out_;
    bool row_open_ = false;
};

}  // namespace tanglesim
