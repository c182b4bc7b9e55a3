#include "qimsim/csv_io.hpp"

#include <charconv>
#include <fstream>

namespace qimsim {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {
void write_meta(std::ostream& out, const CsvMeta& meta) {
    for (const auto& [key, value] : meta) out << "# " << key << " " << value << "\n";
}
}  // namespace

void write_pattern_csv(std::ostream& out, const Pattern& pattern,
                       const CsvMeta& meta) {
    out << "# qimsim pattern v1\n";
    write_meta(out, meta);
    out << "x_m,value\n";
    for (int i = 0; i < pattern.axis.n; ++i)
        out << format_double(pattern.axis.at(i)) << ","
            << format_double(pattern.values[i]) << "\n";
}

void write_band_csv(std::ostream& out, const Axis& axis,
                    const std::vector<double>& values, const CsvMeta& meta) {
    out << "# qimsim pattern v1\n";
    write_meta(out, meta);
    out << "x_m,value\n";
    for (int i = 0; i < axis.n; ++i)
        out << format_double(axis.at(i)) << "," << format_double(values[i]) << "\n";
}

void write_coincidence_csv(std::ostream& out, const CoincidenceMap& map,
                           const CsvMeta& meta) {
    out << "# qimsim coincidence v1\n";
    write_meta(out, meta);
    out << "x1_m,x2_m,value\n";
    for (int i1 = 0; i1 < map.axis1.n; ++i1)
        for (int i2 = 0; i2 < map.axis2.n; ++i2)
            out << format_double(map.axis1.at(i1)) << ","
                << format_double(map.axis2.at(i2)) << ","
                << format_double(map.at(i1, i2)) << "\n";
}

void write_metrics_csv(std::ostream& out, const CsvMeta& meta,
                       const CsvMeta& metrics) {
    out << "# qimsim metrics v1\n";
    write_meta(out, meta);
    out << "metric,value\n";
    for (const auto& [key, value] : metrics) out << key << "," << value << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << contents;
}

}  // namespace qimsim
