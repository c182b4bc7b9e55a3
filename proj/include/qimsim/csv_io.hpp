#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qimsim/detection.hpp"

namespace qimsim {

/// Key/value lines echoed as '#' comments after the version header, so every
/// artifact records the configuration that produced it.
using CsvMeta = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal form that round-trips the double exactly; identical
/// invocations therefore produce byte-identical files.
std::string format_double(double v);

void write_pattern_csv(std::ostream& out, const Pattern& pattern,
                       const CsvMeta& meta);

/// Pattern plus a per-bin column of values (e.g. the Monte-Carlo standard
/// error band), written as a second pattern file.
void write_band_csv(std::ostream& out, const Axis& axis,
                    const std::vector<double>& values, const CsvMeta& meta);

void write_coincidence_csv(std::ostream& out, const CoincidenceMap& map,
                           const CsvMeta& meta);

void write_metrics_csv(std::ostream& out, const CsvMeta& meta,
                       const CsvMeta& metrics);

void write_file(const std::string& path, const std::string& contents);

}  // namespace qimsim
