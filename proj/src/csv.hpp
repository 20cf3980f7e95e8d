#pragma once

// Minimal delimited-text reader shared by the table loaders. Lines starting
// with '#' and blank lines are skipped; the first remaining line is the header.

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "reiqc/error.hpp"

namespace reiqc::detail {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, char delimiter = ',');

double parse_double(std::string_view field, std::string_view context);
long long parse_int(std::string_view field, std::string_view context);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace reiqc::detail
