#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace attractorlab {

/// Shortest decimal string that round-trips the double (at most 17
/// significant digits).
std::string format_double(double v);

/// Write content to path atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvColumn {
    std::string name;
    const std::vector<double>* data;
};

/// Column-oriented CSV with a header row.
void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);

}  // namespace attractorlab
