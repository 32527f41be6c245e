#include "attractorlab/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace attractorlab {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns) {
    if (columns.empty()) throw std::invalid_argument("csv needs at least one column");
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c].name;
    }
    out += '\n';
    const std::size_t rows = columns.front().data->size();
    for (const auto& c : columns)
        if (c.data->size() != rows)
            throw std::invalid_argument("csv columns must have equal length");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += format_double((*columns[c].data)[r]);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace attractorlab
