#include "fluxsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fluxsim/errors.hpp"

namespace fluxsim {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash_hex(const std::string& config_text) {
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << fnv1a64(config_text);
    return os.str();
}

std::string output_header(const std::string& config_text, const std::string& command) {
    std::ostringstream os;
    os << "# tool: " << kToolVersion << "\n";
    os << "# command: " << command << "\n";
    os << "# config_hash: " << config_hash_hex(config_text) << "\n";
    return os.str();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

CsvWriter::CsvWriter(std::vector<std::string> cols) : columns(std::move(cols)) {}

void CsvWriter::add_row(const std::vector<double>& values) {
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_double(v));
    rows.push_back(std::move(row));
}

void CsvWriter::add_row_text(const std::vector<std::string>& values) {
    rows.push_back(values);
}

void CsvWriter::write(const std::string& path, const std::string& header) const {
    std::ostringstream os;
    os << header;
    for (size_t i = 0; i < columns.size(); ++i)
        os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
    write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_ppm(const std::string& path, const std::vector<std::vector<double>>& values,
               double vmin, double vmax, const std::string& comment) {
    if (values.empty() || values[0].empty()) throw DomainError("empty image");
    const int h = static_cast<int>(values.size());
    const int w = static_cast<int>(values[0].size());
    std::ostringstream os;
    os << "P6\n";
    std::istringstream cm(comment);
    for (std::string line; std::getline(cm, line);)
        os << (line.empty() || line[0] == '#' ? "" : "# ") << line << "\n";
    os << w << " " << h << "\n255\n";
    const double span = vmax > vmin ? vmax - vmin : 1.0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double x = (values[r][c] - vmin) / span;
            x = std::clamp(x, 0.0, 1.0);
            // blue -> white -> red diverging map
            unsigned char rr, gg, bb;
            if (x < 0.5) {
                const double t = 2.0 * x;
                rr = static_cast<unsigned char>(255 * t);
                gg = static_cast<unsigned char>(255 * t);
                bb = 255;
            } else {
                const double t = 2.0 * (x - 0.5);
                rr = 255;
                gg = static_cast<unsigned char>(255 * (1.0 - t));
                bb = static_cast<unsigned char>(255 * (1.0 - t));
            }
            os.put(static_cast<char>(rr));
            os.put(static_cast<char>(gg));
            os.put(static_cast<char>(bb));
        }
    }
    write_text_file(path, os.str());
}

}  // namespace fluxsim
