#ifndef FLUXSIM_IO_HPP
#define FLUXSIM_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fluxsim {

inline constexpr const char* kToolVersion = "fluxsim 0.1.0";

// FNV-1a over the raw config bytes; identical configs hash identically, so
// reruns produce byte-identical output headers.
std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash_hex(const std::string& config_text);

// "# key: value" header block carried by every output file.
std::string output_header(const std::string& config_text, const std::string& command);

struct CsvWriter {
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    void add_row_text(const std::vector<std::string>& values);
    void write(const std::string& path, const std::string& header) const;

    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Minimal diverging-colormap image (PPM) for the 2D Rabi maps; the comment
// lines carry the same header block as the data files.
void write_ppm(const std::string& path, const std::vector<std::vector<double>>& values,
               double vmin, double vmax, const std::string& comment = {});

std::string format_double(double v);

}  // namespace fluxsim

#endif
