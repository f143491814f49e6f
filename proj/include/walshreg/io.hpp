#pragma once

#include "walshreg/geometry.hpp"
#include "walshreg/structure_codes.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace walshreg {

/// Reads an 8-bit binary PGM (P5, maxval <= 255). Other PNM flavours, deeper
/// samples and truncated payloads raise IoError.
GrayImage load_image(const std::filesystem::path& path);
GrayImage parse_pgm(std::string_view bytes);

/// Writes `img` as P5 with maxval 255.
void save_image(const GrayImage& img, const std::filesystem::path& path);
std::string format_pgm(const GrayImage& img);

/// 16-bit P5 view of the codes, min-max scaled over the valid pixels to
/// [0, 65535]. Invalid pixels are 0; a constant code field maps to 0.
std::string format_code_visualization(const StructureCodeImage& codes);
void save_code_visualization(const StructureCodeImage& codes, const std::filesystem::path& path);

/// "W H" on the first line, then one line per row of base-10 codes. Pixels
/// without a code (the border) are written as -1.
std::string format_code_dump(const StructureCodeImage& codes);
void save_code_dump(const StructureCodeImage& codes, const std::filesystem::path& path);

/// Minimal CSV table with a fixed header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace walshreg
