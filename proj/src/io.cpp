#include "walshreg/io.hpp"

#include "walshreg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace walshreg {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  // Next whitespace-separated token, skipping '#' comments.
  std::string_view token() {
    for (;;) {
      while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    return bytes_.substr(start, pos_ - start);
  }

  long number(const char* what) {
    const std::string_view t = token();
    if (t.empty()) throw IoError(std::string("malformed PGM header: missing ") + what);
    long value = 0;
    for (const char c : t) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw IoError(std::string("malformed PGM header: bad ") + what + " '" + std::string(t) + "'");
      }
      value = value * 10 + (c - '0');
      if (value > std::numeric_limits<int>::max()) {
        throw IoError(std::string("malformed PGM header: ") + what + " too large");
      }
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw IoError("malformed PGM header: no separator before raster");
    }
    return pos_ + 1;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
  HeaderReader reader(bytes);
  const std::string_view magic = reader.token();
  if (magic == "P6" || magic == "P3") throw IoError("colour PNM input is not supported, convert to grayscale");
  if (magic == "P2") throw IoError("ASCII PGM (P2) is not supported, use binary P5");
  if (magic != "P5") throw IoError("not a binary PGM file (expected P5 magic)");
  const long width = reader.number("width");
  const long height = reader.number("height");
  const long maxval = reader.number("maxval");
  if (width <= 0 || height <= 0) throw IoError("malformed PGM header: empty image");
  if (maxval <= 0) throw IoError("malformed PGM header: maxval must be positive");
  if (maxval > 255) {
    throw IoError("unsupported depth: maxval " + std::to_string(maxval) + " needs 16-bit samples, only 8-bit is supported");
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < offset + count) {
    throw IoError("truncated PGM raster: expected " + std::to_string(count) + " bytes, got " +
                  std::to_string(bytes.size() > offset ? bytes.size() - offset : 0));
  }
  GrayImage img(static_cast<int>(width), static_cast<int>(height));
  for (std::size_t i = 0; i < count; ++i) {
    const auto v = static_cast<unsigned char>(bytes[offset + i]);
    if (v > maxval) throw IoError("PGM sample exceeds maxval");
    img.pixels[i] = v;
  }
  return img;
}

GrayImage load_image(const std::filesystem::path& path) {
  const std::string bytes = read_text(path);
  try {
    return parse_pgm(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string format_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
  write_text(path, format_pgm(img));
}

std::string format_code_visualization(const StructureCodeImage& codes) {
  std::uint64_t lo = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t hi = 0;
  for (std::size_t i = 0; i < codes.codes.size(); ++i) {
    if (!codes.valid[i]) continue;
    lo = std::min(lo, codes.codes[i]);
    hi = std::max(hi, codes.codes[i]);
  }
  std::string out = "P5\n" + std::to_string(codes.width) + " " + std::to_string(codes.height) + "\n65535\n";
  out.reserve(out.size() + codes.codes.size() * 2);
  const double span = hi > lo ? static_cast<double>(hi - lo) : 0.0;
  for (std::size_t i = 0; i < codes.codes.size(); ++i) {
    unsigned v = 0;
    if (codes.valid[i] && span > 0.0) {
      v = static_cast<unsigned>(static_cast<double>(codes.codes[i] - lo) / span * 65535.0 + 0.5);
    }
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

void save_code_visualization(const StructureCodeImage& codes, const std::filesystem::path& path) {
  write_text(path, format_code_visualization(codes));
}

std::string format_code_dump(const StructureCodeImage& codes) {
  std::string out = std::to_string(codes.width) + " " + std::to_string(codes.height) + "\n";
  for (int y = 0; y < codes.height; ++y) {
    for (int x = 0; x < codes.width; ++x) {
      if (x > 0) out.push_back(' ');
      out += codes.is_valid(x, y) ? std::to_string(codes.code(x, y)) : std::string("-1");
    }
    out.push_back('\n');
  }
  return out;
}

void save_code_dump(const StructureCodeImage& codes, const std::filesystem::path& path) {
  write_text(path, format_code_dump(codes));
}

std::string CsvTable::str() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) s.push_back(',');
      s += cells[i];
    }
    s.push_back('\n');
    return s;
  };
  std::string out = line(header);
  for (const auto& row : rows) out += line(row);
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace walshreg
