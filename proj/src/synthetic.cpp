#include "walshreg/synthetic.hpp"

#include "walshreg/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

namespace walshreg {

namespace {

struct Ellipse {
  double cx, cy;  // fractions of the image size
  double rx, ry;
  double angle_deg;
  double value;

  bool contains(double x, double y, double size) const {
    const double a = angle_deg * std::numbers::pi / 180.0;
    const double dx = x / size - cx;
    const double dy = y / size - cy;
    const double u = dx * std::cos(a) + dy * std::sin(a);
    const double v = -dx * std::sin(a) + dy * std::cos(a);
    return (u * u) / (rx * rx) + (v * v) / (ry * ry) <= 1.0;
  }
};

constexpr std::array<Perturbation, 21> kProtocol{{
    {4, -10, 9},   {-12, -7, 13}, {5, -7, 5},   {-14, -15, 2}, {-8, -7, 1},  {9, 7, -7},
    {7, -13, 11},  {18, 1, 19},   {-17, 0, -17}, {0, -9, 12},  {23, -6, 2},  {-15, 5, -10},
    {22, 20, 2},   {5, 15, 12},   {-21, 16, -5}, {-1, 19, 13}, {5, 10, -25}, {-3, 11, 25},
    {11, -9, 0},   {0, 0, 12},    {0, 0, 0},
}};

double parse_number(std::string_view field) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw InputError("not a number: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

GrayImage make_phantom(int size, std::uint64_t seed, int max_intensity) {
  if (size < 8) throw ParameterError("phantom size must be >= 8");
  if (max_intensity < 20 || max_intensity > 255) throw ParameterError("phantom max intensity must be in [20, 255]");

  std::vector<Ellipse> shapes{
      {0.50, 0.50, 0.44, 0.38, 8.0, 0.90},    // outer shell
      {0.50, 0.50, 0.40, 0.34, 8.0, 0.35},    // interior
      {0.38, 0.42, 0.10, 0.16, -20.0, 0.60},  // left lobe
      {0.64, 0.45, 0.13, 0.08, 35.0, 0.70},   // right lobe
      {0.52, 0.66, 0.18, 0.05, -5.0, 0.15},   // dark band
      {0.47, 0.33, 0.04, 0.04, 0.0, 0.95},    // bright spot
      {0.70, 0.63, 0.06, 0.03, 60.0, 0.55},
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    const double r = std::hypot(unit(rng) * 0.25, unit(rng) * 0.2);
    const double a = unit(rng) * 2.0 * std::numbers::pi;
    shapes.push_back({0.5 + r * std::cos(a), 0.5 + r * std::sin(a), 0.02 + 0.06 * unit(rng),
                      0.02 + 0.04 * unit(rng), unit(rng) * 180.0, 0.2 + 0.7 * unit(rng)});
  }
  struct Wave {
    double kx, ky, phase, amplitude;
  };
  std::vector<Wave> waves;
  for (int i = 0; i < 5; ++i) {
    const double wavelength = 6.0 + 14.0 * unit(rng);
    const double dir = unit(rng) * std::numbers::pi;
    const double k = 2.0 * std::numbers::pi / wavelength;
    waves.push_back({k * std::cos(dir), k * std::sin(dir), unit(rng) * 2.0 * std::numbers::pi,
                     0.02 + 0.03 * unit(rng)});
  }

  GrayImage img(size, size, 0);
  const double s = static_cast<double>(size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if (!shapes[0].contains(x, y, s)) continue;
      double v = shapes[0].value;
      for (std::size_t i = 1; i < shapes.size(); ++i)
        if (shapes[i].contains(x, y, s)) v = shapes[i].value;
      for (const Wave& w : waves) v += w.amplitude * std::sin(w.kx * x + w.ky * y + w.phase);
      v = std::clamp(v, 0.0, 1.0);
      img.at(x, y) = static_cast<std::uint8_t>(std::lround(v * max_intensity));
    }
  }
  return img;
}

std::span<const Perturbation> protocol_perturbations() { return kProtocol; }

std::vector<Perturbation> random_perturbations(int count, std::uint64_t seed, int max_shift,
                                               int max_angle) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> shift(-max_shift, max_shift);
  std::uniform_int_distribution<int> angle(-max_angle, max_angle);
  std::vector<Perturbation> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double x = shift(rng);
    const double y = shift(rng);
    out.push_back({x, y, static_cast<double>(angle(rng))});
  }
  return out;
}

std::vector<Perturbation> parse_perturbations(std::string_view text) {
  std::vector<Perturbation> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (std::isalpha(static_cast<unsigned char>(line[first]))) continue;
    std::array<double, 3> v{};
    std::string_view rest(line);
    try {
      for (int i = 0; i < 3; ++i) {
        const auto comma = rest.find(',');
        if ((i < 2) != (comma != std::string_view::npos)) throw InputError("expected three fields");
        v[i] = parse_number(rest.substr(0, comma));
        if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
      }
    } catch (const InputError& e) {
      throw InputError("perturbation line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back({v[0], v[1], v[2]});
  }
  return out;
}

std::vector<Perturbation> load_perturbations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open perturbation file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_perturbations(buffer.str());
}

RigidParams to_params(const Perturbation& p, double spacing) {
  return {static_cast<double>(mm_to_px(p.x_mm, spacing)),
          static_cast<double>(mm_to_px(p.y_mm, spacing)), p.angle_deg};
}

AlignmentResidual alignment_residual(const RigidParams& applied, const RigidParams& recovered) {
  const auto [c, s] = cos_sin_degrees(applied.theta);
  const double rx = recovered.t * c - recovered.s * s + applied.t;
  const double ry = recovered.t * s + recovered.s * c + applied.s;
  return {std::hypot(rx, ry), std::abs(normalize_angle(applied.theta + recovered.theta))};
}

}  // namespace walshreg
