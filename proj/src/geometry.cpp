#include "walshreg/geometry.hpp"

#include "walshreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace walshreg {

GrayImage::GrayImage(int w, int h, std::uint8_t fill, double sp) : width(w), height(h), spacing(sp) {
  if (w < 0 || h < 0) throw InputError("image dimensions must be non-negative");
  if (!(sp > 0.0)) throw ParameterError("pixel spacing must be positive");
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

OverlapMask::OverlapMask(int w, int h, bool value)
    : width(w), height(h), inside(static_cast<std::size_t>(w) * h, value ? 1 : 0) {}

std::size_t OverlapMask::count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

double normalize_angle(double degrees) {
  double a = std::fmod(degrees, 360.0);
  if (a <= -180.0) a += 360.0;
  if (a > 180.0) a -= 360.0;
  return a;
}

std::pair<double, double> cos_sin_degrees(double degrees) {
  const double a = normalize_angle(degrees);
  if (a == 0.0) return {1.0, 0.0};
  if (a == 90.0) return {0.0, 1.0};
  if (a == 180.0) return {-1.0, 0.0};
  if (a == -90.0) return {0.0, -1.0};
  const double rad = a * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

SourcePoint source_point(double x, double y, const RigidParams& p, int width, int height) {
  const auto [c, s] = cos_sin_degrees(p.theta);
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  const double dx = x - cx;
  const double dy = y - cy;
  return {cx + dx * c - dy * s - p.t, cy + dx * s + dy * c - p.s};
}

GridIndex rotated_nearest(int x, int y, double cos_theta, double sin_theta, int width,
                          int height) {
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  const double dx = x - cx;
  const double dy = y - cy;
  const double sx = cx + dx * cos_theta - dy * sin_theta;
  const double sy = cy + dx * sin_theta + dy * cos_theta;
  return {static_cast<int>(std::floor(sx + 0.5)), static_cast<int>(std::floor(sy + 0.5))};
}

WarpResult warp(const GrayImage& img, const RigidParams& p, Interpolation interp) {
  WarpResult out{GrayImage(img.width, img.height, 0, img.spacing),
                 OverlapMask(img.width, img.height, false)};
  const int w = img.width;
  const int h = img.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const SourcePoint src = source_point(x, y, p, w, h);
      const std::size_t o = static_cast<std::size_t>(y) * w + x;
      if (interp == Interpolation::nearest) {
        const int xi = static_cast<int>(std::floor(src.x + 0.5));
        const int yi = static_cast<int>(std::floor(src.y + 0.5));
        if (xi < 0 || yi < 0 || xi >= w || yi >= h) continue;
        out.image.pixels[o] = img.at(xi, yi);
        out.mask.inside[o] = 1;
        continue;
      }
      if (src.x < 0.0 || src.y < 0.0 || src.x > w - 1 || src.y > h - 1) continue;
      const int x0 = static_cast<int>(std::floor(src.x));
      const int y0 = static_cast<int>(std::floor(src.y));
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = src.x - x0;
      const double fy = src.y - y0;
      const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
      const double bottom = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
      const double v = (1.0 - fy) * top + fy * bottom;
      out.image.pixels[o] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      out.mask.inside[o] = 1;
    }
  }
  return out;
}

int mm_to_px(double mm, double spacing) {
  if (!(spacing > 0.0)) throw ParameterError("mm_to_px: spacing must be positive");
  return static_cast<int>(std::lround(mm / spacing));
}

GrayImage difference_image(const GrayImage& a, const GrayImage& b, const OverlapMask& mask) {
  if (a.width != b.width || a.height != b.height || mask.width != a.width ||
      mask.height != a.height) {
    throw InputError("difference_image: shapes differ (" + std::to_string(a.width) + "x" +
                     std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                     std::to_string(b.height) + ")");
  }
  GrayImage out(a.width, a.height, 0, a.spacing);
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    if (!mask.inside[i]) continue;
    out.pixels[i] = static_cast<std::uint8_t>(std::abs(int{a.pixels[i]} - int{b.pixels[i]}));
  }
  return out;
}

GrayImage downsample_half(const GrayImage& img) {
  const int w = img.width / 2;
  const int h = img.height / 2;
  if (w < 1 || h < 1) throw InputError("downsample_half: image too small");
  GrayImage out(w, h, 0, img.spacing * 2.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int sum = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                      img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1);
      out.at(x, y) = static_cast<std::uint8_t>((sum + 2) / 4);
    }
  }
  return out;
}

}  // namespace walshreg
