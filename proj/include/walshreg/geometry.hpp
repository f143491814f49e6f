#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace walshreg {

/// 8-bit gray image, row-major, with isotropic pixel spacing in mm.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  double spacing = 1.0;

  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0, double spacing = 1.0);

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return pixels.size(); }
};

/// Per-pixel flag marking where two images both carry data.
struct OverlapMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> inside;

  OverlapMask() = default;
  OverlapMask(int width, int height, bool value);

  bool at(int x, int y) const { return inside[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

/// Rigid motion (t, s, theta). Translations are in pixels, theta in degrees.
/// Rotation is about the image center; with y pointing down, a positive theta
/// turns image content counterclockwise on screen.
struct RigidParams {
  double t = 0.0;
  double s = 0.0;
  double theta = 0.0;

  bool operator==(const RigidParams&) const = default;
};

/// Maps an angle in degrees into (-180, 180].
double normalize_angle(double degrees);

/// cos/sin of an angle in degrees, exact at multiples of 90.
std::pair<double, double> cos_sin_degrees(double degrees);

/// Continuous source coordinate sampled for output pixel (x, y):
///   x' = cx + (x-cx) cos - (y-cy) sin - t
///   y' = cy + (x-cx) sin + (y-cy) cos - s
/// with (cx, cy) the center of a width x height grid.
struct SourcePoint {
  double x;
  double y;
};
SourcePoint source_point(double x, double y, const RigidParams& p, int width, int height);

/// Nearest grid point of the rotated, untranslated source coordinate. Code
/// images are sampled at rotated_nearest(x, y) - (round(t), round(s)), so the
/// translation always moves whole pixels.
struct GridIndex {
  int x;
  int y;
};
GridIndex rotated_nearest(int x, int y, double cos_theta, double sin_theta, int width,
                          int height);

enum class Interpolation { nearest, bilinear };

struct WarpResult {
  GrayImage image;
  OverlapMask mask;
};

/// Resamples `img` so that output(x, y) = img(source_point(x, y)). Pixels whose
/// source falls outside the input are 0 and masked out.
WarpResult warp(const GrayImage& img, const RigidParams& p,
                Interpolation interp = Interpolation::bilinear);

/// Millimetres to whole pixels (rounded to nearest).
int mm_to_px(double mm, double spacing);

/// |a - b| inside the mask, 0 outside.
GrayImage difference_image(const GrayImage& a, const GrayImage& b, const OverlapMask& mask);

/// 2x2 box-filter downsampling; odd trailing rows/columns are dropped.
GrayImage downsample_half(const GrayImage& img);

}  // namespace walshreg
