#pragma once

#include "walshreg/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace walshreg {

/// Head-like test image: nested ellipses, a few seeded blobs and a smooth
/// seeded texture on a black background. Intensities stay within
/// [0, max_intensity] so scaled copies do not clip.
GrayImage make_phantom(int size, std::uint64_t seed = 1, int max_intensity = 85);

/// A perturbation applied to a reference image: (X mm, Y mm, angle degrees).
struct Perturbation {
  double x_mm = 0.0;
  double y_mm = 0.0;
  double angle_deg = 0.0;
};

/// The 21 (X, Y, angle) triples of the clinical evaluation protocol.
std::span<const Perturbation> protocol_perturbations();

/// `count` integer perturbations with |x|, |y| <= max_shift and |angle| <= max_angle.
std::vector<Perturbation> random_perturbations(int count, std::uint64_t seed, int max_shift,
                                               int max_angle);

/// Parses "x_mm,y_mm,angle" lines; blank lines, '#' comments and a header
/// line starting with a letter are skipped.
std::vector<Perturbation> parse_perturbations(std::string_view text);
std::vector<Perturbation> load_perturbations(const std::filesystem::path& path);

RigidParams to_params(const Perturbation& p, double spacing);

/// Misalignment left after registering warp(reference, applied) back with
/// `recovered`: translation error (pixels) at the rotation center and
/// rotation error (degrees).
struct AlignmentResidual {
  double translation_px = 0.0;
  double rotation_deg = 0.0;
};

AlignmentResidual alignment_residual(const RigidParams& applied, const RigidParams& recovered);

}  // namespace walshreg
