#pragma once

#include <compare>
#include <cstddef>
#include <string_view>
#include <vector>

#include "mfa/imaging.hpp"

namespace mfa {

enum class MeasureMode { differential, binary, mass };

std::string_view to_string(MeasureMode mode);
MeasureMode parse_measure_mode(std::string_view name);

/// Grid origin shift in pixels.
struct Offset {
  int dx = 0;
  int dy = 0;

  auto operator<=>(const Offset&) const = default;
};

/// Box sizes and grid origins scanned for one image.
struct ScalePlan {
  std::vector<int> sizes;  // strictly increasing
  int base_size = 0;       // reference scale, the largest size
  std::vector<Offset> offsets;
  double max_area_fraction = 1.0;

  int smallest() const { return sizes.front(); }
};

/// Normalized box probabilities at one (epsilon, offset).
///
/// `epsilon` is the nominal box side. Each axis is tiled by ceil(extent/epsilon)
/// boxes of near-equal width, so the side actually realized is
/// `effective_epsilon` (geometric mean over both axes); the regressions use it.
struct MeasureDistribution {
  int epsilon = 0;
  double effective_epsilon = 0.0;
  Offset offset;
  std::vector<double> probabilities;  // occupied boxes only, all > 0

  std::size_t box_count() const { return probabilities.size(); }
};

inline constexpr int kDefaultBinaryThreshold = 128;

ScalePlan plan_scales(int width, int height, int min_box = 30, int num_scales = 10,
                      int num_offsets = 4, double max_area_fraction = 1.0);

/// Box boundaries along one axis: `extent` pixels tiled by ceil(extent/epsilon)
/// boxes, interior edges shifted left by `shift`. Returns n+1 edges from 0 to
/// extent, strictly increasing.
std::vector<int> tile_edges(int extent, int epsilon, int shift);

MeasureDistribution box_measures(const GrayscaleImage& img, int epsilon, Offset offset,
                                 MeasureMode mode,
                                 int binary_threshold = kDefaultBinaryThreshold);

MeasureDistribution field_measures(const MeasureField& field, int epsilon_cells);

}  // namespace mfa
