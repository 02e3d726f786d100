#pragma once

#include <filesystem>

#include "mfa/boxcount.hpp"
#include "mfa/spectrum.hpp"

namespace mfa {

/// Run parameters shared by the analysis operations and the command line.
/// Defaults: 30 px smallest box, four grid positions, the full image as the largest box, q from -10 to 10.
struct RunConfig {
  int min_box = 30;
  int num_scales = 10;
  int num_offsets = 4;
  double max_area_fraction = 1.0;
  double q_min = -10.0;
  double q_max = 10.0;
  double q_step = 0.25;
  MeasureMode measure_mode = MeasureMode::differential;
  int binary_threshold = kDefaultBinaryThreshold;
  double order_threshold = 1.85;
  std::filesystem::path output_dir = ".";
  unsigned workers = 0;  // scheduling only; never changes results

  /// Throws BadArgument on an inconsistent configuration.
  void validate() const;

  QGrid qgrid() const { return QGrid::range(q_min, q_max, q_step); }
  ScalePlan plan_for(int width, int height) const {
    return plan_scales(width, height, min_box, num_scales, num_offsets, max_area_fraction);
  }
};

/// plan_for + analyze_image with this configuration.
MultifractalSpectrum analyze(const GrayscaleImage& img, const RunConfig& config);

}  // namespace mfa
