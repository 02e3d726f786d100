#include "mfa/config.hpp"

#include <cmath>

#include "mfa/error.hpp"

namespace mfa {

void RunConfig::validate() const {
  if (min_box < 2) throw Error(ErrorCode::BadArgument, "min-box must be at least 2");
  if (num_scales < 5) throw Error(ErrorCode::BadArgument, "scales must be at least 5");
  if (num_offsets < 1 || num_offsets > 4) {
    throw Error(ErrorCode::BadArgument, "offsets must be in [1, 4]");
  }
  if (!(max_area_fraction > 0.0 && max_area_fraction <= 1.0)) {
    throw Error(ErrorCode::BadArgument, "max area fraction must be in (0, 1]");
  }
  if (binary_threshold < 0 || binary_threshold > 255) {
    throw Error(ErrorCode::BadArgument, "binary threshold must be in [0, 255]");
  }
  if (!std::isfinite(order_threshold)) {
    throw Error(ErrorCode::BadArgument, "order threshold must be finite");
  }
  (void)qgrid();
}

MultifractalSpectrum analyze(const GrayscaleImage& img, const RunConfig& config) {
  config.validate();
  return analyze_image(img, config.plan_for(img.width, img.height), config.measure_mode,
                       config.qgrid(), config.binary_threshold, config.workers);
}

}  // namespace mfa
