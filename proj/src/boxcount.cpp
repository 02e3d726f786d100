#include "mfa/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "mfa/error.hpp"

namespace mfa {

std::string_view to_string(MeasureMode mode) {
  switch (mode) {
    case MeasureMode::differential: return "differential";
    case MeasureMode::binary: return "binary";
    case MeasureMode::mass: return "mass";
  }
  return "unknown";
}

MeasureMode parse_measure_mode(std::string_view name) {
  if (name == "differential") return MeasureMode::differential;
  if (name == "binary") return MeasureMode::binary;
  if (name == "mass") return MeasureMode::mass;
  throw Error(ErrorCode::BadArgument, "unknown measure mode '" + std::string(name) + "'");
}

namespace {

int tiles(int extent, int epsilon) { return (extent + epsilon - 1) / epsilon; }

}  // namespace

ScalePlan plan_scales(int width, int height, int min_box, int num_scales, int num_offsets,
                      double max_area_fraction) {
  if (min_box < 2) throw Error(ErrorCode::BadArgument, "min_box must be at least 2");
  if (num_scales < 5) throw Error(ErrorCode::BadArgument, "num_scales must be at least 5");
  if (num_offsets < 1 || num_offsets > 4) {
    throw Error(ErrorCode::BadArgument, "num_offsets must be in [1, 4]");
  }
  if (!(max_area_fraction > 0.0 && max_area_fraction <= 1.0)) {
    throw Error(ErrorCode::BadArgument, "max_area_fraction must be in (0, 1]");
  }
  const int shortest = std::min(width, height);
  const int largest = static_cast<int>(std::floor(shortest * max_area_fraction));
  if (width < 1 || height < 1 || largest < 2 * min_box) {
    throw Error(ErrorCode::ImageTooSmall,
                "image too small: " + std::to_string(width) + "x" + std::to_string(height) +
                    " cannot hold boxes from " + std::to_string(min_box) + " px");
  }

  ScalePlan plan;
  plan.max_area_fraction = max_area_fraction;
  const double ratio = static_cast<double>(largest) / min_box;
  std::pair<int, int> last_tiling{-1, -1};
  for (int i = 0; i < num_scales; ++i) {
    int size = i == num_scales - 1
                   ? largest
                   : static_cast<int>(std::lround(min_box * std::pow(ratio, double(i) / (num_scales - 1))));
    size = std::clamp(size, min_box, largest);
    if (!plan.sizes.empty() && size <= plan.sizes.back()) continue;
    // Sizes realizing the same box grid add nothing to the regression.
    const std::pair<int, int> tiling{tiles(width, size), tiles(height, size)};
    if (tiling == last_tiling) continue;
    last_tiling = tiling;
    plan.sizes.push_back(size);
  }
  if (plan.sizes.size() < 5) {
    throw Error(ErrorCode::ImageTooSmall,
                "image too small: only " + std::to_string(plan.sizes.size()) +
                    " distinct box scales fit (need 5)");
  }
  plan.base_size = plan.sizes.back();

  const int half = plan.sizes.front() / 2;
  const Offset all[4] = {{0, 0}, {half, 0}, {0, half}, {half, half}};
  plan.offsets.assign(all, all + num_offsets);
  return plan;
}

std::vector<int> tile_edges(int extent, int epsilon, int shift) {
  const int n = tiles(extent, epsilon);
  std::vector<int> edges(static_cast<std::size_t>(n) + 1);
  edges[0] = 0;
  edges[n] = extent;
  for (int k = 1; k < n; ++k) {
    // round(k * extent / n), half up, in integers
    const long long even = (2LL * k * extent + n) / (2LL * n);
    const int lo = edges[k - 1] + 1;
    const int hi = extent - (n - k);
    edges[k] = std::clamp(static_cast<int>(even) - shift, lo, hi);
  }
  return edges;
}

namespace {

std::vector<int> box_index(const std::vector<int>& edges, int extent) {
  std::vector<int> index(static_cast<std::size_t>(extent));
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    std::fill(index.begin() + edges[b], index.begin() + edges[b + 1], static_cast<int>(b));
  }
  return index;
}

std::vector<double> normalize(const std::vector<double>& raw) {
  double total = 0.0;
  for (double v : raw) total += v;
  std::vector<double> p;
  p.reserve(raw.size());
  for (double v : raw) {
    if (v > 0.0) p.push_back(v / total);
  }
  return p;
}

}  // namespace

MeasureDistribution box_measures(const GrayscaleImage& img, int epsilon, Offset offset,
                                 MeasureMode mode, int binary_threshold) {
  if (epsilon < 1 || epsilon > std::min(img.width, img.height)) {
    throw Error(ErrorCode::BadEpsilon, "box size " + std::to_string(epsilon) +
                                           " outside [1, " +
                                           std::to_string(std::min(img.width, img.height)) + "]");
  }
  if (std::abs(offset.dx) >= epsilon || std::abs(offset.dy) >= epsilon) {
    throw Error(ErrorCode::BadOffset, "grid offset must be smaller than the box size");
  }

  const auto xedges = tile_edges(img.width, epsilon, offset.dx);
  const auto yedges = tile_edges(img.height, epsilon, offset.dy);
  const int nx = static_cast<int>(xedges.size()) - 1;
  const int ny = static_cast<int>(yedges.size()) - 1;
  const auto col = box_index(xedges, img.width);
  const auto row = box_index(yedges, img.height);
  const std::size_t boxes = static_cast<std::size_t>(nx) * ny;

  std::vector<double> raw(boxes, 0.0);
  switch (mode) {
    case MeasureMode::differential: {
      std::vector<std::uint16_t> lo(boxes, std::numeric_limits<std::uint16_t>::max());
      std::vector<std::uint16_t> hi(boxes, 0);
      for (int y = 0; y < img.height; ++y) {
        const std::size_t base = static_cast<std::size_t>(row[y]) * nx;
        for (int x = 0; x < img.width; ++x) {
          const std::size_t b = base + col[x];
          const std::uint16_t v = img.at(x, y);
          lo[b] = std::min(lo[b], v);
          hi[b] = std::max(hi[b], v);
        }
      }
      for (std::size_t b = 0; b < boxes; ++b) raw[b] = double(hi[b]) - double(lo[b]) + 1.0;
      break;
    }
    case MeasureMode::binary: {
      // Threshold is on the 8-bit scale; 16-bit rasters scale it up.
      const long long scaled = static_cast<long long>(binary_threshold) * img.max_value / 255;
      for (int y = 0; y < img.height; ++y) {
        const std::size_t base = static_cast<std::size_t>(row[y]) * nx;
        for (int x = 0; x < img.width; ++x) {
          if (img.at(x, y) >= scaled) raw[base + col[x]] = 1.0;
        }
      }
      break;
    }
    case MeasureMode::mass: {
      std::vector<std::uint64_t> sum(boxes, 0);
      for (int y = 0; y < img.height; ++y) {
        const std::size_t base = static_cast<std::size_t>(row[y]) * nx;
        for (int x = 0; x < img.width; ++x) sum[base + col[x]] += img.at(x, y);
      }
      for (std::size_t b = 0; b < boxes; ++b) raw[b] = static_cast<double>(sum[b]);
      break;
    }
  }

  MeasureDistribution dist;
  dist.epsilon = epsilon;
  dist.effective_epsilon =
      std::sqrt(static_cast<double>(img.width) / nx * (static_cast<double>(img.height) / ny));
  dist.offset = offset;
  dist.probabilities = normalize(raw);
  if (dist.probabilities.empty()) {
    throw Error(ErrorCode::EmptyMeasure, "image carries no measure in " +
                                             std::string(to_string(mode)) + " mode");
  }
  return dist;
}

MeasureDistribution field_measures(const MeasureField& field, int epsilon_cells) {
  if (epsilon_cells < 1 || field.side % epsilon_cells != 0) {
    throw Error(ErrorCode::NonDividingEpsilon,
                "block size " + std::to_string(epsilon_cells) + " does not divide field side " +
                    std::to_string(field.side));
  }
  const int n = field.side / epsilon_cells;
  std::vector<double> blocks(static_cast<std::size_t>(n) * n, 0.0);
  for (int y = 0; y < field.side; ++y) {
    for (int x = 0; x < field.side; ++x) {
      blocks[static_cast<std::size_t>(y / epsilon_cells) * n + x / epsilon_cells] += field.at(x, y);
    }
  }
  MeasureDistribution dist;
  dist.epsilon = epsilon_cells;
  dist.effective_epsilon = epsilon_cells;
  // The field is already normalized; block sums are kept as-is.
  for (double b : blocks) {
    if (b > 0.0) dist.probabilities.push_back(b);
  }
  if (dist.probabilities.empty()) throw Error(ErrorCode::EmptyMeasure, "field carries no measure");
  return dist;
}

}  // namespace mfa
