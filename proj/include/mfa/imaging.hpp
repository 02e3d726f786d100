#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mfa {

/// Row-major intensity raster. Decoded images use max_value 255; rendered
/// 16-bit fields use 65535 and keep their widened intensities.
struct GrayscaleImage {
  int width = 0;
  int height = 0;
  std::uint16_t max_value = 255;
  std::vector<std::uint16_t> pixels;

  GrayscaleImage() = default;
  GrayscaleImage(int w, int h, std::uint16_t fill = 0, std::uint16_t max = 255);

  std::uint16_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint16_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  /// Throws InvalidField/BadArgument when the raster breaks its invariants.
  void validate() const;

  bool operator==(const GrayscaleImage&) const = default;
};

/// Exact, normalized measure on a square grid of cells. Used by the oracle
/// path so that cascade measures never pass through quantization.
struct MeasureField {
  int side = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * side + x];
  }

  void validate() const;
};

struct FragmentRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const FragmentRect&) const = default;
};

enum class ImageFormat { png, jpeg };

/// Quadrant weights in NW, NE, SW, SE order.
using CascadeWeights = std::array<double, 4>;

inline constexpr int kMaxCarpetLevel = 7;
inline constexpr int kMaxCascadeDepth = 10;

// Codec. Color is reduced with Rec. 601 luma, round half up; alpha is
// composited over white first.
GrayscaleImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format);
ImageFormat detect_format(std::span<const std::uint8_t> bytes);
GrayscaleImage load_image(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const GrayscaleImage& img);
void save_png(const GrayscaleImage& img, const std::filesystem::path& path);

std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b);

GrayscaleImage extract_fragment(const GrayscaleImage& img, const FragmentRect& rect);

// Synthetic fixtures.
GrayscaleImage gen_sierpinski_carpet(int level);
MeasureField gen_binomial_cascade(int depth, const CascadeWeights& weights);
GrayscaleImage render_field(const MeasureField& field, int bit_depth);
GrayscaleImage gen_uniform_square(int side, std::uint16_t value = 255);
GrayscaleImage gen_noise(int width, int height, std::uint32_t seed);

}  // namespace mfa
