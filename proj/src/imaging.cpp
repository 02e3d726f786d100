#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mfa/error.hpp"
#include "mfa/imaging.hpp"

namespace mfa {

GrayscaleImage::GrayscaleImage(int w, int h, std::uint16_t fill, std::uint16_t max)
    : width(w), height(h), max_value(max) {
  if (w < 1 || h < 1) {
    throw Error(ErrorCode::BadArgument, "image dimensions must be positive");
  }
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

void GrayscaleImage::validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::BadArgument, "image dimensions must be positive");
  }
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::BadArgument, "pixel count does not match width x height");
  }
  if (max_value != 255 && max_value != 65535) {
    throw Error(ErrorCode::BadArgument, "max_value must be 255 or 65535");
  }
  if (max_value == 255 &&
      std::any_of(pixels.begin(), pixels.end(), [](std::uint16_t p) { return p > 255; })) {
    throw Error(ErrorCode::BadArgument, "8-bit image holds an intensity above 255");
  }
}

void MeasureField::validate() const {
  if (side < 1 || values.size() != static_cast<std::size_t>(side) * side) {
    throw Error(ErrorCode::InvalidField, "field must hold side*side values");
  }
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidField, "field values must be finite and non-negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidField, "field values must sum to 1");
  }
}

GrayscaleImage extract_fragment(const GrayscaleImage& img, const FragmentRect& rect) {
  if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 ||
      rect.x + rect.w > img.width || rect.y + rect.h > img.height) {
    throw Error(ErrorCode::OutOfBounds,
                "fragment (" + std::to_string(rect.x) + "," + std::to_string(rect.y) + "," +
                    std::to_string(rect.w) + "," + std::to_string(rect.h) +
                    ") exceeds image " + std::to_string(img.width) + "x" +
                    std::to_string(img.height));
  }
  GrayscaleImage out(rect.w, rect.h, 0, img.max_value);
  for (int y = 0; y < rect.h; ++y) {
    const auto src = img.pixels.begin() +
                     static_cast<std::ptrdiff_t>(rect.y + y) * img.width + rect.x;
    std::copy(src, src + rect.w, out.pixels.begin() + static_cast<std::ptrdiff_t>(y) * rect.w);
  }
  return out;
}

GrayscaleImage gen_sierpinski_carpet(int level) {
  if (level < 0) throw Error(ErrorCode::BadArgument, "carpet level must be non-negative");
  if (level > kMaxCarpetLevel) {
    throw Error(ErrorCode::LevelTooLarge,
                "carpet level " + std::to_string(level) + " exceeds " +
                    std::to_string(kMaxCarpetLevel));
  }
  int side = 1;
  for (int i = 0; i < level; ++i) side *= 3;

  GrayscaleImage img(side, side, 0);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      bool hole = false;
      for (int a = x, b = y; a > 0 || b > 0; a /= 3, b /= 3) {
        if (a % 3 == 1 && b % 3 == 1) {
          hole = true;
          break;
        }
      }
      img.at(x, y) = hole ? 0 : 255;
    }
  }
  return img;
}

MeasureField gen_binomial_cascade(int depth, const CascadeWeights& weights) {
  if (depth < 1 || depth > kMaxCascadeDepth) {
    throw Error(ErrorCode::BadArgument,
                "cascade depth must be in [1, " + std::to_string(kMaxCascadeDepth) + "]");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::BadWeights, "cascade weights must be non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadWeights, "cascade weights must sum to 1");
  }

  // Refine one level at a time; each child multiplies its parent's mass.
  MeasureField field{1, {1.0}};
  for (int d = 0; d < depth; ++d) {
    const int side = field.side * 2;
    std::vector<double> next(static_cast<std::size_t>(side) * side);
    for (int y = 0; y < side; ++y) {
      for (int x = 0; x < side; ++x) {
        const int quadrant = (y & 1) * 2 + (x & 1);
        next[static_cast<std::size_t>(y) * side + x] =
            field.at(x / 2, y / 2) * weights[quadrant];
      }
    }
    field = MeasureField{side, std::move(next)};
  }
  return field;
}

GrayscaleImage render_field(const MeasureField& field, int bit_depth) {
  field.validate();
  if (bit_depth != 8 && bit_depth != 16) {
    throw Error(ErrorCode::BadArgument, "bit depth must be 8 or 16");
  }
  const std::uint16_t top = bit_depth == 8 ? 255 : 65535;
  const double vmax = *std::max_element(field.values.begin(), field.values.end());
  GrayscaleImage img(field.side, field.side, 0, top);
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    img.pixels[i] = static_cast<std::uint16_t>(std::lround(field.values[i] / vmax * top));
  }
  return img;
}

GrayscaleImage gen_uniform_square(int side, std::uint16_t value) {
  if (side < 1) throw Error(ErrorCode::BadArgument, "square side must be positive");
  if (value > 255) throw Error(ErrorCode::BadArgument, "square intensity must fit 8 bits");
  return GrayscaleImage(side, side, value);
}

GrayscaleImage gen_noise(int width, int height, std::uint32_t seed) {
  GrayscaleImage img(width, height);
  std::mt19937 gen(seed);
  for (auto& p : img.pixels) p = static_cast<std::uint16_t>(gen() >> 24);
  return img;
}

}  // namespace mfa
