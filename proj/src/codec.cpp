#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "mfa/error.hpp"
#include "mfa/imaging.hpp"

namespace mfa {

namespace {

// Round-half-up of (c*a + 255*(255-a)) / 255, i.e. c over a white backdrop.
std::uint8_t over_white(std::uint8_t c, std::uint8_t a) {
  const unsigned n = unsigned{c} * a + 255u * (255u - a);
  return static_cast<std::uint8_t>((2u * n + 255u) / 510u);
}

GrayscaleImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::MalformedImage, "png: " + msg);
  }
  const bool linear = (image.format & PNG_FORMAT_FLAG_LINEAR) != 0;
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);

  if (linear && !color && !alpha) {
    // 16-bit grayscale keeps its full range.
    image.format = PNG_FORMAT_LINEAR_Y;
    GrayscaleImage out(w, h, 0, 65535);
    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
      std::string msg = image.message;
      png_image_free(&image);
      throw Error(ErrorCode::MalformedImage, "png: " + msg);
    }
    return out;
  }

  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::MalformedImage, "png: " + msg);
  }
  GrayscaleImage out(w, h);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const std::uint8_t* px = &rgba[4 * i];
    out.pixels[i] = luma601(over_white(px[0], px[3]), over_white(px[1], px[3]),
                            over_white(px[2], px[3]));
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

GrayscaleImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager jerr{};
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit;

  // Declared before setjmp: a longjmp back here must not skip constructors.
  std::vector<std::uint8_t> rgb;
  int w = 0, h = 0, comps = 0;
  bool unsupported = false;

  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorCode::MalformedImage, std::string("jpeg: ") + jerr.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    unsupported = true;
  } else {
    cinfo.out_color_space =
        cinfo.jpeg_color_space == JCS_GRAYSCALE ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    w = static_cast<int>(cinfo.output_width);
    h = static_cast<int>(cinfo.output_height);
    comps = cinfo.output_components;
    rgb.resize(static_cast<std::size_t>(w) * h * comps);
    while (cinfo.output_scanline < cinfo.output_height) {
      JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * comps;
      jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
  }
  jpeg_destroy_decompress(&cinfo);
  if (unsupported) {
    throw Error(ErrorCode::UnsupportedFormat, "jpeg: CMYK/YCCK not supported");
  }

  GrayscaleImage out(w, h);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    if (comps == 1) {
      out.pixels[i] = rgb[i];
    } else {
      out.pixels[i] = luma601(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
    }
  }
  return out;
}

}  // namespace

std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

ImageFormat detect_format(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(std::begin(png_sig), std::end(png_sig), bytes.begin())) {
    return ImageFormat::png;
  }
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) {
    return ImageFormat::jpeg;
  }
  throw Error(ErrorCode::UnsupportedFormat, "unrecognized image signature");
}

GrayscaleImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format) {
  if (bytes.empty()) throw Error(ErrorCode::MalformedImage, "empty image data");
  switch (format) {
    case ImageFormat::png: return decode_png(bytes);
    case ImageFormat::jpeg: return decode_jpeg(bytes);
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

GrayscaleImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), {}};
  if (bytes.empty()) throw Error(ErrorCode::MalformedImage, "empty file " + path.string());
  return decode_image(bytes, detect_format(bytes));
}

std::vector<std::uint8_t> encode_png(const GrayscaleImage& img) {
  img.validate();
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);

  std::vector<std::uint8_t> narrow;
  const void* buffer = nullptr;
  if (img.max_value == 255) {
    image.format = PNG_FORMAT_GRAY;
    narrow.assign(img.pixels.begin(), img.pixels.end());
    buffer = narrow.data();
  } else {
    image.format = PNG_FORMAT_LINEAR_Y;
    buffer = img.pixels.data();
  }

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, buffer, 0, nullptr)) {
    throw Error(ErrorCode::Io, std::string("png encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, buffer, 0, nullptr)) {
    throw Error(ErrorCode::Io, std::string("png encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

void save_png(const GrayscaleImage& img, const std::filesystem::path& path) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace mfa
