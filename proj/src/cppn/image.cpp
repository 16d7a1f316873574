#include "breeder/cppn/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "breeder/error.hpp"

namespace breeder {

double pixel_coordinate(int i, int extent) {
  if (extent <= 1) return 0.0;
  return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(extent - 1);
}

std::uint8_t to_byte(double unit) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(unit, 0.0, 1.0)));
}

void hsb_to_rgb(double hue_deg, double saturation, double brightness, std::uint8_t rgb[3]) {
  const double h = std::fmod(std::fmod(hue_deg, 360.0) + 360.0, 360.0) / 60.0;
  const double s = std::clamp(saturation, 0.0, 1.0);
  const double v = std::clamp(brightness, 0.0, 1.0);
  const double c = v * s;
  const double x = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  rgb[0] = to_byte(r + m);
  rgb[1] = to_byte(g + m);
  rgb[2] = to_byte(b + m);
}

namespace {

void require_extent(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::TooSmall, "image extent must be at least 1x1");
  }
}

}  // namespace

ImageBuffer render(const CompiledCppn& cppn, int width, int height) {
  require_extent(width, height);
  const bool color = cppn.palette() == Palette::Color;
  ImageBuffer image(width, height, color ? 3 : 1);
  for (int j = 0; j < height; ++j) {
    const double y = pixel_coordinate(j, height);
    for (int i = 0; i < width; ++i) {
      const OutputValues out = cppn.evaluate(pixel_coordinate(i, width), y);
      const double brightness = std::abs(out.intensity);
      if (!color) {
        image.at(i, j) = to_byte(brightness);
        continue;
      }
      const double hue = 360.0 * (out.hue.value_or(0.0) + 1.0) / 2.0;
      std::uint8_t rgb[3];
      hsb_to_rgb(hue, std::abs(out.saturation.value_or(0.0)), brightness, rgb);
      for (int c = 0; c < 3; ++c) image.at(i, j, c) = rgb[c];
    }
  }
  return image;
}

ImageBuffer render(const Genome& genome, int width, int height, const EvalOptions& options) {
  return render(CompiledCppn(genome, options), width, height);
}

ImageBuffer render_node(const Genome& genome, Innovation node, int width, int height,
                        const EvalOptions& options) {
  require_extent(width, height);
  if (genome.find_node(node) == nullptr) {
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node));
  }
  const CompiledCppn cppn(genome, options);
  const std::size_t slot = cppn.slot_of(node);
  ImageBuffer image(width, height, 3);
  std::vector<double> values;
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      cppn.evaluate_all(pixel_coordinate(i, width), pixel_coordinate(j, height), values);
      // Input d can exceed 1 at the corners.
      const double v = std::clamp(values[slot], -1.0, 1.0);
      if (v < 0) {
        image.at(i, j, 0) = to_byte(-v);
      } else {
        const std::uint8_t level = to_byte(v);
        for (int c = 0; c < 3; ++c) image.at(i, j, c) = level;
      }
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }

  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng encode failed");
  }
  png_set_write_fn(
      png, &out,
      [](png_structp p, png_bytep bytes, png_size_t n) {
        auto* sink = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
        sink->insert(sink->end(), bytes, bytes + n);
      },
      nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  for (int row = 0; row < image.height; ++row) {
    png_write_row(png, const_cast<png_bytep>(image.data.data() + row * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const ImageBuffer& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace breeder
