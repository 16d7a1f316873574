#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "breeder/cppn/evaluate.hpp"
#include "breeder/cppn/genome.hpp"

namespace breeder {

struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 = gray, 3 = rgb
  std::vector<std::uint8_t> data;  // row-major, interleaved channels

  ImageBuffer() = default;
  ImageBuffer(int w, int h, int c)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, 0) {}

  std::uint8_t& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const ImageBuffer&) const = default;
};

// Lattice coordinate of pixel index i along an axis of `extent` pixels:
// -1 + 2i/(extent-1), with a single pixel mapping to 0.
double pixel_coordinate(int i, int extent);

// 0..1 -> 0..255 with round-half-away-from-zero.
std::uint8_t to_byte(double unit);

// HSB (hue in degrees, saturation and brightness in [0, 1]) to 8-bit RGB.
void hsb_to_rgb(double hue_deg, double saturation, double brightness, std::uint8_t rgb[3]);

ImageBuffer render(const Genome& genome, int width, int height, const EvalOptions& options = {});
ImageBuffer render(const CompiledCppn& cppn, int width, int height);

// Activation of one node on the red (-1) / black (0) / white (+1) scale.
ImageBuffer render_node(const Genome& genome, Innovation node, int width, int height,
                        const EvalOptions& options = {});

std::vector<std::uint8_t> encode_png(const ImageBuffer& image);
void write_png(const ImageBuffer& image, const std::filesystem::path& path);

}  // namespace breeder
