#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kts/error.hpp"

namespace kts {

/// Grayscale image with intensities in [0, 1], row-major. Minimum size is
/// 3x3 so derivative stencils have an interior.
class GrayImage {
 public:
  GrayImage(int width, int height, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<double>& pixels() const { return pixels_; }

  GrayImage crop(int x0, int y0, int w, int h) const;

 private:
  int width_;
  int height_;
  std::vector<double> pixels_;
};

/// Read an 8-bit binary portable graymap (magic "P5"). Intensities are
/// normalized by the file's maxval.
GrayImage read_pgm(const std::string& path);

/// (width, height) from a PGM header without reading pixel data.
std::pair<int, int> read_pgm_size(const std::string& path);

}  // namespace kts
