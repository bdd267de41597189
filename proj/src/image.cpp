#include "kts/image.hpp"

#include <fstream>
#include <string>

namespace kts {

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one unsigned int.
int read_pgm_int(std::istream& in, const std::string& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) {
    throw ParseError("read_pgm: malformed header in " + path);
  }
  long value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1000000) throw ParseError("read_pgm: absurd header value in " + path);
    c = in.get();
  }
  if (c != EOF) in.unget();
  return static_cast<int>(value);
}

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
};

PgmHeader read_pgm_header(std::istream& in, const std::string& path) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw ParseError("read_pgm: " + path + " is not a binary PGM (magic P5)");
  }
  PgmHeader h;
  h.width = read_pgm_int(in, path);
  h.height = read_pgm_int(in, path);
  h.maxval = read_pgm_int(in, path);
  if (h.width < 1 || h.height < 1) throw ParseError("read_pgm: bad dimensions in " + path);
  if (h.maxval < 1 || h.maxval > 255) {
    throw ParseError("read_pgm: only 8-bit maxval supported, got " + std::to_string(h.maxval) +
                     " in " + path);
  }
  // Single whitespace byte separates header from raster.
  in.get();
  return h;
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ < 3 || height_ < 3) {
    throw ImageTooSmall("GrayImage: minimum size is 3x3, got " + std::to_string(width_) + "x" +
                        std::to_string(height_));
  }
  if (pixels_.size() != static_cast<std::size_t>(width_) * height_) {
    throw BadLength("GrayImage: pixel buffer size does not match dimensions");
  }
}

GrayImage GrayImage::crop(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > width_ || y0 + h > height_) {
    throw RegionOutOfBounds("GrayImage::crop: crop exceeds image bounds");
  }
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const double* src = pixels_.data() + static_cast<std::size_t>(y0 + y) * width_ + x0;
    std::copy(src, src + w, out.begin() + static_cast<std::size_t>(y) * w);
  }
  return GrayImage(w, h, std::move(out));
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("read_pgm: cannot open " + path);
  const PgmHeader h = read_pgm_header(in, path);
  std::vector<unsigned char> raw(static_cast<std::size_t>(h.width) * h.height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw ParseError("read_pgm: truncated raster in " + path);
  }
  std::vector<double> pixels(raw.size());
  const double scale = 1.0 / h.maxval;
  for (std::size_t i = 0; i < raw.size(); ++i) pixels[i] = raw[i] * scale;
  return GrayImage(h.width, h.height, std::move(pixels));
}

std::pair<int, int> read_pgm_size(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("read_pgm_size: cannot open " + path);
  const PgmHeader h = read_pgm_header(in, path);
  return {h.width, h.height};
}

}  // namespace kts
