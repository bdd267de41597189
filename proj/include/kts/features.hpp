#pragma once

#include <vector>

#include "kts/image.hpp"

namespace kts {

/// Number of per-pixel feature channels.
inline constexpr int kFeatureChannels = 8;

/// Channel order within a feature vector.
enum FeatureChannel {
  kChanX = 0,         // pixel x coordinate (window-local)
  kChanY = 1,         // pixel y coordinate (window-local)
  kChanAbsDx = 2,     // |d_x|
  kChanAbsDy = 3,     // |d_y|
  kChanAbsDxx = 4,    // |d_xx|
  kChanAbsDyy = 5,    // |d_yy|
  kChanMagnitude = 6, // sqrt(d_x^2 + d_y^2)
  kChanOrientation = 7,  // atan(|d_x| / |d_y|), 0 when both derivatives vanish
};

/// Per-pixel 8-channel feature map
///   [x, y, |d_x|, |d_y|, |d_xx|, |d_yy|, sqrt(d_x^2+d_y^2), atan(|d_x|/|d_y|)]
/// stored pixel-major (all 8 channels of a pixel are contiguous).
class FeatureTensor {
 public:
  FeatureTensor(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }

  double at(int x, int y, int channel) const {
    return values_[(static_cast<std::size_t>(y) * width_ + x) * kFeatureChannels + channel];
  }
  /// Pointer to the 8 channels of pixel (x, y).
  const double* pixel(int x, int y) const {
    return values_.data() + (static_cast<std::size_t>(y) * width_ + x) * kFeatureChannels;
  }
  const std::vector<double>& values() const { return values_; }

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

/// Compute the 8-channel feature map of an image. First derivatives use the
/// central-difference stencil [-1, 0, 1]/2, second derivatives [1, -2, 1],
/// both with replicate-edge padding. Coordinate channels are relative to the
/// image's own top-left corner, so features computed on a cropped window are
/// window-local.
FeatureTensor compute_features(const GrayImage& img);

}  // namespace kts
