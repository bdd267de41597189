#include "kts/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kts {

FeatureTensor::FeatureTensor(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width_ < 1 || height_ < 1 ||
      values_.size() != static_cast<std::size_t>(width_) * height_ * kFeatureChannels) {
    throw BadLength("FeatureTensor: value buffer does not match dimensions");
  }
}

FeatureTensor compute_features(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<double> values(static_cast<std::size_t>(w) * h * kFeatureChannels);

  // Replicate-edge neighbor lookup.
  auto px = [&](int x, int y) {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return img.at(x, y);
  };

  std::size_t out = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = 0.5 * (px(x + 1, y) - px(x - 1, y));
      const double dy = 0.5 * (px(x, y + 1) - px(x, y - 1));
      const double dxx = px(x + 1, y) - 2.0 * px(x, y) + px(x - 1, y);
      const double dyy = px(x, y + 1) - 2.0 * px(x, y) + px(x, y - 1);
      const double adx = std::abs(dx);
      const double ady = std::abs(dy);
      values[out + kChanX] = x;
      values[out + kChanY] = y;
      values[out + kChanAbsDx] = adx;
      values[out + kChanAbsDy] = ady;
      values[out + kChanAbsDxx] = std::abs(dxx);
      values[out + kChanAbsDyy] = std::abs(dyy);
      values[out + kChanMagnitude] = std::sqrt(dx * dx + dy * dy);
      // atan(|dx|/|dy|) via atan2 so the 0/0 case is a deterministic 0.
      values[out + kChanOrientation] = (adx == 0.0 && ady == 0.0) ? 0.0 : std::atan2(adx, ady);
      out += kFeatureChannels;
    }
  }
  return FeatureTensor(w, h, std::move(values));
}

}  // namespace kts
