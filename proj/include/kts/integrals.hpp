#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kts/features.hpp"
#include "kts/spd.hpp"

namespace kts {

/// Axis-aligned pixel rectangle: top-left (x0, y0) inclusive, extent w x h.
struct Region {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;

  int area() const { return w * h; }
  bool operator==(const Region&) const = default;
};

/// Index of the (i, j) pair, i <= j, in the row-major upper triangle of an
/// 8x8 matrix; 36 pairs total.
inline constexpr int pair_index(int i, int j) {
  return i * kFeatureChannels - i * (i - 1) / 2 + (j - i);
}

inline constexpr int kFeaturePairs = pair_index(kFeatureChannels - 1, kFeatureChannels - 1) + 1;

/// First- and second-order 2-D prefix sums of a feature tensor. Plane (x, y)
/// holds sums over all pixels with coordinates strictly below (x, y), so row
/// and column 0 are zero and any rectangular sum is four corner reads.
class IntegralTensors {
 public:
  IntegralTensors(int width, int height, std::vector<double> first, std::vector<double> second);

  int width() const { return width_; }
  int height() const { return height_; }

  double first(int x, int y, int channel) const {
    return first_[(static_cast<std::size_t>(y) * (width_ + 1) + x) * kFeatureChannels + channel];
  }
  double second(int x, int y, int pair) const {
    return second_[(static_cast<std::size_t>(y) * (width_ + 1) + x) * kFeaturePairs + pair];
  }

  /// Channel sums over a region (length-8 vector), four corner reads.
  Eigen::VectorXd region_first(const Region& r) const;
  /// Outer-product sums over a region as a symmetric 8x8 matrix.
  Eigen::MatrixXd region_second(const Region& r) const;

 private:
  int width_;
  int height_;
  std::vector<double> first_;
  std::vector<double> second_;
};

/// Prefix sums of f and of the outer products f f^T over all pixels.
IntegralTensors build_integrals(const FeatureTensor& f);

/// Unregularized sample covariance of the feature vectors inside a region,
/// from the four-corner integral reads:
///   C = (S2 - S1 S1^T / n) / (n - 1),  n = w * h.
/// A single-pixel region yields the zero matrix.
Eigen::MatrixXd region_covariance_matrix(const IntegralTensors& ints, const Region& r);

/// Region covariance descriptor: the sample covariance above plus the
/// positive-definiteness guard eps * trace(C)/8 * I.
SpdMatrix region_covariance(const IntegralTensors& ints, const Region& r, double eps = 1e-5);

}  // namespace kts
