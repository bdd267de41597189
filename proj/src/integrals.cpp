#include "kts/integrals.hpp"

#include <string>

namespace kts {

namespace {

void check_region(const IntegralTensors& ints, const Region& r) {
  if (r.w < 1 || r.h < 1 || r.x0 < 0 || r.y0 < 0 || r.x0 + r.w > ints.width() ||
      r.y0 + r.h > ints.height()) {
    throw RegionOutOfBounds("region [" + std::to_string(r.x0) + "," + std::to_string(r.y0) +
                            " " + std::to_string(r.w) + "x" + std::to_string(r.h) +
                            "] exceeds " + std::to_string(ints.width()) + "x" +
                            std::to_string(ints.height()));
  }
}

}  // namespace

IntegralTensors::IntegralTensors(int width, int height, std::vector<double> first,
                                 std::vector<double> second)
    : width_(width), height_(height), first_(std::move(first)), second_(std::move(second)) {
  const std::size_t planes = static_cast<std::size_t>(width_ + 1) * (height_ + 1);
  if (width_ < 1 || height_ < 1 || first_.size() != planes * kFeatureChannels ||
      second_.size() != planes * kFeaturePairs) {
    throw BadLength("IntegralTensors: buffer sizes do not match dimensions");
  }
}

Eigen::VectorXd IntegralTensors::region_first(const Region& r) const {
  check_region(*this, r);
  const int x1 = r.x0 + r.w;
  const int y1 = r.y0 + r.h;
  Eigen::VectorXd s(kFeatureChannels);
  for (int c = 0; c < kFeatureChannels; ++c) {
    s(c) = first(x1, y1, c) - first(r.x0, y1, c) - first(x1, r.y0, c) + first(r.x0, r.y0, c);
  }
  return s;
}

Eigen::MatrixXd IntegralTensors::region_second(const Region& r) const {
  check_region(*this, r);
  const int x1 = r.x0 + r.w;
  const int y1 = r.y0 + r.h;
  Eigen::MatrixXd s(kFeatureChannels, kFeatureChannels);
  for (int i = 0; i < kFeatureChannels; ++i) {
    for (int j = i; j < kFeatureChannels; ++j) {
      const int p = pair_index(i, j);
      const double v =
          second(x1, y1, p) - second(r.x0, y1, p) - second(x1, r.y0, p) + second(r.x0, r.y0, p);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

IntegralTensors build_integrals(const FeatureTensor& f) {
  const int w = f.width();
  const int h = f.height();
  const int sw = w + 1;  // stride in plane cells
  std::vector<double> first(static_cast<std::size_t>(sw) * (h + 1) * kFeatureChannels, 0.0);
  std::vector<double> second(static_cast<std::size_t>(sw) * (h + 1) * kFeaturePairs, 0.0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double* fv = f.pixel(x, y);
      // P[y+1][x+1] = f + P[y][x+1] + P[y+1][x] - P[y][x]
      const std::size_t cur = static_cast<std::size_t>(y + 1) * sw + (x + 1);
      const std::size_t up = static_cast<std::size_t>(y) * sw + (x + 1);
      const std::size_t left = static_cast<std::size_t>(y + 1) * sw + x;
      const std::size_t diag = static_cast<std::size_t>(y) * sw + x;
      {
        double* out = first.data() + cur * kFeatureChannels;
        const double* pu = first.data() + up * kFeatureChannels;
        const double* pl = first.data() + left * kFeatureChannels;
        const double* pd = first.data() + diag * kFeatureChannels;
        for (int c = 0; c < kFeatureChannels; ++c) out[c] = fv[c] + pu[c] + pl[c] - pd[c];
      }
      {
        double* out = second.data() + cur * kFeaturePairs;
        const double* pu = second.data() + up * kFeaturePairs;
        const double* pl = second.data() + left * kFeaturePairs;
        const double* pd = second.data() + diag * kFeaturePairs;
        int p = 0;
        for (int i = 0; i < kFeatureChannels; ++i) {
          for (int j = i; j < kFeatureChannels; ++j, ++p) {
            out[p] = fv[i] * fv[j] + pu[p] + pl[p] - pd[p];
          }
        }
      }
    }
  }
  return IntegralTensors(w, h, std::move(first), std::move(second));
}

Eigen::MatrixXd region_covariance_matrix(const IntegralTensors& ints, const Region& r) {
  check_region(ints, r);
  const double n = static_cast<double>(r.area());
  if (r.area() == 1) {
    return Eigen::MatrixXd::Zero(kFeatureChannels, kFeatureChannels);
  }
  const Eigen::VectorXd s1 = ints.region_first(r);
  const Eigen::MatrixXd s2 = ints.region_second(r);
  Eigen::MatrixXd c = (s2 - s1 * s1.transpose() / n) / (n - 1.0);
  // The corner reads are exact for both triangles, but keep the result
  // bitwise symmetric for SpdMatrix construction.
  c = ((c + c.transpose()) * 0.5).eval();
  return c;
}

SpdMatrix region_covariance(const IntegralTensors& ints, const Region& r, double eps) {
  if (eps < 0.0) throw Error("E_BAD_ARGUMENT", "region_covariance: eps must be >= 0");
  Eigen::MatrixXd c = region_covariance_matrix(ints, r);
  const double tr = c.trace();
  if (tr == 0.0 && eps == 0.0) {
    throw DegenerateRegion("region_covariance: zero-trace covariance with no regularization");
  }
  c += (eps * tr / kFeatureChannels) * Eigen::MatrixXd::Identity(kFeatureChannels, kFeatureChannels);
  return SpdMatrix(c);
}

}  // namespace kts
