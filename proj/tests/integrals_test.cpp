#include "kts/integrals.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "kts/error.hpp"
#include "kts/rng.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace {

kts::GrayImage random_image(kts::Rng& rng, int w, int h) {
  std::vector<double> px(static_cast<std::size_t>(w) * h);
  for (double& p : px) p = rng.uniform();
  return kts::GrayImage(w, h, std::move(px));
}

}  // namespace

TEST_CASE("pair index walks the upper triangle row-major") {
  CHECK(kts::pair_index(0, 0) == 0);
  CHECK(kts::pair_index(0, 7) == 7);
  CHECK(kts::pair_index(1, 1) == 8);
  CHECK(kts::pair_index(1, 7) == 14);
  CHECK(kts::pair_index(7, 7) == 35);
  CHECK(kts::kFeaturePairs == 36);

  // Strictly increasing over the triangle, covering [0, 36).
  int expected = 0;
  for (int i = 0; i < kts::kFeatureChannels; ++i) {
    for (int j = i; j < kts::kFeatureChannels; ++j) CHECK(kts::pair_index(i, j) == expected++);
  }
}

TEST_CASE("integral planes: zero border, single-pixel corner, full-image sums") {
  kts::Rng rng(51);
  const kts::GrayImage img = random_image(rng, 11, 7);
  const kts::FeatureTensor f = kts::compute_features(img);
  const kts::IntegralTensors ints = kts::build_integrals(f);

  // Row 0 and column 0 are identically zero.
  for (int x = 0; x <= 11; ++x) {
    for (int c = 0; c < kts::kFeatureChannels; ++c) CHECK(ints.first(x, 0, c) == 0.0);
    for (int p = 0; p < kts::kFeaturePairs; ++p) CHECK(ints.second(x, 0, p) == 0.0);
  }
  for (int y = 0; y <= 7; ++y) {
    for (int c = 0; c < kts::kFeatureChannels; ++c) CHECK(ints.first(0, y, c) == 0.0);
  }

  // The (1,1) cell is the single top-left feature vector.
  for (int c = 0; c < kts::kFeatureChannels; ++c) {
    CHECK(ints.first(1, 1, c) == f.at(0, 0, c));
  }
  CHECK(ints.second(1, 1, kts::pair_index(2, 3)) ==
        f.at(0, 0, 2) * f.at(0, 0, 3));

  // Full-image sums match direct accumulation.
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(kts::kFeatureChannels);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 11; ++x) {
      for (int c = 0; c < kts::kFeatureChannels; ++c) direct(c) += f.at(x, y, c);
    }
  }
  const Eigen::VectorXd via = ints.region_first({0, 0, 11, 7});
  for (int c = 0; c < kts::kFeatureChannels; ++c) {
    CHECK(via(c) == doctest::Approx(direct(c)).epsilon(1e-12));
  }

  // Squared-channel planes are sums of squares, hence nonnegative.
  for (int y = 0; y <= 7; ++y) {
    for (int x = 0; x <= 11; ++x) {
      for (int i = 0; i < kts::kFeatureChannels; ++i) {
        CHECK(ints.second(x, y, kts::pair_index(i, i)) >= 0.0);
      }
    }
  }
}

TEST_CASE("first-order planes are monotone for the nonnegative channels") {
  kts::Rng rng(52);
  const kts::IntegralTensors ints =
      kts::build_integrals(kts::compute_features(random_image(rng, 9, 9)));
  // Every feature channel is nonnegative, so prefix sums grow along both axes.
  for (int c = 0; c < kts::kFeatureChannels; ++c) {
    for (int y = 0; y <= 9; ++y) {
      for (int x = 1; x <= 9; ++x) CHECK(ints.first(x, y, c) >= ints.first(x - 1, y, c));
    }
    for (int x = 0; x <= 9; ++x) {
      for (int y = 1; y <= 9; ++y) CHECK(ints.first(x, y, c) >= ints.first(x, y - 1, c));
    }
  }
}

TEST_CASE("region sums split exactly across an even partition") {
  kts::Rng rng(53);
  const kts::IntegralTensors ints =
      kts::build_integrals(kts::compute_features(random_image(rng, 16, 12)));
  const kts::Region whole{2, 3, 8, 6};
  const kts::Region left{2, 3, 4, 6};
  const kts::Region right{6, 3, 4, 6};
  const Eigen::VectorXd sum = ints.region_first(whole);
  const Eigen::VectorXd parts = ints.region_first(left) + ints.region_first(right);
  // The four-corner reads of the whole region and of the two halves cancel
  // algebraically; in floating point the two evaluation orders can differ in
  // the last ulp, so the bound is machine-precision relative.
  CHECK((sum - parts).norm() <= 1e-14 * sum.norm());

  // The coordinate channels are small integers, so those sums are exact.
  CHECK(sum(0) == parts(0));
  CHECK(sum(1) == parts(1));
}

TEST_CASE("region queries validate bounds") {
  kts::Rng rng(54);
  const kts::IntegralTensors ints =
      kts::build_integrals(kts::compute_features(random_image(rng, 8, 8)));
  CHECK_THROWS_AS(ints.region_first({0, 0, 9, 1}), kts::RegionOutOfBounds);
  CHECK_THROWS_AS(ints.region_second({-1, 0, 3, 3}), kts::RegionOutOfBounds);
  CHECK_THROWS_AS(kts::region_covariance_matrix(ints, {5, 5, 4, 4}), kts::RegionOutOfBounds);
  CHECK_THROWS_AS(kts::region_covariance_matrix(ints, {0, 0, 0, 2}), kts::RegionOutOfBounds);
}

TEST_CASE("integral covariance matches the direct two-pass oracle") {
  kts::Rng rng(55);
  const kts::GrayImage img = random_image(rng, 40, 30);
  const kts::FeatureTensor f = kts::compute_features(img);
  const kts::IntegralTensors ints = kts::build_integrals(f);

  for (int trial = 0; trial < 50; ++trial) {
    kts::Region r;
    r.w = static_cast<int>(rng.uniform_int(3, 20));
    r.h = static_cast<int>(rng.uniform_int(3, 20));
    r.x0 = static_cast<int>(rng.uniform_int(0, 40 - r.w));
    r.y0 = static_cast<int>(rng.uniform_int(0, 30 - r.h));

    const Eigen::MatrixXd got = kts::region_covariance_matrix(ints, r);
    const Eigen::MatrixXd want = oracles::region_covariance_direct(f, r);
    CHECK((got - want).norm() / want.norm() < 1e-9);
  }
}

TEST_CASE("constant image: covariance lives entirely in the coordinate block") {
  const kts::GrayImage img(10, 8, std::vector<double>(80, 0.4));
  const kts::IntegralTensors ints = kts::build_integrals(kts::compute_features(img));
  const kts::Region r{1, 1, 6, 5};
  const Eigen::MatrixXd c = kts::region_covariance_matrix(ints, r);

  const double n = r.area();
  // x is uniform over six consecutive integers repeated per row: population
  // variance (6^2-1)/12, scaled by n/(n-1) for the sample divisor.
  const double popvar_x = (6.0 * 6.0 - 1.0) / 12.0;
  const double popvar_y = (5.0 * 5.0 - 1.0) / 12.0;
  CHECK(c(0, 0) == doctest::Approx(popvar_x * n / (n - 1.0)).epsilon(1e-10));
  CHECK(c(1, 1) == doctest::Approx(popvar_y * n / (n - 1.0)).epsilon(1e-10));
  CHECK(std::abs(c(0, 1)) < 1e-12);  // x and y are independent over a rectangle
  for (int i = 0; i < kts::kFeatureChannels; ++i) {
    for (int j = 2; j < kts::kFeatureChannels; ++j) {
      CHECK(std::abs(c(i, j)) < 1e-12);
    }
  }
}

TEST_CASE("shifting intensities leaves the descriptor unchanged") {
  kts::Rng rng(56);
  std::vector<double> base(20 * 20), shifted(20 * 20);
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = 0.3 * rng.uniform();
    shifted[i] = base[i] + 0.5;
  }
  const kts::IntegralTensors a =
      kts::build_integrals(kts::compute_features(kts::GrayImage(20, 20, base)));
  const kts::IntegralTensors b =
      kts::build_integrals(kts::compute_features(kts::GrayImage(20, 20, shifted)));
  const kts::Region r{3, 4, 9, 10};
  const Eigen::MatrixXd ca = kts::region_covariance_matrix(a, r);
  const Eigen::MatrixXd cb = kts::region_covariance_matrix(b, r);
  CHECK((ca - cb).norm() < 1e-12);
}

TEST_CASE("single-pixel regions are degenerate") {
  kts::Rng rng(57);
  const kts::IntegralTensors ints =
      kts::build_integrals(kts::compute_features(random_image(rng, 6, 6)));
  const kts::Region r{2, 2, 1, 1};
  CHECK(kts::region_covariance_matrix(ints, r).norm() == 0.0);
  CHECK_THROWS_AS(kts::region_covariance(ints, r, 0.0), kts::DegenerateRegion);
}

TEST_CASE("regularized descriptor is positive definite with a valid eps") {
  kts::Rng rng(58);
  const kts::IntegralTensors ints =
      kts::build_integrals(kts::compute_features(random_image(rng, 30, 30)));

  CHECK_THROWS_AS(kts::region_covariance(ints, {0, 0, 5, 5}, -1.0), kts::Error);

  for (int trial = 0; trial < 20; ++trial) {
    kts::Region r;
    r.w = static_cast<int>(rng.uniform_int(3, 15));
    r.h = static_cast<int>(rng.uniform_int(3, 15));
    r.x0 = static_cast<int>(rng.uniform_int(0, 30 - r.w));
    r.y0 = static_cast<int>(rng.uniform_int(0, 30 - r.h));
    const kts::SpdMatrix c = kts::region_covariance(ints, r, 1e-5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.matrix());
    CHECK(es.eigenvalues()(0) > 0.0);
  }
}
