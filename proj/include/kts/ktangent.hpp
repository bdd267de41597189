#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "kts/geometry.hpp"
#include "kts/spd.hpp"

namespace kts {

/// Linear weak learner on tangent coordinates: g(x) = weights . x + bias.
struct WeakRegressor {
  Eigen::VectorXd weights;
  double bias = 0.0;

  double operator()(const TangentVector& x) const { return weights.dot(x.coords()) + bias; }
};

/// One training point: an SPD descriptor, its class label, and a
/// nonnegative importance weight (rewritten each boosting round).
struct LabeledSample {
  SpdMatrix point;
  int label = 1;  // -1 or +1
  double weight = 1.0;
};

/// Weighted ridge least squares
///   min_w,b  sum_i w_i (g(x_i) - t_i)^2 + ridge * |weights|^2
/// with the bias left unregularized. Throws SingularSystem when the normal
/// equations are rank-deficient (only possible at ridge = 0 for positive
/// total weight).
WeakRegressor fit_weighted_ridge(const std::vector<TangentVector>& xs,
                                 const std::vector<double>& targets,
                                 const std::vector<double>& weights, double ridge);

/// The k-tangent-spaces model: K poles (cluster centers of the positive
/// class), member counts, and one linear regressor per tangent space. The
/// prediction is the count-weighted mixture
///   G(Z) = sum_k (n_k / sum_l n_l) * g_k(vectorize(log_map(mu_k, Z))).
class KTangentModel {
 public:
  KTangentModel(std::vector<SpdMatrix> poles, std::vector<int> counts,
                std::vector<WeakRegressor> regressors);

  int k() const { return static_cast<int>(poles_.size()); }
  int dim() const { return poles_.front().dim(); }
  const SpdMatrix& pole(int i) const { return poles_[i].pole(); }
  const std::vector<int>& counts() const { return counts_; }
  const std::vector<WeakRegressor>& regressors() const { return regressors_; }

  double predict(const SpdMatrix& z) const;

 private:
  std::vector<PoleCache> poles_;
  std::vector<int> counts_;
  std::vector<WeakRegressor> regressors_;
  double total_count_ = 0.0;
};

struct KTangentTrainOptions {
  /// Ridge strength; negative selects the default 1e-4 * (mean squared
  /// tangent-coordinate norm), computed per pole.
  double ridge = -1.0;
  /// Lloyd round cap for the positive-sample clustering.
  int kmeans_max_rounds = 100;
  /// Explicit initial cluster centers, bypassing the seeded k-means++
  /// initialization (k must match their count when set).
  std::optional<std::vector<SpdMatrix>> init_centers;
};

/// Train the k-tangent-spaces model: cluster the positive samples only into
/// k groups under the geodesic metric, then for every pole map ALL samples
/// (both classes) into that tangent space and fit a weighted ridge regressor
/// against the supplied responses. Throws TooFewPositives when the positive
/// class has fewer than k members.
KTangentModel train_ktangent(const std::vector<LabeledSample>& samples, int k,
                             const std::vector<double>& responses, std::uint64_t seed,
                             const KTangentTrainOptions& opts = {});

/// Standalone variant: regression responses default to the +/-1 labels.
KTangentModel train_ktangent(const std::vector<LabeledSample>& samples, int k,
                             std::uint64_t seed, const KTangentTrainOptions& opts = {});

}  // namespace kts
