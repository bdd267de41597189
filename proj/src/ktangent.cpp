#include "kts/ktangent.hpp"

#include <cmath>
#include <string>

#include "kts/clustering.hpp"

namespace kts {

WeakRegressor fit_weighted_ridge(const std::vector<TangentVector>& xs,
                                 const std::vector<double>& targets,
                                 const std::vector<double>& weights, double ridge) {
  if (xs.empty()) throw EmptyInput("fit_weighted_ridge: no samples");
  if (targets.size() != xs.size() || weights.size() != xs.size()) {
    throw DimensionMismatch("fit_weighted_ridge: xs/targets/weights lengths differ");
  }
  if (ridge < 0.0) throw Error("E_BAD_ARGUMENT", "fit_weighted_ridge: ridge must be >= 0");
  const int p = xs.front().size();
  double total_weight = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != p) throw DimensionMismatch("fit_weighted_ridge: mixed coordinate sizes");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]) || !std::isfinite(targets[i])) {
      throw Error("E_BAD_ARGUMENT", "fit_weighted_ridge: weights/targets must be finite, >= 0");
    }
    total_weight += weights[i];
  }
  if (total_weight <= 0.0) {
    throw Error("E_BAD_ARGUMENT", "fit_weighted_ridge: total weight is zero");
  }

  // Normal equations over [x; 1] with the ridge penalty on the x block only.
  const int q = p + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(q, q);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd aug(q);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (weights[i] == 0.0) continue;
    aug.head(p) = xs[i].coords();
    aug(p) = 1.0;
    a.noalias() += weights[i] * (aug * aug.transpose());
    rhs.noalias() += (weights[i] * targets[i]) * aug;
  }
  a.topLeftCorner(p, p).diagonal().array() += ridge;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) {
    throw NonConvergence("fit_weighted_ridge: eigen-solver failed on normal equations");
  }
  const double largest = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-12 * largest)) {
    throw SingularSystem("fit_weighted_ridge: rank-deficient design (ridge=" +
                         std::to_string(ridge) + ")");
  }
  const Eigen::VectorXd beta = a.ldlt().solve(rhs);

  WeakRegressor g;
  g.weights = beta.head(p);
  g.bias = beta(p);
  if (!g.weights.allFinite() || !std::isfinite(g.bias)) {
    throw SingularSystem("fit_weighted_ridge: non-finite solution");
  }
  return g;
}

KTangentModel::KTangentModel(std::vector<SpdMatrix> poles, std::vector<int> counts,
                             std::vector<WeakRegressor> regressors)
    : counts_(std::move(counts)), regressors_(std::move(regressors)) {
  if (poles.empty() || counts_.size() != poles.size() || regressors_.size() != poles.size()) {
    throw DimensionMismatch("KTangentModel: poles/counts/regressors must be parallel, non-empty");
  }
  const int d = poles.front().dim();
  const int tangent_len = d * (d + 1) / 2;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (poles[i].dim() != d) throw DimensionMismatch("KTangentModel: poles of mixed dim");
    if (counts_[i] < 1) throw Error("E_BAD_ARGUMENT", "KTangentModel: counts must be >= 1");
    if (regressors_[i].weights.size() != tangent_len || !std::isfinite(regressors_[i].bias) ||
        !regressors_[i].weights.allFinite()) {
      throw DimensionMismatch("KTangentModel: regressor does not fit tangent dimension");
    }
    total_count_ += counts_[i];
  }
  poles_.reserve(poles.size());
  for (const SpdMatrix& p : poles) poles_.emplace_back(p);
}

double KTangentModel::predict(const SpdMatrix& z) const {
  double score = 0.0;
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    const TangentVector x = vectorize(poles_[i].log_map(z));
    score += (counts_[i] / total_count_) * regressors_[i](x);
  }
  return score;
}

namespace {

std::vector<double> labels_as_responses(const std::vector<LabeledSample>& samples) {
  std::vector<double> r(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) r[i] = samples[i].label;
  return r;
}

}  // namespace

KTangentModel train_ktangent(const std::vector<LabeledSample>& samples, int k,
                             const std::vector<double>& responses, std::uint64_t seed,
                             const KTangentTrainOptions& opts) {
  if (samples.empty()) throw EmptyInput("train_ktangent: no samples");
  if (responses.size() != samples.size()) {
    throw DimensionMismatch("train_ktangent: one response per sample required");
  }
  if (k < 1) throw Error("E_BAD_ARGUMENT", "train_ktangent: k must be >= 1");

  std::vector<SpdMatrix> positives;
  for (const LabeledSample& s : samples) {
    if (s.label != 1 && s.label != -1) {
      throw Error("E_BAD_ARGUMENT", "train_ktangent: labels must be -1 or +1");
    }
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) {
      throw Error("E_BAD_ARGUMENT", "train_ktangent: weights must be finite, >= 0");
    }
    if (s.label == 1) positives.push_back(s.point);
  }
  if (positives.size() < static_cast<std::size_t>(k)) {
    throw TooFewPositives("train_ktangent: " + std::to_string(positives.size()) +
                          " positives for k=" + std::to_string(k));
  }

  // Poles come from the positive class only; negatives carry no pole
  // information but do enter every regression below.
  Clustering clustering;
  if (opts.init_centers) {
    if (static_cast<int>(opts.init_centers->size()) != k) {
      throw DimensionMismatch("train_ktangent: init_centers count differs from k");
    }
    clustering = lloyd_iterate(positives, *opts.init_centers, opts.kmeans_max_rounds);
  } else {
    clustering = geodesic_kmeans(positives, k, seed, opts.kmeans_max_rounds);
  }

  std::vector<double> sample_weights(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) sample_weights[i] = samples[i].weight;

  std::vector<WeakRegressor> regressors;
  regressors.reserve(k);
  for (int c = 0; c < k; ++c) {
    const PoleCache cache(clustering.centers[c]);
    std::vector<TangentVector> mapped;
    mapped.reserve(samples.size());
    double mean_sq_norm = 0.0;
    for (const LabeledSample& s : samples) {
      mapped.push_back(vectorize(cache.log_map(s.point)));
      mean_sq_norm += mapped.back().coords().squaredNorm();
    }
    mean_sq_norm /= static_cast<double>(samples.size());
    const double ridge = opts.ridge >= 0.0 ? opts.ridge : 1e-4 * mean_sq_norm;
    regressors.push_back(fit_weighted_ridge(mapped, responses, sample_weights, ridge));
  }

  return KTangentModel(std::move(clustering.centers), std::move(clustering.counts),
                       std::move(regressors));
}

KTangentModel train_ktangent(const std::vector<LabeledSample>& samples, int k, std::uint64_t seed,
                             const KTangentTrainOptions& opts) {
  return train_ktangent(samples, k, labels_as_responses(samples), seed, opts);
}

}  // namespace kts
