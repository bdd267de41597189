#include "kts/boosting.hpp"

#include <algorithm>
#include <cmath>

#include "kts/features.hpp"
#include "kts/rng.hpp"

namespace kts {

std::string to_string(Mapping m) {
  switch (m) {
    case Mapping::kRawVector: return "raw_vector";
    case Mapping::kIdentityPole: return "identity_pole";
    case Mapping::kKarcherPole: return "karcher_pole";
    case Mapping::kKTangent: return "k_tangent";
  }
  throw Error("E_BAD_ARGUMENT", "to_string: unknown mapping");
}

Mapping mapping_from_string(const std::string& s) {
  if (s == "raw_vector") return Mapping::kRawVector;
  if (s == "identity_pole") return Mapping::kIdentityPole;
  if (s == "karcher_pole") return Mapping::kKarcherPole;
  if (s == "k_tangent") return Mapping::kKTangent;
  throw ParseError("unknown mapping '" + s + "'");
}

double WeakUnit::evaluate(const SpdMatrix& descriptor) const {
  if (const KTangentModel* m = std::get_if<KTangentModel>(&learner)) {
    return m->predict(descriptor);
  }
  return std::get<WeakRegressor>(learner)(vectorize(descriptor.as_sym()));
}

namespace {

constexpr double kWeightFloor = 1e-6;
constexpr double kOutputClamp = 2.0;

double clamp_output(double v) { return std::clamp(v, -kOutputClamp, kOutputClamp); }

/// Largest threshold keeping at least `rate` of the positive scores at or
/// above it: the ceil(rate * n)-th largest score.
double stage_threshold(std::vector<double> pos_scores, double rate) {
  const int n = static_cast<int>(pos_scores.size());
  const int m = std::clamp(static_cast<int>(std::ceil(rate * n)), 1, n);
  std::nth_element(pos_scores.begin(), pos_scores.begin() + (m - 1), pos_scores.end(),
                   std::greater<>());
  return pos_scores[m - 1];
}

double ridge_for(const std::vector<TangentVector>& xs, double configured) {
  if (configured >= 0.0) return configured;
  double s = 0.0;
  for (const TangentVector& x : xs) s += x.coords().squaredNorm();
  return 1e-4 * s / static_cast<double>(xs.size());
}

struct UnitFit {
  WeakUnit unit;
  std::vector<double> outputs;  // raw learner output per window
  double weighted_error = 0.0;
};

UnitFit fit_candidate(const std::vector<const IntegralTensors*>& windows,
                      const std::vector<int>& labels, const std::vector<double>& z,
                      const std::vector<double>& w, const Region& region,
                      const CascadeConfig& config, std::uint64_t seed) {
  const std::size_t n = windows.size();
  std::vector<SpdMatrix> descs;
  descs.reserve(n);
  for (const IntegralTensors* t : windows) {
    descs.push_back(region_covariance(*t, region, config.eps));
  }

  UnitFit fit;
  fit.unit.region = region;
  fit.unit.mapping = config.mapping;
  fit.outputs.resize(n);

  if (config.mapping == Mapping::kRawVector || config.mapping == Mapping::kIdentityPole) {
    // Single fixed mapping, no clustering: a bare ridge fit.
    std::vector<TangentVector> xs;
    xs.reserve(n);
    if (config.mapping == Mapping::kRawVector) {
      for (const SpdMatrix& d : descs) xs.push_back(vectorize(d.as_sym()));
    } else {
      const PoleCache identity(SpdMatrix::identity(descs.front().dim()));
      for (const SpdMatrix& d : descs) xs.push_back(vectorize(identity.log_map(d)));
    }
    WeakRegressor g = fit_weighted_ridge(xs, z, w, ridge_for(xs, config.ridge));
    for (std::size_t i = 0; i < n; ++i) fit.outputs[i] = g(xs[i]);
    if (config.mapping == Mapping::kRawVector) {
      fit.unit.learner = std::move(g);
    } else {
      fit.unit.learner = KTangentModel({SpdMatrix::identity(descs.front().dim())}, {1},
                                       {std::move(g)});
    }
  } else {
    const int k = config.mapping == Mapping::kKTangent ? config.k : 1;
    std::vector<LabeledSample> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) samples.push_back({descs[i], labels[i], w[i]});
    KTangentTrainOptions opts;
    opts.ridge = config.ridge;
    KTangentModel model = train_ktangent(samples, k, z, seed, opts);
    for (std::size_t i = 0; i < n; ++i) fit.outputs[i] = model.predict(descs[i]);
    fit.unit.learner = std::move(model);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double r = fit.outputs[i] - z[i];
    fit.weighted_error += w[i] * r * r;
  }
  return fit;
}

double sign_error(const std::vector<double>& f, const std::vector<int>& labels) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int predicted = f[i] >= 0.0 ? 1 : -1;
    if (predicted != labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(f.size());
}

}  // namespace

std::vector<Region> sample_candidate_regions(int window_w, int window_h, int count,
                                             std::uint64_t seed) {
  if (count < 1) throw Error("E_BAD_ARGUMENT", "sample_candidate_regions: count must be >= 1");
  if (window_w < 3 || window_h < 3) {
    throw WindowTooSmall("sample_candidate_regions: window below 3x3 has no 9-pixel subregion");
  }
  Rng rng(seed);
  const int lo_w = std::max(1, window_w / 5);
  const int lo_h = std::max(1, window_h / 5);
  std::vector<Region> regions;
  regions.reserve(count);
  while (static_cast<int>(regions.size()) < count) {
    const int rw = static_cast<int>(rng.uniform_int(lo_w, window_w));
    const int rh = static_cast<int>(rng.uniform_int(lo_h, window_h));
    if (rw * rh < 9) continue;
    const int x0 = static_cast<int>(rng.uniform_int(0, window_w - rw));
    const int y0 = static_cast<int>(rng.uniform_int(0, window_h - rh));
    regions.push_back({x0, y0, rw, rh});
  }
  return regions;
}

BoostStage logitboost_stage(const std::vector<const IntegralTensors*>& windows,
                            const std::vector<int>& labels, const CascadeConfig& config,
                            std::uint64_t seed, StageStats* stats) {
  const std::size_t n = windows.size();
  if (n == 0) throw EmptyInput("logitboost_stage: no training windows");
  if (labels.size() != n) {
    throw DimensionMismatch("logitboost_stage: one label per window required");
  }
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 1 && labels[i] != -1) {
      throw Error("E_BAD_ARGUMENT", "logitboost_stage: labels must be -1 or +1");
    }
    if (windows[i] == nullptr) throw EmptyInput("logitboost_stage: null window");
    if (labels[i] == 1) ++n_pos;
  }
  if (n_pos == 0 || n_pos == n) {
    throw OneClassOnly("logitboost_stage: both classes must be present");
  }
  if (config.rounds < 1) throw Error("E_BAD_ARGUMENT", "logitboost_stage: rounds must be >= 1");

  StageStats local;
  std::vector<double> f(n, 0.0), p(n, 0.5), w(n), z(n);
  local.error_start = sign_error(f, labels);

  BoostStage stage;
  double threshold = 0.0;
  for (int round = 0; round < config.rounds; ++round) {
    const std::uint64_t round_seed = derive_seed(seed, 1000 + round);
    for (std::size_t i = 0; i < n; ++i) {
      const double y_star = labels[i] == 1 ? 1.0 : 0.0;
      w[i] = std::max(p[i] * (1.0 - p[i]), kWeightFloor);
      z[i] = (y_star - p[i]) / w[i];
    }

    const std::vector<Region> candidates =
        sample_candidate_regions(config.window_w, config.window_h, config.regions,
                                 derive_seed(round_seed, 0));
    UnitFit best;
    int best_index = -1;
    std::vector<double> errors;
    errors.reserve(candidates.size());
    for (std::size_t m = 0; m < candidates.size(); ++m) {
      UnitFit fit = fit_candidate(windows, labels, z, w, candidates[m], config,
                                  derive_seed(round_seed, 1 + m));
      errors.push_back(fit.weighted_error);
      if (best_index < 0 || fit.weighted_error < best.weighted_error) {
        best = std::move(fit);
        best_index = static_cast<int>(m);
      }
    }
    local.candidate_errors.push_back(std::move(errors));
    local.selected.push_back(best_index);

    for (std::size_t i = 0; i < n; ++i) {
      f[i] += 0.5 * clamp_output(best.outputs[i]);
      p[i] = 1.0 / (1.0 + std::exp(-2.0 * f[i]));
    }
    stage.units.push_back(std::move(best.unit));
    local.rounds = round + 1;

    std::vector<double> pos_scores;
    pos_scores.reserve(n_pos);
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == 1) pos_scores.push_back(f[i]);
    }
    threshold = stage_threshold(pos_scores, config.target_detection_rate);
    std::size_t false_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == -1 && f[i] >= threshold) ++false_pos;
    }
    local.fp_rate = static_cast<double>(false_pos) / static_cast<double>(n - n_pos);
    if (local.fp_rate <= config.target_fp_rate) break;
  }

  stage.threshold = threshold;
  local.threshold = threshold;
  local.error_end = sign_error(f, labels);
  std::size_t detected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == 1 && f[i] >= threshold) ++detected;
  }
  local.detection_rate = static_cast<double>(detected) / static_cast<double>(n_pos);
  if (stats != nullptr) *stats = std::move(local);
  return stage;
}

double stage_score(const BoostStage& stage, const IntegralTensors& ints, double eps) {
  double f = 0.0;
  for (const WeakUnit& unit : stage.units) {
    f += 0.5 * clamp_output(unit.evaluate(region_covariance(ints, unit.region, eps)));
  }
  return f;
}

ClassifyResult classify_window(const CascadeModel& model, const IntegralTensors& ints) {
  if (ints.width() < model.window_w || ints.height() < model.window_h) {
    throw WindowTooSmall("classify_window: integrals smaller than the detection window");
  }
  ClassifyResult result;
  result.accepted = true;
  for (const BoostStage& stage : model.stages) {
    const double f = stage_score(stage, ints, model.config.eps);
    ++result.stages_evaluated;
    result.score = f;
    if (f < stage.threshold) {
      result.accepted = false;
      break;
    }
  }
  return result;
}

CascadeTrainResult train_cascade(const std::vector<GrayImage>& pos_windows,
                                 const std::vector<GrayImage>& neg_images,
                                 const CascadeConfig& config) {
  if (pos_windows.empty()) throw EmptyInput("train_cascade: no positive windows");
  if (neg_images.empty()) throw EmptyInput("train_cascade: no negative source images");
  if (config.window_w < 16 || config.window_h < 16) {
    throw WindowTooSmall("train_cascade: detection window must be at least 16x16");
  }
  if (config.stages < 1) throw Error("E_BAD_ARGUMENT", "train_cascade: stages must be >= 1");

  std::vector<IntegralTensors> pos_ints;
  pos_ints.reserve(pos_windows.size());
  for (const GrayImage& win : pos_windows) {
    if (win.width() != config.window_w || win.height() != config.window_h) {
      throw DimensionMismatch("train_cascade: positive window is not the configured size");
    }
    pos_ints.push_back(build_integrals(compute_features(win)));
  }

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < neg_images.size(); ++i) {
    if (neg_images[i].width() >= config.window_w && neg_images[i].height() >= config.window_h) {
      eligible.push_back(i);
    }
  }

  CascadeTrainResult result;
  result.model.window_w = config.window_w;
  result.model.window_h = config.window_h;
  result.model.config = config;

  const std::size_t quota =
      static_cast<std::size_t>(config.neg_quota_factor) * pos_windows.size();
  for (int s = 0; s < config.stages; ++s) {
    const std::uint64_t stage_seed = derive_seed(config.seed, 17 + s);

    // Bootstrap the stage's negatives: random windows of the person-free
    // images that the cascade built so far still accepts.
    std::vector<IntegralTensors> neg_ints;
    if (!eligible.empty()) {
      Rng rng(derive_seed(stage_seed, 0));
      const std::size_t attempt_budget = std::max<std::size_t>(10000, 500 * quota);
      for (std::size_t attempt = 0; attempt < attempt_budget && neg_ints.size() < quota;
           ++attempt) {
        const GrayImage& src =
            neg_images[eligible[rng.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1)]];
        const int x0 = static_cast<int>(rng.uniform_int(0, src.width() - config.window_w));
        const int y0 = static_cast<int>(rng.uniform_int(0, src.height() - config.window_h));
        IntegralTensors ints = build_integrals(
            compute_features(src.crop(x0, y0, config.window_w, config.window_h)));
        if (classify_window(result.model, ints).accepted) {
          neg_ints.push_back(std::move(ints));
        }
      }
    }
    if (neg_ints.size() < quota) {
      result.insufficient_negatives = true;
      break;
    }

    std::vector<const IntegralTensors*> windows;
    std::vector<int> labels;
    windows.reserve(pos_ints.size() + neg_ints.size());
    for (const IntegralTensors& t : pos_ints) {
      windows.push_back(&t);
      labels.push_back(1);
    }
    for (const IntegralTensors& t : neg_ints) {
      windows.push_back(&t);
      labels.push_back(-1);
    }

    StageStats stats;
    BoostStage stage =
        logitboost_stage(windows, labels, config, derive_seed(stage_seed, 1), &stats);
    result.model.stages.push_back(std::move(stage));
    result.stage_stats.push_back(std::move(stats));
  }
  return result;
}

std::vector<std::pair<Region, double>> scan_image(const CascadeModel& model,
                                                  const GrayImage& img, int stride) {
  if (stride < 1) throw Error("E_BAD_ARGUMENT", "scan_image: stride must be >= 1");
  if (img.width() < model.window_w || img.height() < model.window_h) {
    throw ImageTooSmall("scan_image: image smaller than the detection window");
  }
  std::vector<std::pair<Region, double>> hits;
  for (int y0 = 0; y0 + model.window_h <= img.height(); y0 += stride) {
    for (int x0 = 0; x0 + model.window_w <= img.width(); x0 += stride) {
      const IntegralTensors ints =
          build_integrals(compute_features(img.crop(x0, y0, model.window_w, model.window_h)));
      const ClassifyResult res = classify_window(model, ints);
      if (res.accepted) {
        hits.push_back({{x0, y0, model.window_w, model.window_h}, res.score});
      }
    }
  }
  return hits;
}

}  // namespace kts
