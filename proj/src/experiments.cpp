#include "kts/experiments.hpp"

#include <map>
#include <string>

#include "kts/features.hpp"
#include "kts/rng.hpp"

namespace kts {

namespace {

/// Seed stream for sampling evaluation negatives; distinct from the
/// training streams used in train_cascade/logitboost_stage.
constexpr std::uint64_t kEvalNegStream = 0x657661;

}  // namespace

Dataset load_dataset(const DatasetManifest& manifest) {
  Dataset data;
  data.window_w = manifest.window_w;
  data.window_h = manifest.window_h;

  std::map<std::string, GrayImage> cache;
  auto load = [&cache](const std::string& path) -> const GrayImage& {
    auto it = cache.find(path);
    if (it == cache.end()) it = cache.emplace(path, read_pgm(path)).first;
    return it->second;
  };

  for (const PositiveEntry& e : manifest.positives) {
    if (e.crop.w != manifest.window_w || e.crop.h != manifest.window_h) {
      throw DimensionMismatch("load_dataset: crop of " + e.image + " is " +
                              std::to_string(e.crop.w) + "x" + std::to_string(e.crop.h) +
                              " but the window is " + std::to_string(manifest.window_w) + "x" +
                              std::to_string(manifest.window_h));
    }
    data.pos_windows.push_back(load(e.image).crop(e.crop.x0, e.crop.y0, e.crop.w, e.crop.h));
  }
  for (const std::string& path : manifest.negatives) {
    data.neg_images.push_back(load(path));
  }
  return data;
}

EvalScores score_dataset(const CascadeModel& model, const Dataset& data,
                         std::size_t eval_negatives) {
  if (data.pos_windows.empty()) throw EmptyInput("score_dataset: no positive windows");
  if (eval_negatives == 0) eval_negatives = 2 * data.pos_windows.size();

  EvalScores scores;
  scores.pos.reserve(data.pos_windows.size());
  for (const GrayImage& win : data.pos_windows) {
    const IntegralTensors ints = build_integrals(compute_features(win));
    scores.pos.push_back(classify_window(model, ints).score);
  }

  std::vector<const GrayImage*> eligible;
  for (const GrayImage& img : data.neg_images) {
    if (img.width() >= model.window_w && img.height() >= model.window_h) {
      eligible.push_back(&img);
    }
  }
  if (eligible.empty()) {
    throw EmptyInput("score_dataset: no negative image fits the detection window");
  }

  Rng rng(derive_seed(model.config.seed, kEvalNegStream));
  scores.neg.reserve(eval_negatives);
  for (std::size_t i = 0; i < eval_negatives; ++i) {
    const GrayImage& src =
        *eligible[rng.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1)];
    const int x0 = static_cast<int>(rng.uniform_int(0, src.width() - model.window_w));
    const int y0 = static_cast<int>(rng.uniform_int(0, src.height() - model.window_h));
    const IntegralTensors ints =
        build_integrals(compute_features(src.crop(x0, y0, model.window_w, model.window_h)));
    scores.neg.push_back(classify_window(model, ints).score);
  }
  return scores;
}

RunResult run_single(const Dataset& data, CascadeConfig config, std::size_t eval_negatives) {
  config.window_w = data.window_w;
  config.window_h = data.window_h;

  RunResult result;
  CascadeTrainResult trained = train_cascade(data.pos_windows, data.neg_images, config);
  result.model = std::move(trained.model);
  result.insufficient_negatives = trained.insufficient_negatives;

  const EvalScores scores = score_dataset(result.model, data, eval_negatives);
  result.curve = compute_det(scores.pos, scores.neg);
  result.auc = area_under_det(result.curve);
  return result;
}

std::vector<std::pair<int, RunResult>> run_experiment_k_sweep(const Dataset& data,
                                                              const std::vector<int>& ks,
                                                              const CascadeConfig& base,
                                                              std::size_t eval_negatives) {
  if (ks.empty()) throw EmptyInput("run_experiment_k_sweep: no K values");
  std::vector<std::pair<int, RunResult>> results;
  results.reserve(ks.size());
  for (const int k : ks) {
    CascadeConfig config = base;
    config.k = k;
    config.mapping = Mapping::kKTangent;
    results.emplace_back(k, run_single(data, config, eval_negatives));
  }
  return results;
}

std::vector<std::pair<Mapping, RunResult>> run_experiment_mappings(
    const Dataset& data, const CascadeConfig& base, std::size_t eval_negatives) {
  const Mapping modes[] = {Mapping::kRawVector, Mapping::kIdentityPole, Mapping::kKarcherPole,
                           Mapping::kKTangent};
  std::vector<std::pair<Mapping, RunResult>> results;
  for (const Mapping mode : modes) {
    CascadeConfig config = base;
    config.mapping = mode;
    results.emplace_back(mode, run_single(data, config, eval_negatives));
  }
  return results;
}

}  // namespace kts
