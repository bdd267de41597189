#pragma once

#include <utility>
#include <vector>

#include "kts/boosting.hpp"
#include "kts/det.hpp"
#include "kts/manifest.hpp"

namespace kts {

/// Materialized training data: window-sized positive crops and full
/// negative source images.
struct Dataset {
  std::vector<GrayImage> pos_windows;
  std::vector<GrayImage> neg_images;
  int window_w = 0;
  int window_h = 0;
};

/// Read every image referenced by a manifest and crop the positives. Each
/// positive crop must match the manifest's window size exactly.
Dataset load_dataset(const DatasetManifest& manifest);

struct EvalScores {
  std::vector<double> pos;
  std::vector<double> neg;
};

/// Score the dataset under a model: every positive window, plus
/// eval_negatives windows sampled uniformly from the negative images (0
/// selects twice the positive count). The sampling seed derives from the
/// model's config seed, so runs that share a config seed score the same
/// negative windows.
EvalScores score_dataset(const CascadeModel& model, const Dataset& data,
                         std::size_t eval_negatives = 0);

/// One training + evaluation run.
struct RunResult {
  CascadeModel model;
  DetCurve curve;
  double auc = 0.0;
  bool insufficient_negatives = false;
};

/// Train a cascade on the dataset (the config's window size is taken from
/// the data), score it, and compute its DET curve and area-under-DET.
RunResult run_single(const Dataset& data, CascadeConfig config, std::size_t eval_negatives = 0);

/// Detection with 1..K tangent spaces: one run per requested K, all other
/// settings and all seeds shared, so the K=1 run coincides with the
/// single-tangent baseline.
std::vector<std::pair<int, RunResult>> run_experiment_k_sweep(const Dataset& data,
                                                              const std::vector<int>& ks,
                                                              const CascadeConfig& base,
                                                              std::size_t eval_negatives = 0);

/// The four descriptor-mapping variants — raw vectorized covariance,
/// identity-pole tangent space, Karcher-mean-pole tangent space, and K
/// tangent spaces — trained with shared seeds on the same dataset.
std::vector<std::pair<Mapping, RunResult>> run_experiment_mappings(
    const Dataset& data, const CascadeConfig& base, std::size_t eval_negatives = 0);

}  // namespace kts
