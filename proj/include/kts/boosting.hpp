#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "kts/integrals.hpp"
#include "kts/ktangent.hpp"

namespace kts {

/// How a weak learner turns an SPD descriptor into regression coordinates.
enum class Mapping {
  kRawVector,     // vectorize the covariance itself; no tangent space at all
  kIdentityPole,  // tangent space at the identity matrix
  kKarcherPole,   // single tangent space at the Karcher mean of positives
  kKTangent,      // K tangent spaces at clustered positive-class poles
};

std::string to_string(Mapping m);
Mapping mapping_from_string(const std::string& s);

/// One boosted weak learner: a subwindow of the detection window plus the
/// learner evaluated on that subwindow's covariance descriptor. Tangent
/// mappings carry a full KTangentModel; the raw mapping is a bare linear
/// regressor on the vectorized covariance.
struct WeakUnit {
  Region region;
  Mapping mapping = Mapping::kKTangent;
  std::variant<WeakRegressor, KTangentModel> learner;

  /// Raw learner output for one descriptor (before boosting's clamp).
  double evaluate(const SpdMatrix& descriptor) const;
};

/// One LogitBoost stage: its weak units and the rejection threshold applied
/// to the accumulated stage score.
struct BoostStage {
  std::vector<WeakUnit> units;
  double threshold = 0.0;
};

/// Training configuration; also serialized into models as the config
/// fingerprint.
struct CascadeConfig {
  int window_w = 18;
  int window_h = 36;
  int stages = 6;    // stage cap
  int rounds = 10;   // boosting rounds per stage, cap
  int regions = 50;  // candidate subwindows examined per round
  int k = 3;         // tangent spaces per weak learner (kKTangent)
  double ridge = -1.0;  // weak-regressor ridge; negative = auto
  double eps = 1e-5;    // descriptor regularization
  double target_detection_rate = 0.995;  // per-stage positive pass rate
  double target_fp_rate = 0.5;  // per-stage false-positive rate to stop early
  int neg_quota_factor = 2;     // mined negatives per stage, x positives
  std::uint64_t seed = 0;
  Mapping mapping = Mapping::kKTangent;
};

/// A trained rejection cascade over a fixed detection window.
struct CascadeModel {
  int window_w = 0;
  int window_h = 0;
  CascadeConfig config;
  std::vector<BoostStage> stages;
};

/// Uniformly random subwindows of a window: width in [w/5, w], height in
/// [h/5, h], area at least 9 pixels. Deterministic per seed.
std::vector<Region> sample_candidate_regions(int window_w, int window_h, int count,
                                             std::uint64_t seed);

/// Per-stage training diagnostics.
struct StageStats {
  /// Fraction of training windows misclassified by sign(F), before the
  /// first round and after the last.
  double error_start = 0.0;
  double error_end = 0.0;
  /// Weighted squared error of every candidate, per round.
  std::vector<std::vector<double>> candidate_errors;
  /// Index of the selected candidate, per round.
  std::vector<int> selected;
  int rounds = 0;
  double threshold = 0.0;
  double detection_rate = 0.0;
  double fp_rate = 0.0;
};

/// Train one LogitBoost stage on feature-extracted windows (parallel lists:
/// integral tensors and +/-1 labels). Candidate subwindows are re-sampled
/// every round; the unit with the lowest weighted squared error against the
/// working responses wins (ties to the lowest index). The rejection
/// threshold is the largest value that keeps at least target_detection_rate
/// of the positives.
BoostStage logitboost_stage(const std::vector<const IntegralTensors*>& windows,
                            const std::vector<int>& labels, const CascadeConfig& config,
                            std::uint64_t seed, StageStats* stats = nullptr);

struct CascadeTrainResult {
  CascadeModel model;
  std::vector<StageStats> stage_stats;
  /// Set when negative mining ran dry before filling a stage's quota; the
  /// model then contains only the stages trained up to that point.
  bool insufficient_negatives = false;
};

/// Train a full cascade: positives are fixed window-sized crops, negatives
/// are mined fresh for every stage as random windows of person-free images
/// that pass all stages trained so far.
CascadeTrainResult train_cascade(const std::vector<GrayImage>& pos_windows,
                                 const std::vector<GrayImage>& neg_images,
                                 const CascadeConfig& config);

/// Accumulated score of one stage on one window (no thresholding).
double stage_score(const BoostStage& stage, const IntegralTensors& ints, double eps);

struct ClassifyResult {
  bool accepted = false;
  double score = 0.0;
  /// Number of stages whose units were evaluated before acceptance or
  /// rejection (the short-circuit witness).
  int stages_evaluated = 0;
};

/// Evaluate the cascade on a feature-extracted window: stages run in order
/// and the first stage whose accumulated score falls below its threshold
/// rejects. The reported score is the accumulated score of the last stage
/// evaluated. A model with no stages accepts with score 0.
ClassifyResult classify_window(const CascadeModel& model, const IntegralTensors& ints);

/// Fixed-stride single-scale scan: classify_window at every stride-aligned
/// position, computing features per window crop so coordinate channels stay
/// window-local. Returns accepted windows with scores.
std::vector<std::pair<Region, double>> scan_image(const CascadeModel& model,
                                                  const GrayImage& img, int stride);

}  // namespace kts
