#include "kts/boosting.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "kts/error.hpp"
#include "kts/rng.hpp"
#include "support/synthetic.hpp"

namespace {

kts::IntegralTensors ints_of(const kts::GrayImage& img) {
  return kts::build_integrals(kts::compute_features(img));
}

// Strongly separable window set: vertical stripes (positives) against flat
// noise (negatives).
struct WindowSet {
  std::vector<kts::IntegralTensors> tensors;
  std::vector<int> labels;

  std::vector<const kts::IntegralTensors*> pointers() const {
    std::vector<const kts::IntegralTensors*> p;
    p.reserve(tensors.size());
    for (const auto& t : tensors) p.push_back(&t);
    return p;
  }
};

WindowSet separable_windows(std::uint64_t seed, int n_pos, int n_neg, int w, int h) {
  kts::Rng rng(seed);
  WindowSet set;
  for (int i = 0; i < n_pos; ++i) {
    set.tensors.push_back(ints_of(synthetic::stripe_image(rng, w, h, 0.0, 4.0, 0.35, 0.01)));
    set.labels.push_back(1);
  }
  for (int i = 0; i < n_neg; ++i) {
    set.tensors.push_back(ints_of(synthetic::flat_image(rng, w, h, 0.01)));
    set.labels.push_back(-1);
  }
  return set;
}

kts::WeakUnit constant_unit(double bias) {
  kts::WeakUnit unit;
  unit.region = {0, 0, 4, 4};
  unit.mapping = kts::Mapping::kRawVector;
  kts::WeakRegressor g;
  g.weights = Eigen::VectorXd::Zero(36);
  g.bias = bias;
  unit.learner = std::move(g);
  return unit;
}

}  // namespace

TEST_CASE("mapping names roundtrip") {
  using kts::Mapping;
  for (Mapping m : {Mapping::kRawVector, Mapping::kIdentityPole, Mapping::kKarcherPole,
                    Mapping::kKTangent}) {
    CHECK(kts::mapping_from_string(kts::to_string(m)) == m);
  }
  CHECK(kts::to_string(Mapping::kRawVector) == "raw_vector");
  CHECK_THROWS_AS(kts::mapping_from_string("banana"), kts::ParseError);
}

TEST_CASE("candidate region sampling: determinism, bounds, diversity") {
  const auto a = kts::sample_candidate_regions(64, 128, 200, 7);
  const auto b = kts::sample_candidate_regions(64, 128, 200, 7);
  REQUIRE(a.size() == 200);
  CHECK(a == b);
  const auto c = kts::sample_candidate_regions(64, 128, 200, 8);
  CHECK(a != c);

  for (const kts::Region& r : a) {
    CHECK(r.x0 >= 0);
    CHECK(r.y0 >= 0);
    CHECK(r.x0 + r.w <= 64);
    CHECK(r.y0 + r.h <= 128);
    CHECK(r.w >= 64 / 5);
    CHECK(r.h >= 128 / 5);
    CHECK(r.area() >= 9);
  }

  std::set<int> widths;
  for (const kts::Region& r : kts::sample_candidate_regions(128, 128, 1000, 3)) {
    widths.insert(r.w);
  }
  CHECK(widths.size() >= 100);

  CHECK_THROWS_AS(kts::sample_candidate_regions(32, 32, 0, 0), kts::Error);
  CHECK_THROWS_AS(kts::sample_candidate_regions(2, 32, 5, 0), kts::WindowTooSmall);

  // A single fixed-seed draw is reproducible on its own.
  const auto single = kts::sample_candidate_regions(18, 36, 1, 99);
  const auto single2 = kts::sample_candidate_regions(18, 36, 1, 99);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == single2[0]);
}

TEST_CASE("weak unit evaluation dispatches on the learner kind") {
  kts::Rng rng(91);
  const kts::SpdMatrix desc = synthetic::random_spd(rng, 8, 0.5, 2.0);

  kts::WeakUnit raw = constant_unit(0.0);
  kts::WeakRegressor g;
  g.weights = Eigen::VectorXd::Constant(36, 0.1);
  g.bias = -0.2;
  raw.learner = g;
  CHECK(raw.evaluate(desc) ==
        doctest::Approx(g(kts::vectorize(desc.as_sym()))).epsilon(1e-15));

  kts::WeakUnit tangent;
  tangent.region = {0, 0, 4, 4};
  tangent.mapping = kts::Mapping::kKTangent;
  kts::WeakRegressor zero;
  zero.weights = Eigen::VectorXd::Zero(36);
  zero.bias = 1.5;
  const kts::KTangentModel model({kts::SpdMatrix::identity(8)}, {1}, {zero});
  tangent.learner = model;
  CHECK(tangent.evaluate(desc) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("boosting a separable stage drives the training error to zero") {
  const WindowSet set = separable_windows(101, 12, 12, 16, 16);
  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;
  config.rounds = 20;
  config.regions = 8;
  config.k = 2;
  config.target_fp_rate = -1.0;  // never stop early; run all rounds
  config.seed = 5;

  kts::StageStats stats;
  const kts::BoostStage stage =
      kts::logitboost_stage(set.pointers(), set.labels, config, 11, &stats);

  CHECK(stage.units.size() == static_cast<std::size_t>(stats.rounds));
  CHECK(stats.error_end <= stats.error_start);
  CHECK(stats.error_end == 0.0);
  CHECK(stats.detection_rate >= config.target_detection_rate);
  CHECK(stats.threshold == stage.threshold);

  // The recorded selection is the argmin of the recorded candidate errors,
  // ties to the lowest index.
  REQUIRE(stats.candidate_errors.size() == static_cast<std::size_t>(stats.rounds));
  for (int r = 0; r < stats.rounds; ++r) {
    const auto& errs = stats.candidate_errors[r];
    REQUIRE(errs.size() == static_cast<std::size_t>(config.regions));
    const int argmin = static_cast<int>(
        std::min_element(errs.begin(), errs.end()) - errs.begin());
    CHECK(stats.selected[r] == argmin);
  }
}

TEST_CASE("early stop triggers once the stage false-positive target is met") {
  const WindowSet set = separable_windows(102, 10, 10, 16, 16);
  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;
  config.rounds = 20;
  config.regions = 6;
  config.k = 1;
  config.target_fp_rate = 0.5;
  config.seed = 2;

  kts::StageStats stats;
  kts::logitboost_stage(set.pointers(), set.labels, config, 3, &stats);
  // Separable data clears a 50% false-positive bar long before the cap.
  CHECK(stats.rounds < 20);
  CHECK(stats.fp_rate <= 0.5);
}

TEST_CASE("stage training validates inputs") {
  const WindowSet set = separable_windows(103, 4, 4, 16, 16);
  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;
  config.rounds = 1;
  config.regions = 2;
  config.k = 1;

  CHECK_THROWS_AS(kts::logitboost_stage({}, {}, config, 0), kts::EmptyInput);

  const auto ptrs = set.pointers();
  CHECK_THROWS_AS(kts::logitboost_stage(ptrs, {1, 1}, config, 0), kts::DimensionMismatch);
  CHECK_THROWS_AS(kts::logitboost_stage(ptrs, std::vector<int>(8, 1), config, 0),
                  kts::OneClassOnly);
  CHECK_THROWS_AS(kts::logitboost_stage(ptrs, std::vector<int>(8, -1), config, 0),
                  kts::OneClassOnly);

  std::vector<int> bad_labels = set.labels;
  bad_labels[0] = 2;
  CHECK_THROWS_AS(kts::logitboost_stage(ptrs, bad_labels, config, 0), kts::Error);
}

TEST_CASE("classification contracts: empty cascade, rejection short-circuit") {
  kts::Rng rng(104);
  const kts::IntegralTensors probe = ints_of(synthetic::flat_image(rng, 16, 16, 0.05));

  kts::CascadeModel empty;
  empty.window_w = 16;
  empty.window_h = 16;
  const kts::ClassifyResult vac = kts::classify_window(empty, probe);
  CHECK(vac.accepted);
  CHECK(vac.score == 0.0);
  CHECK(vac.stages_evaluated == 0);

  // Constant-output stages make scores predictable: each unit contributes
  // 0.5 * clamp(bias).
  kts::CascadeModel model;
  model.window_w = 16;
  model.window_h = 16;
  kts::BoostStage reject_all;
  reject_all.units.push_back(constant_unit(1.0));
  reject_all.threshold = 10.0;  // 0.5 < 10: always rejects
  kts::BoostStage accept_all;
  accept_all.units.push_back(constant_unit(1.0));
  accept_all.threshold = -10.0;

  model.stages = {accept_all, reject_all, accept_all};
  const kts::ClassifyResult rejected = kts::classify_window(model, probe);
  CHECK_FALSE(rejected.accepted);
  CHECK(rejected.stages_evaluated == 2);  // third stage never runs
  CHECK(rejected.score == doctest::Approx(0.5).epsilon(1e-15));

  model.stages = {accept_all, accept_all};
  const kts::ClassifyResult accepted = kts::classify_window(model, probe);
  CHECK(accepted.accepted);
  CHECK(accepted.stages_evaluated == 2);

  // Acceptance equals the exhaustive all-stages evaluation.
  for (const auto& stages :
       {std::vector<kts::BoostStage>{accept_all, reject_all},
        std::vector<kts::BoostStage>{reject_all, accept_all},
        std::vector<kts::BoostStage>{accept_all, accept_all}}) {
    model.stages = stages;
    bool all_pass = true;
    for (const kts::BoostStage& st : stages) {
      if (kts::stage_score(st, probe, model.config.eps) < st.threshold) all_pass = false;
    }
    CHECK(kts::classify_window(model, probe).accepted == all_pass);
  }

  kts::Rng small_rng(105);
  const kts::IntegralTensors tiny = ints_of(synthetic::flat_image(small_rng, 8, 8, 0.05));
  CHECK_THROWS_AS(kts::classify_window(model, tiny), kts::WindowTooSmall);
}

TEST_CASE("cascade training: smoke run with per-stage guarantees") {
  // Positive and negative stripe amplitudes overlap, so the first stage
  // cannot reject every negative and the second stage has windows to mine.
  kts::Rng rng(106);
  std::vector<kts::GrayImage> pos, neg;
  for (int i = 0; i < 12; ++i) {
    pos.push_back(
        synthetic::stripe_image(rng, 16, 16, 0.0, 4.0, rng.uniform(0.25, 0.5), 0.02));
  }
  for (int i = 0; i < 10; ++i) {
    neg.push_back(
        synthetic::stripe_image(rng, 48, 48, 0.0, 4.0, rng.uniform(0.05, 0.35), 0.02));
  }

  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;
  config.stages = 2;
  config.rounds = 3;
  config.regions = 5;
  config.k = 2;
  config.seed = 77;

  const kts::CascadeTrainResult result = kts::train_cascade(pos, neg, config);
  CHECK_FALSE(result.insufficient_negatives);
  REQUIRE(result.model.stages.size() == 2);
  REQUIRE(result.stage_stats.size() == 2);
  for (const kts::StageStats& s : result.stage_stats) {
    CHECK(s.detection_rate >= config.target_detection_rate);
    CHECK(s.error_end <= s.error_start);
  }

  // Stage-2 positives are the same fixed crops; every one passes stage 1 by
  // the threshold rule, and acceptance sets are nested across prefixes.
  kts::CascadeModel prefix = result.model;
  prefix.stages.resize(1);
  for (int i = 0; i < 20; ++i) {
    const kts::IntegralTensors probe =
        i % 2 == 0 ? ints_of(synthetic::stripe_image(rng, 16, 16, 0.0, 4.0, 0.35, 0.01))
                   : ints_of(synthetic::flat_image(rng, 16, 16, 0.01));
    const bool full = kts::classify_window(result.model, probe).accepted;
    const bool pre = kts::classify_window(prefix, probe).accepted;
    if (full) CHECK(pre);
  }
}

TEST_CASE("cascade training is reproducible from the seed") {
  kts::Rng rng(107);
  std::vector<kts::GrayImage> pos, neg;
  for (int i = 0; i < 8; ++i) pos.push_back(synthetic::stripe_image(rng, 16, 16, 0.0, 4.0,
                                                                    0.35, 0.01));
  for (int i = 0; i < 3; ++i) neg.push_back(synthetic::flat_image(rng, 40, 40, 0.01));

  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;
  config.stages = 1;
  config.rounds = 2;
  config.regions = 4;
  config.k = 1;
  config.seed = 123;

  const auto r1 = kts::train_cascade(pos, neg, config);
  const auto r2 = kts::train_cascade(pos, neg, config);
  kts::Rng probe_rng(108);
  for (int i = 0; i < 10; ++i) {
    const kts::IntegralTensors probe =
        ints_of(synthetic::stripe_image(probe_rng, 16, 16, 0.0, 4.0, 0.3, 0.02));
    CHECK(kts::classify_window(r1.model, probe).score ==
          kts::classify_window(r2.model, probe).score);
  }
}

TEST_CASE("cascade training flags a dry negative source") {
  kts::Rng rng(109);
  std::vector<kts::GrayImage> pos;
  for (int i = 0; i < 6; ++i) pos.push_back(synthetic::stripe_image(rng, 16, 16, 0.0, 4.0,
                                                                    0.35, 0.01));
  // The only negative image is smaller than the window, so mining collects
  // nothing and training stops before the first stage.
  std::vector<kts::GrayImage> neg = {synthetic::flat_image(rng, 8, 8, 0.01)};

  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;
  config.stages = 1;
  config.rounds = 1;
  config.regions = 3;
  config.k = 1;

  const auto result = kts::train_cascade(pos, neg, config);
  CHECK(result.insufficient_negatives);
  CHECK(result.model.stages.empty());
}

TEST_CASE("cascade training validates inputs") {
  kts::Rng rng(110);
  std::vector<kts::GrayImage> pos = {synthetic::flat_image(rng, 16, 16, 0.01)};
  std::vector<kts::GrayImage> neg = {synthetic::flat_image(rng, 32, 32, 0.01)};

  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;

  CHECK_THROWS_AS(kts::train_cascade({}, neg, config), kts::EmptyInput);
  CHECK_THROWS_AS(kts::train_cascade(pos, {}, config), kts::EmptyInput);

  kts::CascadeConfig small = config;
  small.window_w = 12;
  CHECK_THROWS_AS(kts::train_cascade(pos, neg, small), kts::WindowTooSmall);

  kts::CascadeConfig mismatched = config;
  mismatched.window_w = 20;
  mismatched.window_h = 20;
  CHECK_THROWS_AS(kts::train_cascade(pos, neg, mismatched), kts::DimensionMismatch);
}

TEST_CASE("scanning visits exactly the stride grid and matches direct calls") {
  kts::Rng rng(111);
  const kts::GrayImage img = synthetic::stripe_image(rng, 40, 24, 0.0, 4.0, 0.3, 0.01);

  // An empty cascade accepts everywhere, exposing the scan geometry.
  kts::CascadeModel empty;
  empty.window_w = 16;
  empty.window_h = 16;

  const auto hits = kts::scan_image(empty, img, 8);
  // x0 in {0, 8, 16, 24}, y0 in {0, 8}.
  REQUIRE(hits.size() == 8);
  std::set<std::pair<int, int>> origins;
  for (const auto& [region, score] : hits) {
    CHECK(region.w == 16);
    CHECK(region.h == 16);
    CHECK(score == 0.0);
    origins.insert({region.x0, region.y0});
  }
  CHECK(origins == std::set<std::pair<int, int>>{
                       {0, 0}, {8, 0}, {16, 0}, {24, 0}, {0, 8}, {8, 8}, {16, 8}, {24, 8}});

  // Stride as large as the image keeps only the top-left window.
  CHECK(kts::scan_image(empty, img, 40).size() == 1);

  CHECK_THROWS_AS(kts::scan_image(empty, synthetic::flat_image(rng, 10, 10, 0.01), 4),
                  kts::ImageTooSmall);
  CHECK_THROWS_AS(kts::scan_image(empty, img, 0), kts::Error);

  // A trained model scans to the same accept/score results as classifying
  // each crop independently.
  std::vector<kts::GrayImage> pos, neg;
  for (int i = 0; i < 8; ++i) pos.push_back(synthetic::stripe_image(rng, 16, 16, 0.0, 4.0,
                                                                    0.35, 0.01));
  for (int i = 0; i < 3; ++i) neg.push_back(synthetic::flat_image(rng, 32, 32, 0.01));
  kts::CascadeConfig config;
  config.window_w = 16;
  config.window_h = 16;
  config.stages = 1;
  config.rounds = 2;
  config.regions = 4;
  config.k = 1;
  config.seed = 9;
  const kts::CascadeModel model = kts::train_cascade(pos, neg, config).model;

  const auto scan_hits = kts::scan_image(model, img, 8);
  std::set<std::pair<int, int>> scanned;
  for (const auto& [region, score] : scan_hits) {
    const kts::ClassifyResult direct =
        kts::classify_window(model, ints_of(img.crop(region.x0, region.y0, 16, 16)));
    CHECK(direct.accepted);
    CHECK(direct.score == score);
    scanned.insert({region.x0, region.y0});
  }
  for (int y0 = 0; y0 + 16 <= 24; y0 += 8) {
    for (int x0 = 0; x0 + 16 <= 40; x0 += 8) {
      const bool direct =
          kts::classify_window(model, ints_of(img.crop(x0, y0, 16, 16))).accepted;
      CHECK(direct == scanned.contains({x0, y0}));
    }
  }
}
