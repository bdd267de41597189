#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kts/experiments.hpp"
#include "kts/io_util.hpp"
#include "kts/model_io.hpp"

namespace {

struct CommonOpts {
  std::string manifest;
  std::string model_path;
  std::string out;
  std::string mapping = "k_tangent";
  std::string ks = "1,2,3,4,5";
  std::size_t eval_negatives = 0;
  kts::CascadeConfig config;
};

/// Training settings shared by train/exp-k-sweep/exp-mappings. They live on
/// the top-level app (with fallthrough) so a single --config file can set
/// them with flat `key = value` lines regardless of the subcommand.
void add_config_flags(CLI::App& app, CommonOpts& o) {
  app.add_option("--k", o.config.k, "Tangent spaces per weak learner");
  app.add_option("--stages", o.config.stages, "Maximum cascade stages");
  app.add_option("--rounds", o.config.rounds, "Maximum boosting rounds per stage");
  app.add_option("--regions", o.config.regions, "Candidate subwindows per round");
  app.add_option("--ridge", o.config.ridge, "Weak-regressor ridge (negative = auto)");
  app.add_option("--eps", o.config.eps, "Descriptor regularization");
  app.add_option("--seed", o.config.seed, "Global seed; all randomness derives from it");
  app.add_option("--detection-rate", o.config.target_detection_rate,
                 "Per-stage positive pass-rate target");
  app.add_option("--fp-rate", o.config.target_fp_rate,
                 "Per-stage false-positive rate for early stop");
  app.add_option("--neg-quota-factor", o.config.neg_quota_factor,
                 "Mined negatives per stage as a multiple of the positives");
  app.add_option("--mapping", o.mapping,
                 "Descriptor mapping: raw_vector, identity_pole, karcher_pole, k_tangent");
  app.set_config("--config", "", "Config file with the same keys as the flags (key = value)");
}

std::vector<int> parse_k_list(const std::string& s) {
  std::vector<int> ks;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      ks.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw kts::ParseError("bad K list entry '" + item + "'");
    }
  }
  if (ks.empty()) throw kts::ParseError("empty K list");
  return ks;
}

std::vector<double> read_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kts::MissingFile("cannot open score file " + path);
  std::vector<double> scores;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    try {
      scores.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw kts::ParseError(path + " line " + std::to_string(line_no) + ": not a number");
    }
  }
  if (scores.empty()) throw kts::EmptyInput("no scores in " + path);
  return scores;
}

kts::Dataset load(const CommonOpts& o) {
  return kts::load_dataset(kts::load_manifest(o.manifest));
}

int run_train(CommonOpts& o) {
  o.config.mapping = kts::mapping_from_string(o.mapping);
  const kts::Dataset data = load(o);
  kts::CascadeConfig config = o.config;
  config.window_w = data.window_w;
  config.window_h = data.window_h;
  const kts::CascadeTrainResult result =
      kts::train_cascade(data.pos_windows, data.neg_images, config);
  kts::save_model(result.model, o.out);
  for (std::size_t s = 0; s < result.stage_stats.size(); ++s) {
    const kts::StageStats& st = result.stage_stats[s];
    std::printf("stage %zu: rounds=%d detection=%.4f fp=%.4f threshold=%g\n", s, st.rounds,
                st.detection_rate, st.fp_rate, st.threshold);
  }
  if (result.insufficient_negatives) {
    std::printf("warning: negative mining exhausted; %zu stage(s) trained\n",
                result.model.stages.size());
  }
  std::printf("model written to %s\n", o.out.c_str());
  return 0;
}

int run_eval(CommonOpts& o) {
  const kts::CascadeModel model = kts::load_model(o.model_path);
  const kts::Dataset data = load(o);
  const kts::EvalScores scores = kts::score_dataset(model, data, o.eval_negatives);
  const kts::DetCurve curve = kts::compute_det(scores.pos, scores.neg);
  kts::write_det_csv(curve, o.out);
  std::printf("area_under_det=%.6f over %zu positives, %zu negatives; curve written to %s\n",
              kts::area_under_det(curve), scores.pos.size(), scores.neg.size(), o.out.c_str());
  return 0;
}

int run_k_sweep(CommonOpts& o) {
  const kts::Dataset data = load(o);
  const std::vector<int> ks = parse_k_list(o.ks);
  const auto results = kts::run_experiment_k_sweep(data, ks, o.config, o.eval_negatives);
  for (const auto& [k, run] : results) {
    const std::string path = o.out + "k" + std::to_string(k) + ".csv";
    kts::write_det_csv(run.curve, path);
    std::printf("K=%d: area_under_det=%.6f -> %s%s\n", k, run.auc, path.c_str(),
                run.insufficient_negatives ? " (negative mining exhausted)" : "");
  }
  return 0;
}

int run_mappings(CommonOpts& o) {
  const kts::Dataset data = load(o);
  const auto results = kts::run_experiment_mappings(data, o.config, o.eval_negatives);
  for (const auto& [mode, run] : results) {
    const std::string path = o.out + kts::to_string(mode) + ".csv";
    kts::write_det_csv(run.curve, path);
    std::printf("%s: area_under_det=%.6f -> %s%s\n", kts::to_string(mode).c_str(), run.auc,
                path.c_str(), run.insufficient_negatives ? " (negative mining exhausted)" : "");
  }
  return 0;
}

int run_det_csv(const std::string& pos_path, const std::string& neg_path,
                const std::string& out) {
  const kts::DetCurve curve =
      kts::compute_det(read_score_file(pos_path), read_score_file(neg_path));
  kts::write_det_csv(curve, out);
  std::printf("area_under_det=%.6f; curve written to %s\n", kts::area_under_det(curve),
              out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariance-descriptor detector with k-tangent-space weak learners"};
  app.require_subcommand(1);
  app.fallthrough();  // lets the global flags below appear after the subcommand

  CommonOpts opts;
  std::string pos_scores, neg_scores;
  add_config_flags(app, opts);

  CLI::App* train = app.add_subcommand("train", "Train a cascade from a dataset manifest");
  train->add_option("--manifest", opts.manifest, "Dataset manifest")->required();
  train->add_option("--out", opts.out, "Output model file")->required();

  CLI::App* eval = app.add_subcommand("eval", "Score a dataset under a model, emit a DET CSV");
  eval->add_option("--manifest", opts.manifest, "Dataset manifest")->required();
  eval->add_option("--model", opts.model_path, "Trained model file")->required();
  eval->add_option("--out", opts.out, "Output CSV file")->required();
  eval->add_option("--eval-negatives", opts.eval_negatives,
                   "Negative windows to sample (0 = twice the positives)");

  CLI::App* sweep = app.add_subcommand(
      "exp-k-sweep", "Train and evaluate one detector per tangent-space count");
  sweep->add_option("--manifest", opts.manifest, "Dataset manifest")->required();
  sweep->add_option("--out", opts.out, "Output CSV path prefix")->required();
  sweep->add_option("--ks", opts.ks, "Comma-separated K values (default 1,2,3,4,5)");
  sweep->add_option("--eval-negatives", opts.eval_negatives,
                    "Negative windows to sample (0 = twice the positives)");

  CLI::App* mappings = app.add_subcommand(
      "exp-mappings", "Train and evaluate the four descriptor-mapping variants");
  mappings->add_option("--manifest", opts.manifest, "Dataset manifest")->required();
  mappings->add_option("--out", opts.out, "Output CSV path prefix")->required();
  mappings->add_option("--eval-negatives", opts.eval_negatives,
                       "Negative windows to sample (0 = twice the positives)");

  CLI::App* det = app.add_subcommand("det-csv", "DET curve from plain score files");
  det->add_option("--pos", pos_scores, "Positive scores, one per line")->required();
  det->add_option("--neg", neg_scores, "Negative scores, one per line")->required();
  det->add_option("--out", opts.out, "Output CSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return run_train(opts);
    if (eval->parsed()) return run_eval(opts);
    if (sweep->parsed()) return run_k_sweep(opts);
    if (mappings->parsed()) return run_mappings(opts);
    if (det->parsed()) return run_det_csv(pos_scores, neg_scores, opts.out);
  } catch (const kts::Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "E_INTERNAL: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
