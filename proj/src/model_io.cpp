#include "kts/model_io.hpp"

#include <json.hpp>

#include "kts/io_util.hpp"

namespace kts {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("model: matrix must be a non-empty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j.at(i);
    if (!row.is_array() || row.size() != cols) {
      throw ParseError("model: ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("model: vector must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

json regressor_to_json(const WeakRegressor& g) {
  return json{{"weights", vector_to_json(g.weights)}, {"bias", g.bias}};
}

WeakRegressor regressor_from_json(const json& j) {
  WeakRegressor g;
  g.weights = vector_from_json(j.at("weights"));
  g.bias = j.at("bias").get<double>();
  return g;
}

json region_to_json(const Region& r) {
  return json{{"x0", r.x0}, {"y0", r.y0}, {"w", r.w}, {"h", r.h}};
}

Region region_from_json(const json& j) {
  return Region{j.at("x0").get<int>(), j.at("y0").get<int>(), j.at("w").get<int>(),
                j.at("h").get<int>()};
}

json ktangent_to_json(const KTangentModel& m) {
  json poles = json::array();
  for (int i = 0; i < m.k(); ++i) poles.push_back(matrix_to_json(m.pole(i).matrix()));
  json regressors = json::array();
  for (const WeakRegressor& g : m.regressors()) regressors.push_back(regressor_to_json(g));
  return json{{"poles", std::move(poles)}, {"counts", m.counts()},
              {"regressors", std::move(regressors)}};
}

KTangentModel ktangent_from_json(const json& j) {
  std::vector<SpdMatrix> poles;
  for (const json& p : j.at("poles")) poles.emplace_back(matrix_from_json(p));
  std::vector<int> counts = j.at("counts").get<std::vector<int>>();
  std::vector<WeakRegressor> regressors;
  for (const json& g : j.at("regressors")) regressors.push_back(regressor_from_json(g));
  return KTangentModel(std::move(poles), std::move(counts), std::move(regressors));
}

json unit_to_json(const WeakUnit& u) {
  json j{{"region", region_to_json(u.region)}, {"mapping", to_string(u.mapping)}};
  if (const KTangentModel* m = std::get_if<KTangentModel>(&u.learner)) {
    j["model"] = ktangent_to_json(*m);
  } else {
    j["regressor"] = regressor_to_json(std::get<WeakRegressor>(u.learner));
  }
  return j;
}

WeakUnit unit_from_json(const json& j) {
  WeakUnit u;
  u.region = region_from_json(j.at("region"));
  u.mapping = mapping_from_string(j.at("mapping").get<std::string>());
  if (j.contains("model")) {
    u.learner = ktangent_from_json(j.at("model"));
  } else {
    u.learner = regressor_from_json(j.at("regressor"));
  }
  return u;
}

json config_to_json(const CascadeConfig& c) {
  return json{{"window_w", c.window_w},
              {"window_h", c.window_h},
              {"stages", c.stages},
              {"rounds", c.rounds},
              {"regions", c.regions},
              {"k", c.k},
              {"ridge", c.ridge},
              {"eps", c.eps},
              {"target_detection_rate", c.target_detection_rate},
              {"target_fp_rate", c.target_fp_rate},
              {"neg_quota_factor", c.neg_quota_factor},
              {"seed", c.seed},
              {"mapping", to_string(c.mapping)}};
}

CascadeConfig config_from_json(const json& j) {
  CascadeConfig c;
  c.window_w = j.at("window_w").get<int>();
  c.window_h = j.at("window_h").get<int>();
  c.stages = j.at("stages").get<int>();
  c.rounds = j.at("rounds").get<int>();
  c.regions = j.at("regions").get<int>();
  c.k = j.at("k").get<int>();
  c.ridge = j.at("ridge").get<double>();
  c.eps = j.at("eps").get<double>();
  c.target_detection_rate = j.at("target_detection_rate").get<double>();
  c.target_fp_rate = j.at("target_fp_rate").get<double>();
  c.neg_quota_factor = j.at("neg_quota_factor").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.mapping = mapping_from_string(j.at("mapping").get<std::string>());
  return c;
}

}  // namespace

std::string model_to_json(const CascadeModel& model) {
  json stages = json::array();
  for (const BoostStage& s : model.stages) {
    json units = json::array();
    for (const WeakUnit& u : s.units) units.push_back(unit_to_json(u));
    stages.push_back(json{{"threshold", s.threshold}, {"units", std::move(units)}});
  }
  const json doc{{"schema_version", kModelSchemaVersion},
                 {"kind", "ktangent_cascade"},
                 {"window_w", model.window_w},
                 {"window_h", model.window_h},
                 {"config", config_to_json(model.config)},
                 {"stages", std::move(stages)}};
  return doc.dump(2) + "\n";
}

CascadeModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version > kModelSchemaVersion || version < 1) {
      throw ParseError("model: unsupported schema_version " + std::to_string(version));
    }
    if (doc.at("kind").get<std::string>() != "ktangent_cascade") {
      throw ParseError("model: unknown kind");
    }
    CascadeModel model;
    model.window_w = doc.at("window_w").get<int>();
    model.window_h = doc.at("window_h").get<int>();
    model.config = config_from_json(doc.at("config"));
    for (const json& s : doc.at("stages")) {
      BoostStage stage;
      stage.threshold = s.at("threshold").get<double>();
      for (const json& u : s.at("units")) stage.units.push_back(unit_from_json(u));
      model.stages.push_back(std::move(stage));
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

void save_model(const CascadeModel& model, const std::string& path) {
  write_file_atomic(path, model_to_json(model));
}

CascadeModel load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

}  // namespace kts
