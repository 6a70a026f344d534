// Copyright 2026 The VoiceBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bundle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace voicebench {

using nlohmann::json;

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Voice: return "voice";
    case Variant::VoiceDemo: return "voice_demo";
    case Variant::VoiceSymptoms: return "voice_symptoms";
    case Variant::VoiceDemoSymptoms: return "voice_demo_symptoms";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  const std::string n = lowercase(name);
  if (n == "voice") return Variant::Voice;
  if (n == "voice_demo" || n == "voice+demographics") return Variant::VoiceDemo;
  if (n == "voice_symptoms" || n == "voice+symptoms") return Variant::VoiceSymptoms;
  if (n == "voice_demo_symptoms" || n == "voice+demographics+symptoms") {
    return Variant::VoiceDemoSymptoms;
  }
  fail(ErrorCode::Config, "unknown input variant '" + name + "'");
}

bool variant_uses_demographics(Variant v) {
  return v == Variant::VoiceDemo || v == Variant::VoiceDemoSymptoms;
}

bool variant_uses_symptoms(Variant v) {
  return v == Variant::VoiceSymptoms || v == Variant::VoiceDemoSymptoms;
}

std::string make_model_id(Algorithm a, FeatureKind f, Variant v) {
  return std::string(algorithm_name(a)) + "_" + feature_kind_name(f) + "_" + variant_name(v);
}

namespace {

json doubles_to_json(const std::vector<double>& v) {
  return json{{"n", v.size()}, {"b64", encode_doubles(v.data(), v.size())}};
}

std::vector<double> doubles_from_json(const json& j) {
  std::vector<double> v = decode_doubles(j.at("b64").get<std::string>());
  if (v.size() != j.at("n").get<size_t>()) fail(ErrorCode::Format, "bundle: numeric block size mismatch");
  return v;
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"b64", encode_doubles(m.data.data(), m.data.size())}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<size_t>(), j.at("cols").get<size_t>());
  m.data = decode_doubles(j.at("b64").get<std::string>());
  if (m.data.size() != m.rows * m.cols) fail(ErrorCode::Format, "bundle: matrix block size mismatch");
  return m;
}

json imputer_to_json(const ImputerState& s) {
  return json{{"strategy", s.strategy == ImputeStrategy::Mean ? "mean" : "zero"},
              {"fill", doubles_to_json(s.fill)}};
}

ImputerState imputer_from_json(const json& j) {
  ImputerState s;
  s.strategy = j.at("strategy") == "mean" ? ImputeStrategy::Mean : ImputeStrategy::Zero;
  s.fill = doubles_from_json(j.at("fill"));
  return s;
}

json scaler_to_json(const ScalerState& s) {
  return json{{"mean", doubles_to_json(s.mean)}, {"stddev", doubles_to_json(s.stddev)}};
}

ScalerState scaler_from_json(const json& j) {
  ScalerState s;
  s.mean = doubles_from_json(j.at("mean"));
  s.stddev = doubles_from_json(j.at("stddev"));
  return s;
}

json pipeline_to_json(const FittedPipeline& p) {
  json j{{"feature_set", feature_kind_name(p.feature_set)},
         {"target_frames", p.target_frames},
         {"audio_imputer", imputer_to_json(p.audio_imputer)},
         {"audio_scaler", scaler_to_json(p.audio_scaler)},
         {"selector",
          {{"selected", p.selector.selected},
           {"threshold", p.selector.threshold},
           {"importances", doubles_to_json(p.selector.importances)}}},
         {"has_demo", p.has_demo}};
  if (p.has_demo) {
    j["demo_imputer"] = imputer_to_json(p.demo_imputer);
    j["demo_scaler"] = scaler_to_json(p.demo_scaler);
  }
  return j;
}

FittedPipeline pipeline_from_json(const json& j) {
  FittedPipeline p;
  p.feature_set = feature_kind_from_name(j.at("feature_set").get<std::string>());
  p.target_frames = j.at("target_frames").get<int>();
  p.audio_imputer = imputer_from_json(j.at("audio_imputer"));
  p.audio_scaler = scaler_from_json(j.at("audio_scaler"));
  p.selector.selected = j.at("selector").at("selected").get<std::vector<int>>();
  p.selector.threshold = j.at("selector").at("threshold").get<double>();
  p.selector.importances = doubles_from_json(j.at("selector").at("importances"));
  p.has_demo = j.at("has_demo").get<bool>();
  if (p.has_demo) {
    p.demo_imputer = imputer_from_json(j.at("demo_imputer"));
    p.demo_scaler = scaler_from_json(j.at("demo_scaler"));
  }
  return p;
}

json model_to_json(const Model& model) {
  switch (model.algorithm()) {
    case Algorithm::LogReg: {
      const auto& m = static_cast<const LogRegModel&>(model);
      const char* penalty = "l2";
      switch (m.params.penalty) {
        case LogRegParams::Penalty::L1: penalty = "l1"; break;
        case LogRegParams::Penalty::L2: penalty = "l2"; break;
        case LogRegParams::Penalty::ElasticNet: penalty = "elasticnet"; break;
        case LogRegParams::Penalty::None: penalty = "none"; break;
      }
      return json{{"kind", "logreg"},
                  {"weights", doubles_to_json(m.weights)},
                  {"intercept", doubles_to_json({m.intercept})},
                  {"penalty", penalty},
                  {"C", m.params.C},
                  {"max_iterations", m.params.max_iterations},
                  {"l1_ratio", m.params.l1_ratio},
                  {"solver", m.params.solver == LogRegParams::Solver::Newton ? "newton" : "proximal"},
                  {"iterations", m.iterations},
                  {"converged", m.converged}};
    }
    case Algorithm::Svm: {
      const auto& m = static_cast<const SvmModel&>(model);
      const char* kernel = "rbf";
      switch (m.params.kernel) {
        case SvmParams::Kernel::Linear: kernel = "linear"; break;
        case SvmParams::Kernel::Poly: kernel = "polynomial"; break;
        case SvmParams::Kernel::Rbf: kernel = "rbf"; break;
        case SvmParams::Kernel::Sigmoid: kernel = "sigmoid"; break;
      }
      return json{{"kind", "svm"},
                  {"kernel", kernel},
                  {"C", m.params.C},
                  {"degree", m.params.degree},
                  {"gamma_value", doubles_to_json({m.gamma_value})},
                  {"bias", doubles_to_json({m.bias})},
                  {"dual_coef", doubles_to_json(m.dual_coef)},
                  {"support_vectors", matrix_to_json(m.support_vectors)},
                  {"feature_count", m.feature_count},
                  {"iterations", m.iterations},
                  {"converged", m.converged}};
    }
    case Algorithm::Mlp: {
      const auto& m = static_cast<const MlpModel&>(model);
      return json{{"kind", "mlp"},
                  {"sizes", m.net.sizes},
                  {"activation", m.net.activation == MlpParams::Activation::Relu ? "relu" : "tanh"},
                  {"params", doubles_to_json(m.net.params)},
                  {"solver", m.params.solver == MlpParams::Solver::Adam ? "adam" : "sgd"},
                  {"seed", m.seed},
                  {"epochs_run", m.epochs_run},
                  {"early_stopped", m.early_stopped}};
    }
  }
  fail(ErrorCode::Internal, "unknown model kind");
}

std::unique_ptr<Model> model_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "logreg") {
    auto m = std::make_unique<LogRegModel>();
    m->weights = doubles_from_json(j.at("weights"));
    m->intercept = doubles_from_json(j.at("intercept")).at(0);
    const std::string penalty = j.at("penalty").get<std::string>();
    if (penalty == "l1") m->params.penalty = LogRegParams::Penalty::L1;
    else if (penalty == "l2") m->params.penalty = LogRegParams::Penalty::L2;
    else if (penalty == "elasticnet") m->params.penalty = LogRegParams::Penalty::ElasticNet;
    else m->params.penalty = LogRegParams::Penalty::None;
    m->params.C = j.at("C").get<double>();
    m->params.max_iterations = j.at("max_iterations").get<int>();
    m->params.l1_ratio = j.at("l1_ratio").get<double>();
    m->params.solver = j.at("solver") == "newton" ? LogRegParams::Solver::Newton
                                                  : LogRegParams::Solver::Proximal;
    m->iterations = j.at("iterations").get<int>();
    m->converged = j.at("converged").get<bool>();
    return m;
  }
  if (kind == "svm") {
    auto m = std::make_unique<SvmModel>();
    const std::string kernel = j.at("kernel").get<std::string>();
    if (kernel == "linear") m->params.kernel = SvmParams::Kernel::Linear;
    else if (kernel == "polynomial") m->params.kernel = SvmParams::Kernel::Poly;
    else if (kernel == "sigmoid") m->params.kernel = SvmParams::Kernel::Sigmoid;
    else m->params.kernel = SvmParams::Kernel::Rbf;
    m->params.C = j.at("C").get<double>();
    m->params.degree = j.at("degree").get<int>();
    m->gamma_value = doubles_from_json(j.at("gamma_value")).at(0);
    m->params.gamma = {SvmParams::Gamma::Kind::Value, m->gamma_value};
    m->bias = doubles_from_json(j.at("bias")).at(0);
    m->dual_coef = doubles_from_json(j.at("dual_coef"));
    m->support_vectors = matrix_from_json(j.at("support_vectors"));
    m->feature_count = j.at("feature_count").get<size_t>();
    m->iterations = j.at("iterations").get<int>();
    m->converged = j.at("converged").get<bool>();
    return m;
  }
  if (kind == "mlp") {
    auto m = std::make_unique<MlpModel>();
    m->net.sizes = j.at("sizes").get<std::vector<int>>();
    m->net.activation = j.at("activation") == "relu" ? MlpParams::Activation::Relu
                                                     : MlpParams::Activation::Tanh;
    m->net.params = doubles_from_json(j.at("params"));
    m->params.activation = m->net.activation;
    m->params.solver = j.at("solver") == "adam" ? MlpParams::Solver::Adam : MlpParams::Solver::Sgd;
    m->seed = j.at("seed").get<uint64_t>();
    m->epochs_run = j.at("epochs_run").get<int>();
    m->early_stopped = j.at("early_stopped").get<bool>();
    return m;
  }
  fail(ErrorCode::Format, "bundle: unknown model kind '" + kind + "'");
}

}  // namespace

void save_bundle(const ModelBundle& bundle, const std::string& path) {
  json body{{"schema_version", bundle.schema_version},
            {"model_id", bundle.model_id},
            {"algorithm", algorithm_name(bundle.algorithm)},
            {"feature_set", feature_kind_name(bundle.feature_set)},
            {"variant", variant_name(bundle.variant)},
            {"winning_params", bundle.winning_params},
            {"seed", bundle.seed},
            {"deviation_notes", bundle.deviation_notes},
            {"demo_names", bundle.demo_names},
            {"pipeline", pipeline_to_json(bundle.pipeline)},
            {"model", model_to_json(*bundle.model)}};
  const std::string text = body.dump(2);

  char checksum[16];
  snprintf(checksum, sizeof checksum, "%08x", crc32(text.data(), text.size()));

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << "voicebench-bundle schema=" << bundle.schema_version << '\n';
  out << "checksum=" << checksum << '\n';
  out << text << '\n';
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::string magic, checksum_line;
  if (!std::getline(in, magic) || !std::getline(in, checksum_line)) {
    fail(ErrorCode::Format, path + ": not a bundle file");
  }
  const std::string prefix = "voicebench-bundle schema=";
  if (magic.rfind(prefix, 0) != 0) fail(ErrorCode::Format, path + ": not a bundle file");
  const int schema = std::stoi(magic.substr(prefix.size()));
  if (schema != kBundleSchemaVersion) {
    fail(ErrorCode::Version, path + ": bundle schema " + std::to_string(schema) +
                                 " is not supported (this build reads schema " +
                                 std::to_string(kBundleSchemaVersion) + ")");
  }
  if (checksum_line.rfind("checksum=", 0) != 0) fail(ErrorCode::Format, path + ": missing checksum");

  std::ostringstream rest;
  rest << in.rdbuf();
  std::string text = rest.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();

  char expect[16];
  snprintf(expect, sizeof expect, "%08x", crc32(text.data(), text.size()));
  if (checksum_line.substr(9) != expect) {
    fail(ErrorCode::Checksum, path + ": checksum mismatch, bundle is corrupted");
  }

  json body;
  try {
    body = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, path + ": " + e.what());
  }

  ModelBundle bundle;
  bundle.schema_version = body.at("schema_version").get<int>();
  bundle.model_id = body.at("model_id").get<std::string>();
  bundle.algorithm = algorithm_from_name(body.at("algorithm").get<std::string>());
  bundle.feature_set = feature_kind_from_name(body.at("feature_set").get<std::string>());
  bundle.variant = variant_from_name(body.at("variant").get<std::string>());
  bundle.winning_params = body.at("winning_params");
  bundle.seed = body.at("seed").get<uint64_t>();
  bundle.deviation_notes = body.at("deviation_notes").get<std::vector<std::string>>();
  bundle.demo_names = body.at("demo_names").get<std::vector<std::string>>();
  bundle.pipeline = pipeline_from_json(body.at("pipeline"));
  bundle.model = model_from_json(body.at("model"));
  return bundle;
}

BundlePredictions bundle_predict(const ModelBundle& bundle, const CellInput& input,
                                 const std::vector<size_t>& rows) {
  const Matrix x = apply_pipeline(bundle.pipeline, input, rows);
  BundlePredictions out;
  out.scores = bundle.model->decision_scores(x);
  out.labels.resize(out.scores.size());
  for (size_t i = 0; i < out.scores.size(); ++i) out.labels[i] = out.scores[i] >= 0.0 ? 1 : 0;
  return out;
}

}  // namespace voicebench
