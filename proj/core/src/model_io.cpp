#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polarkit/classifiers.hpp"
#include "polarkit/error.hpp"

namespace polarkit {

namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;

json params_to_json(const Model::Parameters& params) {
  return std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearSvmModel>) {
          return {{"weights", m.weights}, {"bias", m.bias}};
        } else if constexpr (std::is_same_v<M, KernelSvmModel>) {
          return {{"dims", m.dims}, {"support", m.support}, {"coef", m.coef},
                  {"bias", m.bias}, {"gamma", m.gamma}};
        } else if constexpr (std::is_same_v<M, ForestModel>) {
          json trees = json::array();
          for (const auto& tree : m.trees) {
            json nodes = json::array();
            for (const auto& n : tree)
              nodes.push_back({n.feature, n.threshold, n.left, n.right, n.positive_fraction});
            trees.push_back(std::move(nodes));
          }
          return {{"trees", std::move(trees)}};
        } else if constexpr (std::is_same_v<M, MlpModel>) {
          return {{"inputs", m.inputs}, {"hidden", m.hidden}, {"w1", m.w1},
                  {"b1", m.b1},         {"w2", m.w2},         {"b2", m.b2}};
        } else {
          std::vector<std::string> labels;
          for (auto l : m.labels) labels.emplace_back(to_string(l));
          return {{"k", m.k}, {"dims", m.dims}, {"points", m.points}, {"labels", labels},
                  {"ids", m.ids}};
        }
      },
      params);
}

Model::Parameters params_from_json(ClassifierKind kind, const json& j) {
  switch (kind) {
    case ClassifierKind::LinearSVM:
      return LinearSvmModel{j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>()};
    case ClassifierKind::GaussianSVM:
      return KernelSvmModel{j.at("dims").get<std::size_t>(), j.at("support").get<std::vector<double>>(),
                            j.at("coef").get<std::vector<double>>(), j.at("bias").get<double>(),
                            j.at("gamma").get<double>()};
    case ClassifierKind::RandomForest: {
      ForestModel f;
      for (const auto& tree : j.at("trees")) {
        std::vector<TreeNode> nodes;
        for (const auto& n : tree)
          nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<std::uint32_t>(),
                           n.at(3).get<std::uint32_t>(), n.at(4).get<double>()});
        f.trees.push_back(std::move(nodes));
      }
      return f;
    }
    case ClassifierKind::MLP: {
      MlpModel m;
      m.inputs = j.at("inputs").get<std::size_t>();
      m.hidden = j.at("hidden").get<std::size_t>();
      m.w1 = j.at("w1").get<std::vector<double>>();
      m.b1 = j.at("b1").get<std::vector<double>>();
      m.w2 = j.at("w2").get<std::vector<double>>();
      m.b2 = j.at("b2").get<double>();
      return m;
    }
    case ClassifierKind::KNN: {
      KnnModel m;
      m.k = j.at("k").get<std::size_t>();
      m.dims = j.at("dims").get<std::size_t>();
      m.points = j.at("points").get<std::vector<double>>();
      for (const auto& l : j.at("labels")) {
        auto s = parse_sentiment(l.get<std::string>());
        if (!s) throw Error(Errc::MalformedModel, "bad label in KNN model");
        m.labels.push_back(*s);
      }
      m.ids = j.at("ids").get<std::vector<std::string>>();
      return m;
    }
  }
  throw Error(Errc::MalformedModel, "unknown classifier kind");
}

}  // namespace

std::string model_to_json(const Model& model) {
  json j;
  j["format"] = "polarkit-model";
  j["version"] = kModelVersion;
  j["kind"] = to_string(model.kind());
  j["dims"] = model.dims();
  j["standardizer"] = {{"mean", model.standardizer().mean}, {"scale", model.standardizer().scale}};
  j["params"] = params_to_json(model.parameters());
  return j.dump();
}

Model model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "polarkit-model") throw Error(Errc::MalformedModel, "not a model file");
    if (j.at("version").get<int>() != kModelVersion)
      throw Error(Errc::MalformedModel, "unsupported model version");
    auto kind = parse_classifier(j.at("kind").get<std::string>());
    if (!kind) throw Error(Errc::MalformedModel, "unknown classifier kind");
    Standardizer st{j.at("standardizer").at("mean").get<std::vector<double>>(),
                    j.at("standardizer").at("scale").get<std::vector<double>>()};
    const auto dims = j.at("dims").get<std::size_t>();
    if (st.mean.size() != dims || st.scale.size() != dims)
      throw Error(Errc::MalformedModel, "standardizer size disagrees with dims");
    return Model(dims, std::move(st), params_from_json(*kind, j.at("params")));
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedModel, std::string("malformed model JSON: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write model file " + path.string());
  out << model_to_json(model) << '\n';
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open model file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace polarkit
