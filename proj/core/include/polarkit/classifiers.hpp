#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polarkit/corpus.hpp"
#include "polarkit/lexicon.hpp"
#include "polarkit/vectors.hpp"

namespace polarkit {

/// Dense row-major N x D design matrix with binary labels.
struct Dataset {
  std::size_t dims = 0;
  std::vector<double> features;
  std::vector<Sentiment> labels;
  std::vector<std::string> ids;

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dims, dims};
  }
  /// Appends one example; the first row fixes `dims`.
  void add(std::span<const double> x, Sentiment label, std::string id);
  /// Throws Error{DimensionMismatch} or Error{NonFiniteFeature}.
  void validate() const;
  bool has_both_labels() const;
};

enum class ClassifierKind { LinearSVM, GaussianSVM, RandomForest, MLP, KNN };

inline constexpr ClassifierKind kAllClassifiers[] = {
    ClassifierKind::LinearSVM, ClassifierKind::GaussianSVM, ClassifierKind::RandomForest,
    ClassifierKind::MLP, ClassifierKind::KNN};

/// "linear_svm", "gaussian_svm", "random_forest", "mlp", "knn".
std::string_view to_string(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> parse_classifier(std::string_view text) noexcept;

/// Hinge loss + L2, Pegasos-style stochastic subgradient steps of 1/(lambda t).
struct LinearSvmParams {
  double lambda = 1e-3;
  std::size_t epochs = 200;
};

/// RBF kernel, SMO (pairwise dual coordinate) solver.
struct GaussianSvmParams {
  double c = 1.0;
  std::optional<double> gamma;  // default 1 / D
  double tolerance = 1e-3;
  std::size_t max_iterations = 100000;
};

struct RandomForestParams {
  std::size_t trees = 100;
  std::size_t max_depth = 16;
  std::size_t features_per_split = 0;  // 0 means ceil(sqrt(D))
  std::size_t min_samples_split = 2;
  std::size_t threads = 0;             // 0 means hardware concurrency
};

/// One ReLU hidden layer, logistic output, cross-entropy, per-example SGD.
struct MlpParams {
  std::size_t hidden = 64;
  std::size_t epochs = 100;
  double learning_rate = 0.01;
};

struct KnnParams {
  std::size_t k = 5;
};

using Hyperparameters =
    std::variant<LinearSvmParams, GaussianSvmParams, RandomForestParams, MlpParams, KnnParams>;

struct ClassifierSpec {
  Hyperparameters params;
  std::uint64_t seed = 0;

  ClassifierKind kind() const noexcept { return static_cast<ClassifierKind>(params.index()); }
  /// Throws Error{InvalidHyperparameter}.
  void validate() const;
  static ClassifierSpec defaults(ClassifierKind kind, std::uint64_t seed = 0);
};

/// Per-feature z-scoring fit on training data. Zero-variance features use a
/// unit divisor.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Dataset& data);
  std::vector<double> apply(std::span<const double> x) const;
};

struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct KernelSvmModel {
  std::size_t dims = 0;
  std::vector<double> support;  // row-major support vectors
  std::vector<double> coef;     // alpha_i * y_i
  double bias = 0.0;
  double gamma = 1.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double positive_fraction = 0.0;
};

struct ForestModel {
  std::vector<std::vector<TreeNode>> trees;
};

struct MlpModel {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x inputs
  std::vector<double> b1;
  std::vector<double> w2;  // hidden
  double b2 = 0.0;

  /// P(Positive | x).
  double probability(std::span<const double> x) const;
  /// Cross-entropy against target in {0, 1}.
  double loss(std::span<const double> x, double target) const;
  /// Gradient of loss() with the same layout as this model.
  MlpModel gradient(std::span<const double> x, double target) const;

  std::size_t parameter_count() const noexcept { return w1.size() + b1.size() + w2.size() + 1; }
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;
};

struct KnnModel {
  std::size_t k = 5;
  std::size_t dims = 0;
  std::vector<double> points;
  std::vector<Sentiment> labels;
  std::vector<std::string> ids;
};

class Model {
 public:
  using Parameters = std::variant<LinearSvmModel, KernelSvmModel, ForestModel, MlpModel, KnnModel>;

  Model(std::size_t dims, Standardizer standardizer, Parameters params)
      : dims_(dims), standardizer_(std::move(standardizer)), params_(std::move(params)) {}

  ClassifierKind kind() const noexcept { return static_cast<ClassifierKind>(params_.index()); }
  std::size_t dims() const noexcept { return dims_; }
  const Standardizer& standardizer() const noexcept { return standardizer_; }
  const Parameters& parameters() const noexcept { return params_; }

  /// Throws Error{DimensionMismatch}.
  Sentiment predict(std::span<const double> x) const;

 private:
  std::size_t dims_;
  Standardizer standardizer_;
  Parameters params_;
};

/// Deterministic for a fixed spec (including seed) and dataset.
/// Throws Error{EmptyDataset}, Error{SingleClassData} (all kinds but KNN),
/// Error{InvalidHyperparameter} and the Dataset validation errors.
Model train(const ClassifierSpec& spec, const Dataset& data);

inline Sentiment predict(const Model& model, std::span<const double> x) { return model.predict(x); }

struct ClassTally {
  std::size_t correct = 0;
  std::size_t total = 0;
};

struct Evaluation {
  double accuracy_pct = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  ClassTally positive;
  ClassTally negative;
};

Evaluation evaluate(const Model& model, const Dataset& test);

/// JSON container {"format": "polarkit-model", "version": 1, ...}; doubles
/// round-trip exactly.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

struct ComparisonInputs {
  const Corpus& corpus;
  const CorpusSplit& split;
  const EmbeddingTable& table;
  const Lexicon& unigrams;
  /// Bigram lexicon already limited to training-split bigrams.
  const Lexicon& bigrams;
  AugmentOptions augment;
};

struct FigureCell {
  ClassifierKind kind = ClassifierKind::LinearSVM;
  FeatureSet features = FeatureSet::Plain;
  Evaluation evaluation;
};

/// Trains every spec on every feature set over the fixed split and scores it
/// on the test side. Cells come out spec-major, feature-set-minor.
std::vector<FigureCell> compare_feature_sets(const ComparisonInputs& inputs,
                                             const std::vector<ClassifierSpec>& specs,
                                             const std::vector<FeatureSet>& feature_sets = {
                                                 kAllFeatureSets.begin(), kAllFeatureSets.end()});

/// Builds the train/test datasets for one feature set.
std::pair<Dataset, Dataset> build_datasets(const ComparisonInputs& inputs, FeatureSet set);

/// CSV "classifier,feature_set,accuracy_pct".
void write_figure_csv(const std::vector<FigureCell>& cells, std::ostream& out);

}  // namespace polarkit
