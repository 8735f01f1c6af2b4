#include <cmath>
#include <filesystem>

#include "../support/generators.hpp"
#include "polarkit/classifiers.hpp"
#include "test_util.hpp"

using namespace polarkit;

namespace {

Dataset blobs(std::uint64_t seed, std::size_t n, std::size_t dims, double separation) {
  Rng rng(seed);
  Dataset d;
  std::vector<double> x(dims);
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    for (auto& v : x) v = rng.normal() + (pos ? separation : -separation);
    d.add(x, pos ? Sentiment::Positive : Sentiment::Negative, "x" + std::to_string(i));
  }
  return d;
}

std::vector<Sentiment> predictions(const Model& m, const Dataset& d) {
  std::vector<Sentiment> out;
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(m.predict(d.row(i)));
  return out;
}

}  // namespace

TEST_SUITE("classifiers") {
  TEST_CASE("dataset validation") {
    Dataset d;
    d.add(std::vector<double>{1, 2}, Sentiment::Positive, "a");
    CHECK_ERRC(d.add(std::vector<double>{1}, Sentiment::Positive, "b"), Errc::DimensionMismatch);
    d.add(std::vector<double>{NAN, 0}, Sentiment::Negative, "c");
    CHECK_ERRC(d.validate(), Errc::NonFiniteFeature);
  }

  TEST_CASE("training preconditions") {
    Dataset empty;
    CHECK_ERRC(train(ClassifierSpec::defaults(ClassifierKind::MLP), empty), Errc::EmptyDataset);
    Dataset one;
    one.add(std::vector<double>{1}, Sentiment::Positive, "a");
    one.add(std::vector<double>{2}, Sentiment::Positive, "b");
    for (auto kind : kAllClassifiers) {
      CAPTURE(to_string(kind));
      if (kind == ClassifierKind::KNN) {
        const auto m = train(ClassifierSpec::defaults(kind), one);
        CHECK(m.predict(std::vector<double>{0}) == Sentiment::Positive);
      } else {
        CHECK_ERRC(train(ClassifierSpec::defaults(kind), one), Errc::SingleClassData);
      }
    }
  }

  TEST_CASE("hyperparameter validation") {
    CHECK_ERRC((ClassifierSpec{LinearSvmParams{0.0, 10}, 0}.validate()),
               Errc::InvalidHyperparameter);
    CHECK_ERRC((ClassifierSpec{KnnParams{0}, 0}.validate()), Errc::InvalidHyperparameter);
    CHECK_ERRC((ClassifierSpec{MlpParams{0, 1, 0.1}, 0}.validate()), Errc::InvalidHyperparameter);
    CHECK_ERRC((ClassifierSpec{GaussianSvmParams{1.0, -1.0}, 0}.validate()),
               Errc::InvalidHyperparameter);
    CHECK_ERRC((ClassifierSpec{RandomForestParams{0}, 0}.validate()), Errc::InvalidHyperparameter);
  }

  TEST_CASE("names round-trip") {
    for (auto k : kAllClassifiers) CHECK(parse_classifier(to_string(k)) == k);
    CHECK_FALSE(parse_classifier("xgboost"));
  }

  TEST_CASE("standardizer uses a unit divisor for constant features") {
    Dataset d;
    d.add(std::vector<double>{1, 5}, Sentiment::Positive, "a");
    d.add(std::vector<double>{3, 5}, Sentiment::Negative, "b");
    const auto s = Standardizer::fit(d);
    CHECK(s.mean == std::vector<double>{2, 5});
    CHECK(s.scale == std::vector<double>{1, 1});
    CHECK(s.apply(std::vector<double>{3, 7}) == std::vector<double>{1, 2});
  }

  TEST_CASE("every classifier learns well-separated blobs") {
    const auto train_set = blobs(1, 120, 3, 1.5);
    const auto test_set = blobs(2, 60, 3, 1.5);
    for (auto kind : kAllClassifiers) {
      CAPTURE(to_string(kind));
      const auto m = train(ClassifierSpec::defaults(kind, 9), train_set);
      CHECK(evaluate(m, test_set).accuracy_pct >= 90.0);
      CHECK_ERRC(m.predict(std::vector<double>{1.0}), Errc::DimensionMismatch);
    }
  }

  TEST_CASE("linear SVM separates separable data") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      auto data = gen::separable_instance(rng, 80, 2 + rng.below(6));
      const auto m = train(ClassifierSpec::defaults(ClassifierKind::LinearSVM, trial), data);
      CHECK(evaluate(m, data).accuracy_pct == 100.0);
    }
  }

  TEST_CASE("MLP gradient matches central differences") {
    Rng rng(17);
    MlpModel m;
    m.inputs = 4;
    m.hidden = 6;
    for (std::size_t i = 0; i < m.hidden * m.inputs; ++i) m.w1.push_back(rng.normal());
    for (std::size_t i = 0; i < m.hidden; ++i) m.b1.push_back(rng.normal() * 0.1);
    for (std::size_t i = 0; i < m.hidden; ++i) m.w2.push_back(rng.normal());
    m.b2 = 0.2;
    const std::vector<double> x = {0.3, -1.2, 0.8, 0.05};
    for (double target : {0.0, 1.0}) {
      const auto g = m.gradient(x, target);
      for (std::size_t i = 0; i < m.parameter_count(); ++i) {
        const double h = 1e-6;
        MlpModel up = m, down = m;
        up.parameter(i) += h;
        down.parameter(i) -= h;
        const double fd = (up.loss(x, target) - down.loss(x, target)) / (2 * h);
        const double scale = std::max({std::abs(fd), std::abs(g.parameter(i)), 1e-6});
        CAPTURE(i);
        CHECK(std::abs(fd - g.parameter(i)) / scale <= 1e-4);
      }
    }
  }

  TEST_CASE("training is bit-deterministic for a fixed seed") {
    const auto data = blobs(5, 80, 4, 0.7);
    const auto probe = blobs(6, 40, 4, 0.7);
    for (auto kind : kAllClassifiers) {
      CAPTURE(to_string(kind));
      const auto spec = ClassifierSpec::defaults(kind, 1234);
      const auto a = train(spec, data);
      const auto b = train(spec, data);
      CHECK(model_to_json(a) == model_to_json(b));
      CHECK(predictions(a, probe) == predictions(b, probe));
    }
  }

  TEST_CASE("forest result does not depend on the thread count") {
    const auto data = blobs(8, 60, 5, 0.5);
    RandomForestParams one{20, 16, 0, 2, 1};
    RandomForestParams many = one;
    many.threads = 4;
    CHECK(model_to_json(train({one, 5}, data)) == model_to_json(train({many, 5}, data)));
  }

  TEST_CASE("KNN with k = N predicts the training majority") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      Dataset d;
      const auto n = 3 + 2 * rng.below(10);  // odd, so there is a strict majority
      std::size_t pos = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool p = rng.below(2) == 1;
        pos += p;
        d.add(std::vector<double>{rng.normal(), rng.normal()},
              p ? Sentiment::Positive : Sentiment::Negative, "k" + std::to_string(i));
      }
      const auto majority = 2 * pos > n ? Sentiment::Positive : Sentiment::Negative;
      const auto m = train({KnnParams{n}, 0}, d);
      for (int probe = 0; probe < 10; ++probe)
        CHECK(m.predict(std::vector<double>{rng.normal() * 5, rng.normal() * 5}) == majority);
    }
  }

  TEST_CASE("KNN breaks an even vote with the nearest neighbour") {
    Dataset d;
    d.add(std::vector<double>{0.0}, Sentiment::Negative, "a");
    d.add(std::vector<double>{1.0}, Sentiment::Positive, "b");
    const auto m = train({KnnParams{2}, 0}, d);
    CHECK(m.predict(std::vector<double>{0.9}) == Sentiment::Positive);
    CHECK(m.predict(std::vector<double>{0.1}) == Sentiment::Negative);
  }

  TEST_CASE("model files round-trip exactly") {
    testutil::TempDir dir("model");
    const auto data = blobs(9, 50, 3, 0.8);
    const auto probe = blobs(10, 30, 3, 0.8);
    for (auto kind : kAllClassifiers) {
      CAPTURE(to_string(kind));
      const auto m = train(ClassifierSpec::defaults(kind, 3), data);
      const auto path = dir / (std::string(to_string(kind)) + ".json");
      save_model(m, path);
      const auto back = load_model(path);
      CHECK(back.kind() == kind);
      CHECK(model_to_json(back) == model_to_json(m));
      CHECK(predictions(back, probe) == predictions(m, probe));
    }
    CHECK_ERRC(model_from_json("{\"format\":\"other\"}"), Errc::MalformedModel);
    CHECK_ERRC(model_from_json("not json"), Errc::MalformedModel);
  }
}
