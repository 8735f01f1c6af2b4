#include <cstdio>
#include <ostream>

#include "polarkit/classifiers.hpp"
#include "polarkit/polling.hpp"

namespace polarkit {

std::pair<Dataset, Dataset> build_datasets(const ComparisonInputs& in, FeatureSet set) {
  const PolarityMatcher matcher(in.unigrams, in.bigrams);
  Dataset train, test;
  for (const Review& r : in.corpus.reviews()) {
    const bool is_train = in.split.in_train(r.id);
    if (!is_train && !in.split.in_test(r.id)) continue;
    const auto tokens = tokenize(r.text);
    const auto head = doc_vector(tokens, in.table);
    const auto fv = augment(head.values, tokens, matcher, in.augment);
    (is_train ? train : test).add(select_features(fv, set), r.gold, r.id);
  }
  return {std::move(train), std::move(test)};
}

std::vector<FigureCell> compare_feature_sets(const ComparisonInputs& inputs,
                                             const std::vector<ClassifierSpec>& specs,
                                             const std::vector<FeatureSet>& feature_sets) {
  std::vector<std::pair<Dataset, Dataset>> data;
  data.reserve(feature_sets.size());
  for (auto fs : feature_sets) data.push_back(build_datasets(inputs, fs));

  std::vector<FigureCell> cells;
  for (const auto& spec : specs) {
    for (std::size_t f = 0; f < feature_sets.size(); ++f) {
      const Model model = train(spec, data[f].first);
      cells.push_back({spec.kind(), feature_sets[f], evaluate(model, data[f].second)});
    }
  }
  return cells;
}

void write_figure_csv(const std::vector<FigureCell>& cells, std::ostream& out) {
  out << "classifier,feature_set,accuracy_pct\n";
  for (const auto& c : cells) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", c.evaluation.accuracy_pct);
    out << to_string(c.kind) << ',' << to_string(c.features) << ',' << buf << '\n';
  }
}

}  // namespace polarkit
