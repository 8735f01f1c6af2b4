// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles/kappa_oracle.hpp"
#include "../oracles/polling_oracle.hpp"
#include "../support/generators.hpp"
#include "app.hpp"
#include "polarkit/agreement.hpp"
#include "polarkit/classifiers.hpp"
#include "polarkit/corpus.hpp"
#include "polarkit/error.hpp"
#include "polarkit/polling.hpp"
#include "synthetic.hpp"

using namespace polarkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (!line.starts_with('#')) out += line + '\n';
  return out;
}

std::vector<std::vector<std::string>> tsv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, '\t');) cells.push_back(cell);
    if (!line.empty() && line.back() == '\t') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

// ---------------------------------------------------------------------------

Outcome kappa_oracle() {
  Stopwatch sw;
  Rng rng(0x6b617070);
  double worst = 0.0;
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = gen::kappa_instance(rng);
    for (bool weighted : {false, true}) {
      const double want = oracle::kappa(inst.pairs, inst.categories, weighted);
      try {
        const double got =
            cohen_kappa(inst.pairs, inst.categories,
                        weighted ? Weighting::Linear : Weighting::Unweighted)
                .kappa;
        const double diff = std::abs(got - want);
        worst = std::max(worst, diff);
        if (!(diff <= 1e-9)) ++failures;
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  const double t = sw.seconds();
  return {failures == 0 && t < 10.0,
          fmt("2000 comparisons, max |diff| %.2e, %zu failures, %.2fs", worst, failures, t)};
}

Outcome kappa_fixtures() {
  auto zip = [](std::vector<Judgment> a, std::vector<Judgment> b) {
    std::vector<std::pair<Judgment, Judgment>> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i], b[i]);
    return out;
  };
  constexpr auto P = Judgment::Positive;
  constexpr auto N = Judgment::Negative;
  bool ok = true;
  std::string detail;
  for (auto w : {Weighting::Unweighted, Weighting::Linear}) {
    KappaOptions opt;
    opt.weighting = w;
    const double same =
        cohen_kappa(zip({P, N, Judgment::Uncertain, Judgment::Neutral}, {P, N, Judgment::Uncertain, Judgment::Neutral}), opt).kappa;
    const double zero = cohen_kappa(zip({P, P, N, N}, {P, P, P, P}), opt).kappa;
    ok = ok && same == 1.0 && std::abs(zero) <= 1e-12;
    detail += fmt("%s: identical=%.17g constant=%.2e; ", std::string(to_string(w)).c_str(), same, zero);
  }
  KappaOptions plain;
  plain.weighting = Weighting::Unweighted;
  const double five = cohen_kappa(zip({P, N, P, N, P}, {P, N, P, N, N}), plain).kappa;
  const double want = oracle::kappa({{0, 0}, {1, 1}, {0, 0}, {1, 1}, {0, 1}}, 2, false);
  ok = ok && std::abs(five - 0.6154) <= 1e-4 && std::abs(five - want) <= 1e-12;
  detail += fmt("five-pair=%.6f (oracle %.6f)", five, want);
  return {ok, detail};
}

Outcome polling_oracle() {
  Rng rng(0x706f6c6c);
  std::size_t mismatches = 0, additivity = 0;
  for (int i = 0; i < 500; ++i) {
    const auto inst = gen::polling_instance(rng);
    const auto want = oracle::count_matches(inst.tokens, inst.unigrams, inst.bigrams);
    std::int64_t by_mode[3] = {};
    int m = 0;
    for (auto mode : {PollingMode::Unigram, PollingMode::Bigram, PollingMode::UnigramPlusBigram}) {
      const auto got = poll_score(inst.tokens, inst.unigrams, inst.bigrams, mode);
      by_mode[m++] = got.score;
      if (got.score != oracle::score(want, mode)) ++mismatches;
    }
    const auto combined = poll_score(inst.tokens, inst.unigrams, inst.bigrams,
                                     PollingMode::UnigramPlusBigram);
    if (by_mode[2] != by_mode[0] + by_mode[1]) ++additivity;
    if (combined.unigrams.positive != static_cast<std::uint64_t>(want.pos_uni) ||
        combined.unigrams.negative != static_cast<std::uint64_t>(want.neg_uni) ||
        combined.bigrams.positive != static_cast<std::uint64_t>(want.pos_bi) ||
        combined.bigrams.negative != static_cast<std::uint64_t>(want.neg_bi))
      ++mismatches;
  }
  return {mismatches == 0 && additivity == 0,
          fmt("500 instances, %zu count mismatches, %zu additivity violations", mismatches,
              additivity)};
}

Outcome planted_signal() {
  Stopwatch sw;
  synth::PlantedOptions opt;  // 200 reviews, 20 planted words, 95% consistent
  const auto with = synth::planted_unigram_corpus(opt);
  opt.include_planted = false;
  const auto without = synth::planted_unigram_corpus(opt);
  PollingOptions po;
  po.mode = PollingMode::Unigram;
  po.scope = EvalScope::FullCorpus;
  const auto a = evaluate_polling(with.corpus, nullptr, with.unigrams, Lexicon{}, po);
  const auto b = evaluate_polling(without.corpus, nullptr, with.unigrams, Lexicon{}, po);
  const double acc = a.accuracy_pct.value_or(0.0);
  const double unclassified = 100.0 * static_cast<double>(a.unclassified) / static_cast<double>(a.total);
  const double t = sw.seconds();
  return {acc >= 90.0 && unclassified <= 5.0 && b.unclassified == b.total && t < 30.0,
          fmt("accuracy %.2f%%, unclassified %zu/%zu; without planted words %zu/%zu "
              "unclassified; %.2fs",
              acc, a.unclassified, a.total, b.unclassified, b.total, t)};
}

struct FlipRun {
  PollingReport unigram;
  PollingReport bigram;
};

FlipRun flip_run() {
  const auto r = synth::bigram_flip_corpus({});
  const auto split = split_corpus(r.corpus, {7, 3}, 42);
  const auto train_bigrams = training_bigram_lexicon(r.corpus, split, r.bigrams, 2);
  PollingOptions po;
  po.scope = EvalScope::TestSplit;
  po.mode = PollingMode::Unigram;
  FlipRun out;
  out.unigram = evaluate_polling(r.corpus, &split, r.unigrams, Lexicon{}, po);
  po.mode = PollingMode::Bigram;
  out.bigram = evaluate_polling(r.corpus, &split, Lexicon{}, train_bigrams, po);
  return out;
}

Outcome bigram_flip(const FlipRun& run) {
  const double uni = run.unigram.accuracy_pct.value_or(0.0);
  const double bi = run.bigram.accuracy_pct.value_or(0.0);
  return {run.bigram.accuracy_pct && bi - uni >= 20.0,
          fmt("test split of %zu: bigram %.2f%% vs unigram %.2f%% (+%.2f points)",
              run.bigram.total, bi, uni, bi - uni)};
}

Outcome coverage_tradeoff(const FlipRun& run) {
  return {run.bigram.unclassified > run.unigram.unclassified,
          fmt("unclassified: bigram %zu/%zu, unigram %zu/%zu", run.bigram.unclassified,
              run.bigram.total, run.unigram.unclassified, run.unigram.total)};
}

Outcome classifier_suite() {
  std::string detail;
  bool ok = true;

  Rng rng(0x73766d);
  std::size_t separated = 0;
  for (int i = 0; i < 50; ++i) {
    const auto data = gen::separable_instance(rng, 20 + rng.below(100), 2 + rng.below(8));
    const auto m = train(ClassifierSpec::defaults(ClassifierKind::LinearSVM, i), data);
    separated += evaluate(m, data).accuracy_pct == 100.0;
  }
  ok = ok && separated == 50;
  detail += fmt("linear SVM separable %zu/50; ", separated);

  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    MlpModel m;
    m.inputs = 1 + rng.below(6);
    m.hidden = 1 + rng.below(8);
    for (std::size_t i = 0; i < m.inputs * m.hidden; ++i) m.w1.push_back(rng.normal());
    for (std::size_t i = 0; i < m.hidden; ++i) m.b1.push_back(rng.normal() * 0.1);
    for (std::size_t i = 0; i < m.hidden; ++i) m.w2.push_back(rng.normal());
    m.b2 = rng.normal() * 0.1;
    std::vector<double> x(m.inputs);
    for (auto& v : x) v = rng.normal();
    const double target = static_cast<double>(rng.below(2));
    const auto g = m.gradient(x, target);
    for (std::size_t i = 0; i < m.parameter_count(); ++i) {
      const double h = 1e-6;
      MlpModel up = m, down = m;
      up.parameter(i) += h;
      down.parameter(i) -= h;
      const double fd = (up.loss(x, target) - down.loss(x, target)) / (2 * h);
      const double scale = std::max({std::abs(fd), std::abs(g.parameter(i)), 1e-6});
      worst = std::max(worst, std::abs(fd - g.parameter(i)) / scale);
    }
  }
  ok = ok && worst <= 1e-4;
  detail += fmt("MLP gradient max rel err %.2e; ", worst);

  const auto data = gen::separable_instance(rng, 60, 4, 0.0);
  std::size_t deterministic = 0;
  for (auto kind : kAllClassifiers) {
    const auto spec = ClassifierSpec::defaults(kind, 77);
    deterministic += model_to_json(train(spec, data)) == model_to_json(train(spec, data));
  }
  ok = ok && deterministic == 5;
  detail += fmt("deterministic %zu/5; ", deterministic);

  std::size_t majority_ok = 0, probes = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Dataset d;
    const auto n = 1 + 2 * rng.below(15);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool p = rng.below(2) == 1;
      pos += p;
      d.add(std::vector<double>{rng.normal(), rng.normal(), rng.normal()},
            p ? Sentiment::Positive : Sentiment::Negative, std::to_string(i));
    }
    const auto majority = 2 * pos > n ? Sentiment::Positive : Sentiment::Negative;
    const auto m = train({KnnParams{n}, 0}, d);
    for (int p = 0; p < 25; ++p, ++probes)
      majority_ok += m.predict(std::vector<double>{rng.normal() * 10, rng.normal() * 10,
                                                   rng.normal() * 10}) == majority;
  }
  ok = ok && majority_ok == probes;
  detail += fmt("KNN k=N majority %zu/%zu", majority_ok, probes);
  return {ok, detail};
}

Outcome augmentation_gain() {
  Stopwatch sw;
  double total_gain = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    synth::NoiseHeadOptions opt;
    opt.seed = seed;
    const auto nh = synth::noise_head_corpus(opt);
    const auto& corpus = nh.resources.corpus;
    const auto split = split_corpus(corpus, {7, 3}, derive_seed(seed, 100));
    const auto bigrams = training_bigram_lexicon(corpus, split, nh.resources.bigrams, 2);
    const ComparisonInputs inputs{corpus, split, nh.table, nh.resources.unigrams, bigrams, {}};
    const auto cells =
        compare_feature_sets(inputs, {ClassifierSpec::defaults(ClassifierKind::LinearSVM, seed)},
                             {FeatureSet::Plain, FeatureSet::PlusBoth});
    const double gain = cells[1].evaluation.accuracy_pct - cells[0].evaluation.accuracy_pct;
    total_gain += gain;
    per_seed += fmt("%s%.1f->%.1f", seed == 1 ? "" : ", ", cells[0].evaluation.accuracy_pct,
                    cells[1].evaluation.accuracy_pct);
  }
  const double mean = total_gain / 5.0;
  const double t = sw.seconds();
  return {mean >= 15.0 && t < 120.0,
          fmt("linear SVM plain->augmented [%s], mean gain %.2f points, %.2fs", per_seed.c_str(),
              mean, t)};
}

Outcome report_formats() {
  bool ok = true;
  std::string detail;
  const std::string golden = POLARKIT_GOLDEN_DIR;

  std::vector<PollingReport> reports;
  const double acc[2][4] = {{61.86, 62.84, 78.97, 55.44}, {60.23, 58.29, 49.46, 57.89}};
  const std::size_t unc[2][4] = {{23, 14, 108, 10}, {20, 18, 36, 8}};
  const auto columns = default_polling_columns();
  for (int s = 0; s < 2; ++s)
    for (int c = 0; c < 4; ++c) {
      PollingReport r;
      r.column = columns[c];
      r.segmentation = s == 1;
      r.accuracy_pct = acc[s][c];
      r.unclassified = unc[s][c];
      r.total = 201;
      reports.push_back(r);
    }
  std::ostringstream grid;
  emit_polling_table(reports, grid);
  const bool grid_ok = grid.str() == read_file(golden + "/polling_grid.tsv");

  std::ostringstream stats;
  write_stats_table(stats, {{"SentiWordNet", {2135, 4076, 359, 1093}}});
  const bool stats_ok = stats.str() == read_file(golden + "/label_distribution.tsv");
  ok = grid_ok && stats_ok;
  detail += fmt("grid golden %s, stats golden %s; ", grid_ok ? "ok" : "differs",
                stats_ok ? "ok" : "differs");

  const std::string demo = std::string(POLARKIT_DATA_DIR) + "/demo/";
  std::ostringstream out, err;
  const int code = cli::run({"poll", "--config", demo + "demo.conf"}, out, err);
  const auto body = strip_comments(out.str());
  const auto rows = tsv_rows(body);
  bool shape = code == 0 && rows.size() == 5;
  if (shape) {
    shape = rows[0] == std::vector<std::string>{"", "SentiWordNet", "Our resource", "Bigram",
                                                "Uni+Bigrams"} &&
            rows[1][0] == "Before Segmentation" && rows[2][0] == "Unclassified reviews" &&
            rows[3][0] == "After Segmentation" && rows[4][0] == "Unclassified reviews";
    for (const auto& r : rows) shape = shape && r.size() == 5;
  }
  const bool demo_golden = body == read_file(golden + "/poll_demo.tsv");
  ok = ok && shape && demo_golden;
  detail += fmt("poll grid 4x(before/after x accuracy/unclassified) %s, demo golden %s; ",
                shape ? "ok" : "wrong", demo_golden ? "ok" : "differs");

  std::ostringstream sout, serr;
  const int scode = cli::run({"stats", "SentiWordNet=" + demo + "baseline_lexicon.tsv"}, sout, serr);
  const auto srows = tsv_rows(strip_comments(sout.str()));
  const bool stats_shape =
      scode == 0 && srows.size() == 2 &&
      srows[0] == std::vector<std::string>{"Resource", "Positive", "Negative", "Neutral",
                                           "Ambiguous", "Total"} &&
      srows[1].size() == 6 && srows[1][0] == "SentiWordNet";
  ok = ok && stats_shape;
  detail += fmt("stats row shape %s", stats_shape ? "ok" : "wrong");
  return {ok, detail};
}

Outcome split_check() {
  std::vector<Review> reviews;
  for (int i = 0; i < 201; ++i)
    reviews.push_back({"r" + std::to_string(i), Domain::Movie, "x",
                       i < 101 ? Sentiment::Positive : Sentiment::Negative});
  const Corpus c(std::move(reviews));
  const auto a = split_corpus(c, {7, 3}, 11);
  const auto b = split_corpus(c, {7, 3}, 11);
  std::size_t pos = 0;
  for (const auto& id : a.train_ids) pos += c.find(id)->gold == Sentiment::Positive;
  const std::size_t neg = a.train_ids.size() - pos;
  const bool props = std::abs(static_cast<double>(pos) - 0.7 * 101) <= 1.0 &&
                     std::abs(static_cast<double>(neg) - 0.7 * 100) <= 1.0;
  const bool same = a.train_ids == b.train_ids && a.test_ids == b.test_ids;
  return {a.train_ids.size() == 141 && a.test_ids.size() == 60 && props && same,
          fmt("%zu/%zu, train positives %zu/101 negatives %zu/100, deterministic %s",
              a.train_ids.size(), a.test_ids.size(), pos, neg, same ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const FlipRun flip = flip_run();
  const std::vector<Criterion> criteria = {
      {"kappa-oracle", kappa_oracle},
      {"kappa-fixtures", kappa_fixtures},
      {"polling-oracle", polling_oracle},
      {"planted-signal-polling", planted_signal},
      {"bigram-flip", [&] { return bigram_flip(flip); }},
      {"coverage-accuracy-tradeoff", [&] { return coverage_tradeoff(flip); }},
      {"classifier-suite", classifier_suite},
      {"feature-augmentation-gain", augmentation_gain},
      {"report-formats", report_formats},
      {"split-141-60", split_check},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
