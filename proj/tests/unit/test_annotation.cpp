#include <algorithm>
#include <sstream>

#include "../oracles/kappa_oracle.hpp"
#include "polarkit/annotation.hpp"
#include "test_util.hpp"

using namespace polarkit;

namespace {

// "sr" is senior (rank 1), "jr" junior (rank 2).
TaskSpec spec(std::size_t items = 4, unsigned max_rounds = 2) {
  TaskSpec s;
  for (std::size_t i = 0; i < items; ++i)
    s.items.push_back({"i" + std::to_string(i), "word" + std::to_string(i) + " ledu",
                       i == 0 ? std::optional<std::string>("gloss") : std::nullopt, i + 1});
  s.annotators = {{"jr", 2}, {"sr", 1}};
  s.provenance = Provenance::BigramExtraction;
  s.max_rounds = max_rounds;
  return s;
}

AnnotationStore::Clock fixed_clock() {
  return [] { return std::int64_t{1700000000}; };
}

}  // namespace

TEST_SUITE("annotation") {
  TEST_CASE("task creation validates its input") {
    AnnotationStore store;
    auto s = spec();
    s.items.clear();
    CHECK_ERRC(store.create_task(s), Errc::InvalidArgument);
    s = spec();
    s.items[1].item_id = s.items[0].item_id;
    CHECK_ERRC(store.create_task(s), Errc::InvalidArgument);
    s = spec();
    s.annotators = {{"a", 1}, {"a", 2}};
    CHECK_ERRC(store.create_task(s), Errc::InvalidArgument);
    s = spec();
    s.annotators = {{"a", 1}, {"b", 1}};
    CHECK_ERRC(store.create_task(s), Errc::InvalidArgument);
    s = spec();
    s.annotators.pop_back();
    CHECK_ERRC(store.create_task(s), Errc::InvalidArgument);
    s = spec();
    s.items[0].ngram = "one two three";
    CHECK_ERRC(store.create_task(s), Errc::InvalidArgument);
    CHECK(store.task_ids().empty());
    CHECK(store.create_task(spec()) == "t1");
    CHECK(store.create_task(spec()) == "t2");
  }

  TEST_CASE("agreeing judgments finalize the item") {
    AnnotationStore store;
    const auto t = store.create_task(spec());
    CHECK(store.submit_label(t, "i0", "jr", Judgment::Positive).state.status ==
          ItemStatus::SingleLabeled);
    const auto v = store.submit_label(t, "i0", "sr", Judgment::Positive);
    CHECK(v.state.status == ItemStatus::Final);
    CHECK(v.state.label == PolarityLabel::Positive);
    CHECK_FALSE(v.state.disagreement);
    CHECK_FALSE(v.state.borderline);
  }

  TEST_CASE("conflicts resolve to the senior annotator and are listed for review") {
    AnnotationStore store;
    const auto t = store.create_task(spec());
    store.submit_label(t, "i1", "sr", Judgment::Negative);
    const auto v = store.submit_label(t, "i1", "jr", Judgment::Positive);
    CHECK(v.state.status == ItemStatus::Final);
    CHECK(v.state.label == PolarityLabel::Negative);
    CHECK(v.state.disagreement);
    const auto d = store.disagreements(t, "sr");
    REQUIRE(d.size() == 1);
    CHECK(d[0].item.item_id == "i1");
    CHECK_ERRC(store.disagreements(t, "jr"), Errc::Forbidden);

    CHECK_ERRC(store.resolve(t, "i1", "jr", PolarityLabel::Positive), Errc::Forbidden);
    CHECK_ERRC(store.resolve(t, "i2", "sr", PolarityLabel::Positive), Errc::NotReady);
    const auto r = store.resolve(t, "i1", "sr", PolarityLabel::Neutral);
    CHECK(r.state.label == PolarityLabel::Neutral);
    CHECK(r.state.reviewed);
    CHECK(store.disagreements(t, "sr").empty());
  }

  TEST_CASE("one uncertain side defers to the other and marks the item borderline") {
    AnnotationStore store;
    const auto t = store.create_task(spec());
    store.submit_label(t, "i0", "sr", Judgment::Uncertain);
    const auto v = store.submit_label(t, "i0", "jr", Judgment::Ambiguous);
    CHECK(v.state.status == ItemStatus::Final);
    CHECK(v.state.label == PolarityLabel::Ambiguous);
    CHECK(v.state.borderline);
  }

  TEST_CASE("two uncertain sides start another round, then give up") {
    AnnotationStore store;
    const auto t = store.create_task(spec(1, 2));
    store.submit_label(t, "i0", "sr", Judgment::Uncertain);
    auto v = store.submit_label(t, "i0", "jr", Judgment::Uncertain);
    CHECK(v.state.status == ItemStatus::ReIteration);
    CHECK(v.state.round == 2);
    CHECK(v.state.current.empty());
    REQUIRE(store.next_item(t, "jr"));
    store.submit_label(t, "i0", "jr", Judgment::Uncertain);
    v = store.submit_label(t, "i0", "sr", Judgment::Uncertain);
    CHECK(v.state.status == ItemStatus::Unresolved);
    CHECK_FALSE(v.state.label);
    CHECK_FALSE(store.next_item(t, "jr"));
    CHECK_ERRC(store.submit_label(t, "i0", "jr", Judgment::Positive), Errc::DuplicateSubmission);
    const auto r = store.resolve(t, "i0", "sr", PolarityLabel::Negative);
    CHECK(r.state.status == ItemStatus::Final);
  }

  TEST_CASE("round 2 uses fresh judgments") {
    AnnotationStore store;
    const auto t = store.create_task(spec(1, 3));
    store.submit_label(t, "i0", "sr", Judgment::Uncertain);
    store.submit_label(t, "i0", "jr", Judgment::Uncertain);
    store.submit_label(t, "i0", "jr", Judgment::Negative);
    const auto v = store.submit_label(t, "i0", "sr", Judgment::Negative);
    CHECK(v.state.status == ItemStatus::Final);
    CHECK(v.state.round == 2);
    CHECK(v.state.label == PolarityLabel::Negative);
  }

  TEST_CASE("access rules") {
    AnnotationStore store;
    const auto t = store.create_task(spec());
    CHECK_ERRC(store.submit_label("t9", "i0", "jr", Judgment::Positive), Errc::UnknownTask);
    CHECK_ERRC(store.submit_label(t, "nope", "jr", Judgment::Positive), Errc::UnknownItem);
    CHECK_ERRC(store.submit_label(t, "i0", "mallory", Judgment::Positive), Errc::Forbidden);
    CHECK_ERRC(store.next_item(t, "mallory"), Errc::Forbidden);
    store.submit_label(t, "i0", "jr", Judgment::Positive);
    CHECK_ERRC(store.submit_label(t, "i0", "jr", Judgment::Negative), Errc::DuplicateSubmission);
  }

  TEST_CASE("next item follows task order per annotator") {
    AnnotationStore store;
    const auto t = store.create_task(spec(3));
    CHECK(store.next_item(t, "jr")->item.item_id == "i0");
    store.submit_label(t, "i0", "jr", Judgment::Positive);
    CHECK(store.next_item(t, "jr")->item.item_id == "i1");
    CHECK(store.next_item(t, "sr")->item.item_id == "i0");
    store.submit_label(t, "i1", "jr", Judgment::Positive);
    store.submit_label(t, "i2", "jr", Judgment::Positive);
    CHECK_FALSE(store.next_item(t, "jr"));
  }

  TEST_CASE("progress counts") {
    AnnotationStore store;
    const auto t = store.create_task(spec(4));
    store.submit_label(t, "i0", "jr", Judgment::Positive);
    store.submit_label(t, "i0", "sr", Judgment::Positive);
    store.submit_label(t, "i1", "jr", Judgment::Uncertain);
    store.submit_label(t, "i1", "sr", Judgment::Uncertain);
    store.submit_label(t, "i2", "jr", Judgment::Negative);
    const auto p = store.progress(t);
    CHECK(p.items == 4);
    CHECK(p.final == 1);
    CHECK(p.reiteration == 1);
    CHECK(p.single_labeled == 1);
    CHECK(p.unlabeled == 1);
    CHECK(p.dual_labeled_pairs == 2);
  }

  TEST_CASE("kappa over completed pairs matches the oracle") {
    AnnotationStore store;
    const auto t = store.create_task(spec(6));
    CHECK_ERRC(store.kappa(t), Errc::NotReady);
    const std::vector<std::pair<Judgment, Judgment>> labels = {
        {Judgment::Positive, Judgment::Positive}, {Judgment::Negative, Judgment::Positive},
        {Judgment::Neutral, Judgment::Neutral},   {Judgment::Uncertain, Judgment::Negative},
        {Judgment::Ambiguous, Judgment::Neutral}, {Judgment::Negative, Judgment::Negative}};
    for (std::size_t i = 0; i < labels.size(); ++i) {
      store.submit_label(t, "i" + std::to_string(i), "jr", labels[i].first);
      store.submit_label(t, "i" + std::to_string(i), "sr", labels[i].second);
    }
    const auto order = KappaOptions::default_order();
    auto idx = [&](Judgment j) {
      return static_cast<std::size_t>(std::find(order.begin(), order.end(), j) - order.begin());
    };
    std::vector<std::pair<std::size_t, std::size_t>> ratings;
    for (const auto& [a, b] : labels) ratings.emplace_back(idx(a), idx(b));
    const auto snap = store.kappa(t);
    CHECK(snap.pairs == 6);
    CHECK(snap.result.kappa == doctest::Approx(oracle::kappa(ratings, order.size(), true)).epsilon(1e-12));
    const auto plain = store.kappa(t, {Weighting::Unweighted});
    CHECK(plain.result.kappa ==
          doctest::Approx(oracle::kappa(ratings, order.size(), false)).epsilon(1e-12));
    KappaOptions strict;
    strict.include_borderline = false;
    CHECK(store.kappa(t, strict).pairs == 5);
  }

  TEST_CASE("export contains only final items with their provenance") {
    AnnotationStore store;
    const auto t = store.create_task(spec(3));
    store.submit_label(t, "i0", "jr", Judgment::Positive);
    store.submit_label(t, "i0", "sr", Judgment::Positive);
    store.submit_label(t, "i1", "jr", Judgment::Negative);
    const auto lex = store.export_lexicon(t);
    REQUIRE(lex.size() == 1);
    const auto* e = lex.find("word0 ledu");
    REQUIRE(e);
    CHECK(e->label == PolarityLabel::Positive);
    CHECK(e->provenance == Provenance::BigramExtraction);
    CHECK(e->gloss == "gloss");
  }

  TEST_CASE("the log replays to the same state") {
    testutil::TempDir dir("annlog");
    const auto log = dir / "events.jsonl";
    std::string t;
    {
      AnnotationStore store(log, fixed_clock());
      t = store.create_task(spec(3));
      store.submit_label(t, "i0", "jr", Judgment::Positive);
      store.submit_label(t, "i0", "sr", Judgment::Negative);
      store.submit_label(t, "i1", "jr", Judgment::Uncertain);
      store.submit_label(t, "i1", "sr", Judgment::Uncertain);
      store.resolve(t, "i0", "sr", PolarityLabel::Ambiguous);
    }
    const auto replayed = AnnotationStore::replay(log);
    REQUIRE(replayed.size() == 1);
    CHECK(replayed[0].states[0].label == PolarityLabel::Ambiguous);
    CHECK(replayed[0].states[1].status == ItemStatus::ReIteration);
    CHECK(replayed[0].created == 1700000000);

    AnnotationStore reopened(log, fixed_clock());
    const auto task = reopened.task(t);
    CHECK(task.states[0].reviewed);
    CHECK(task.states[1].round == 2);
    reopened.submit_label(t, "i1", "jr", Judgment::Neutral);
    CHECK(reopened.create_task(spec(1)) == "t2");
  }

  TEST_CASE("a torn final line is dropped and truncated") {
    testutil::TempDir dir("torn");
    const auto log = dir / "events.jsonl";
    std::string t;
    {
      AnnotationStore store(log, fixed_clock());
      t = store.create_task(spec(2));
      store.submit_label(t, "i0", "jr", Judgment::Positive);
    }
    const auto intact = testutil::read_text(log);
    testutil::write_text(log, intact + R"({"task_id":"t1","ts":1,"type":"lab)");
    {
      AnnotationStore store(log, fixed_clock());
      CHECK(store.task(t).states[0].status == ItemStatus::SingleLabeled);
      CHECK(testutil::read_text(log) == intact);
      store.submit_label(t, "i0", "sr", Judgment::Positive);
    }
    AnnotationStore again(log, fixed_clock());
    CHECK(again.task(t).states[0].status == ItemStatus::Final);
  }

  TEST_CASE("corruption before the last line is an error") {
    testutil::TempDir dir("corrupt");
    const auto log = dir / "events.jsonl";
    {
      AnnotationStore store(log, fixed_clock());
      store.create_task(spec(2));
    }
    testutil::write_text(log, "garbage\n" + testutil::read_text(log));
    CHECK_ERRC(AnnotationStore(log, fixed_clock()), Errc::MalformedRecord);
  }
}
