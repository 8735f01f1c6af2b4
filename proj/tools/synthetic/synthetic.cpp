#include "synthetic.hpp"

#include <array>
#include <cmath>
#include <span>

#include "polarkit/random.hpp"

namespace polarkit::synth {
namespace {

Domain domain_for(std::size_t i) {
  static constexpr std::array<Domain, 3> kDomains = {Domain::Movie, Domain::Product, Domain::Book};
  return kDomains[i % kDomains.size()];
}

std::string numbered(std::string_view stem, std::size_t i) {
  return std::string(stem) + std::to_string(i);
}

void add_entry(Lexicon& lex, std::vector<std::string> ngram, PolarityLabel label,
               Provenance provenance = Provenance::Manual,
               std::optional<std::string> gloss = std::nullopt) {
  lex.put({std::move(ngram), label, provenance, std::move(gloss)});
}

using Chunk = std::vector<std::string>;

std::string flatten(std::vector<Chunk>& chunks, Rng& rng) {
  rng.shuffle(std::span<Chunk>(chunks));
  std::string text;
  for (const auto& chunk : chunks)
    for (const auto& token : chunk) {
      if (!text.empty()) text += ' ';
      text += token;
    }
  return text;
}

}  // namespace

SyntheticResources planted_unigram_corpus(const PlantedOptions& o) {
  SyntheticResources out;
  for (std::size_t i = 0; i < o.polar_vocabulary; ++i) {
    add_entry(out.unigrams, {numbered("plus", i)}, PolarityLabel::Positive);
    add_entry(out.unigrams, {numbered("minus", i)}, PolarityLabel::Negative);
  }
  std::vector<Review> reviews;
  for (std::size_t r = 0; r < o.reviews; ++r) {
    // one stream per review, so dropping the planted words leaves the filler alone
    Rng rng(derive_seed(o.seed, r));
    const Sentiment gold = r % 2 == 0 ? Sentiment::Positive : Sentiment::Negative;
    std::vector<Chunk> chunks;
    for (std::size_t k = 0; k < o.filler_per_review; ++k)
      chunks.push_back({numbered("w", rng.below(o.filler_vocabulary))});
    for (std::size_t k = 0; k < o.planted_per_review; ++k) {
      const bool agrees = rng.uniform() < o.consistency;
      const bool positive = (gold == Sentiment::Positive) == agrees;
      const auto word = numbered(positive ? "plus" : "minus", rng.below(o.polar_vocabulary));
      if (o.include_planted) chunks.push_back({word});
    }
    if (chunks.empty()) chunks.push_back({"w0"});
    reviews.push_back({numbered("r", r), domain_for(r), flatten(chunks, rng), gold});
  }
  out.corpus = Corpus(std::move(reviews));
  return out;
}

SyntheticResources bigram_flip_corpus(const FlipOptions& o) {
  SyntheticResources out;
  // Frequent flips: (pa_i, pb_i) are positive words forming a negative
  // bigram, (na_i, nb_i) negative words forming a positive one.
  for (std::size_t i = 0; i < o.frequent_bigrams; ++i) {
    for (const auto* w : {"pa", "pb"})
      add_entry(out.unigrams, {numbered(w, i)}, PolarityLabel::Positive);
    for (const auto* w : {"na", "nb"})
      add_entry(out.unigrams, {numbered(w, i)}, PolarityLabel::Negative);
    add_entry(out.bigrams, {numbered("pa", i), numbered("pb", i)}, PolarityLabel::Negative);
    add_entry(out.bigrams, {numbered("na", i), numbered("nb", i)}, PolarityLabel::Positive);
  }
  constexpr std::size_t kPlainPolar = 10;
  for (std::size_t i = 0; i < kPlainPolar; ++i) {
    add_entry(out.unigrams, {numbered("good", i)}, PolarityLabel::Positive);
    add_entry(out.unigrams, {numbered("bad", i)}, PolarityLabel::Negative);
  }

  Rng rng(o.seed);
  std::vector<Review> reviews;
  for (std::size_t r = 0; r < o.reviews; ++r) {
    const Sentiment gold = r % 2 == 0 ? Sentiment::Positive : Sentiment::Negative;
    const bool pos = gold == Sentiment::Positive;
    std::vector<Chunk> chunks;
    for (std::size_t k = 0; k < o.filler_per_review; ++k)
      chunks.push_back({numbered("f", rng.below(o.filler_vocabulary))});

    const bool tail = rng.uniform() < o.long_tail_share;
    for (std::size_t k = 0; k < 2; ++k) {
      Chunk pair;
      if (tail) {
        // unique to this review: seen once, never reaches min_count
        const std::string a = numbered(pos ? "tna" : "tpa", r * 2 + k);
        const std::string b = numbered(pos ? "tnb" : "tpb", r * 2 + k);
        const auto word_label = pos ? PolarityLabel::Negative : PolarityLabel::Positive;
        add_entry(out.unigrams, {a}, word_label);
        add_entry(out.unigrams, {b}, word_label);
        add_entry(out.bigrams, {a, b}, pos ? PolarityLabel::Positive : PolarityLabel::Negative);
        pair = {a, b};
      } else {
        const auto i = rng.below(o.frequent_bigrams);
        pair = {numbered(pos ? "na" : "pa", i), numbered(pos ? "nb" : "pb", i)};
      }
      chunks.push_back(std::move(pair));
    }
    // label-consistent plain words, 0..6 of them
    const auto consistent = rng.below(7);
    for (std::size_t k = 0; k < consistent; ++k)
      chunks.push_back({numbered(pos ? "good" : "bad", rng.below(kPlainPolar))});
    reviews.push_back({numbered("r", r), domain_for(r), flatten(chunks, rng), gold});
  }
  out.corpus = Corpus(std::move(reviews));
  return out;
}

EmbeddingTable random_embeddings(const std::vector<std::string>& vocabulary, std::size_t dim,
                                 std::uint64_t seed) {
  EmbeddingTable table(dim);
  Rng rng(seed);
  for (const auto& token : vocabulary) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    table.put(token, std::move(v));
  }
  return table;
}

NoiseHeadCorpus noise_head_corpus(const NoiseHeadOptions& o) {
  NoiseHeadCorpus out{{}, EmbeddingTable(o.dim)};
  auto& res = out.resources;
  for (std::size_t i = 0; i < o.polar_vocabulary; ++i) {
    add_entry(res.unigrams, {numbered("good", i)}, PolarityLabel::Positive);
    add_entry(res.unigrams, {numbered("bad", i)}, PolarityLabel::Negative);
  }
  std::vector<std::string> filler;
  for (std::size_t i = 0; i < o.filler_vocabulary; ++i) filler.push_back(numbered("f", i));
  // only filler words have vectors, so the head never sees a polar word
  out.table = random_embeddings(filler, o.dim, derive_seed(o.seed, 1));

  Rng rng(o.seed);
  std::vector<Review> reviews;
  for (std::size_t r = 0; r < o.reviews; ++r) {
    const Sentiment gold = r % 2 == 0 ? Sentiment::Positive : Sentiment::Negative;
    const bool pos = gold == Sentiment::Positive;
    std::vector<Chunk> chunks;
    for (std::size_t k = 0; k < o.filler_per_review; ++k)
      chunks.push_back({filler[rng.below(filler.size())]});
    const auto agree = rng.below(o.majority_words + 1);
    const auto oppose = rng.below(o.minority_words + 1);
    for (std::size_t k = 0; k < agree; ++k)
      chunks.push_back({numbered(pos ? "good" : "bad", rng.below(o.polar_vocabulary))});
    for (std::size_t k = 0; k < oppose; ++k)
      chunks.push_back({numbered(pos ? "bad" : "good", rng.below(o.polar_vocabulary))});
    reviews.push_back({numbered("r", r), domain_for(r), flatten(chunks, rng), gold});
  }
  res.corpus = Corpus(std::move(reviews));
  return out;
}

namespace {

struct Word {
  std::string_view text;
  std::string_view gloss;
};

constexpr std::array<Word, 20> kPositive = {{
    {"manchi", "good"},       {"baagundi", "is good"},   {"adbhutam", "wonderful"},
    {"santosham", "joy"},     {"goppa", "great"},        {"andamaina", "beautiful"},
    {"istam", "liking"},      {"chakkani", "lovely"},    {"uttamam", "excellent"},
    {"prashamsa", "praise"},  {"aanandam", "delight"},   {"bhale", "splendid"},
    {"nachindi", "liked it"}, {"viluvaina", "valuable"}, {"sundaram", "handsome"},
    {"haayi", "pleasant"},    {"utsaham", "enthusiasm"}, {"adiripoyindi", "superb"},
    {"mechukolu", "acclaim"}, {"sarada", "fun"},
}};

constexpr std::array<Word, 20> kNegative = {{
    {"chedu", "bad"},         {"baaledu", "not good"},    {"nirasha", "disappointment"},
    {"kashtam", "hardship"},  {"bhayankaram", "terrible"}, {"dhokA", "hurdle"},
    {"visugu", "boredom"},    {"chiraku", "irritation"},  {"nashtam", "loss"},
    {"tappu", "fault"},       {"balaheenam", "weakness"}, {"kopam", "anger"},
    {"badha", "sorrow"},      {"nachaledu", "disliked"},  {"vyardham", "wasteful"},
    {"bhayam", "fear"},       {"dandaga", "useless"},     {"apaayam", "danger"},
    {"avamaanam", "insult"},  {"kalatha", "worry"},
}};

constexpr std::array<Word, 8> kNeutral = {{
    {"cinema", "film"},   {"katha", "story"},    {"pustakam", "book"}, {"vastuvu", "item"},
    {"nati", "actress"},  {"rachayita", "author"}, {"dhara", "price"}, {"paatalu", "songs"},
}};

constexpr std::array<Word, 4> kAmbiguous = {{
    {"parvaledu", "passable"}, {"saadharanam", "ordinary"}, {"vinthaina", "strange"},
    {"teevramaina", "intense"},
}};

constexpr std::array<std::string_view, 24> kFiller = {
    "ee",    "aa",      "chala",  "konchem", "nenu",   "memu",  "adi",     "idi",
    "undi",  "chusanu", "chadivanu", "konnanu", "kani", "mariyu", "oka",   "rendu",
    "roju",  "samayam", "anni",   "vaaru",   "inka",  "kooda",  "ayite",  "ani",
};

constexpr std::array<std::string_view, 4> kSuffixes = {"lo", "ga", "to", "ni"};

/// (first, second, bigram label, gloss); negator "ledu" flips the first word.
struct Flip {
  std::string_view first;
  std::string_view second;
  PolarityLabel label;
  std::string_view gloss;
};

constexpr std::array<Flip, 10> kFlips = {{
    {"dhokA", "ledu", PolarityLabel::Positive, "no hurdle"},
    {"kashtam", "ledu", PolarityLabel::Positive, "no hardship"},
    {"bhayam", "ledu", PolarityLabel::Positive, "no fear"},
    {"nirasha", "ledu", PolarityLabel::Positive, "no disappointment"},
    {"tappu", "ledu", PolarityLabel::Positive, "no fault"},
    {"istam", "ledu", PolarityLabel::Negative, "no liking"},
    {"santosham", "ledu", PolarityLabel::Negative, "no joy"},
    {"haayi", "ledu", PolarityLabel::Negative, "not pleasant"},
    {"utsaham", "ledu", PolarityLabel::Negative, "no enthusiasm"},
    {"viluvaina", "kaadu", PolarityLabel::Negative, "not valuable"},
}};

constexpr std::string_view kRules =
    "# suffix\tmin_stem_length\n"
    "# romanized case markers\n"
    "lo\t3\n"
    "ga\t3\n"
    "to\t3\n"
    "ni\t3\n"
    "# Telugu script\n"
    "లో\t2\n"
    "గా\t2\n"
    "తో\t2\n"
    "ని\t2\n";

}  // namespace

DemoBundle demo_bundle(std::uint64_t seed) {
  DemoBundle out{{}, {}, {}, {}, EmbeddingTable(16), std::string(kRules)};

  // Baseline: every other polar word plus a few neutral/ambiguous ones.
  // Resource: all words.
  for (std::size_t i = 0; i < kPositive.size(); ++i) {
    const auto& p = kPositive[i];
    const auto& n = kNegative[i];
    add_entry(out.resource, {std::string(p.text)}, PolarityLabel::Positive, Provenance::OntoSenseNet,
              std::string(p.gloss));
    add_entry(out.resource, {std::string(n.text)}, PolarityLabel::Negative, Provenance::OntoSenseNet,
              std::string(n.gloss));
    if (i % 2 == 0) {
      add_entry(out.baseline, {std::string(p.text)}, PolarityLabel::Positive,
                Provenance::SentiWordNet, std::string(p.gloss));
      add_entry(out.baseline, {std::string(n.text)}, PolarityLabel::Negative,
                Provenance::SentiWordNet, std::string(n.gloss));
    }
  }
  for (std::size_t i = 0; i < kNeutral.size(); ++i) {
    add_entry(out.resource, {std::string(kNeutral[i].text)}, PolarityLabel::Neutral,
              Provenance::OntoSenseNet, std::string(kNeutral[i].gloss));
    if (i < 3)
      add_entry(out.baseline, {std::string(kNeutral[i].text)}, PolarityLabel::Neutral,
                Provenance::SentiWordNet, std::string(kNeutral[i].gloss));
  }
  for (const auto& a : kAmbiguous) {
    add_entry(out.resource, {std::string(a.text)}, PolarityLabel::Ambiguous,
              Provenance::OntoSenseNet, std::string(a.gloss));
  }
  add_entry(out.baseline, {std::string(kAmbiguous[0].text)}, PolarityLabel::Ambiguous,
            Provenance::SentiWordNet, std::string(kAmbiguous[0].gloss));
  add_entry(out.resource, {"ledu"}, PolarityLabel::Neutral, Provenance::OntoSenseNet, "no");
  add_entry(out.resource, {"kaadu"}, PolarityLabel::Neutral, Provenance::OntoSenseNet, "is not");

  for (const auto& f : kFlips)
    add_entry(out.bigrams, {std::string(f.first), std::string(f.second)}, f.label,
              Provenance::BigramExtraction, std::string(f.gloss));
  add_entry(out.bigrams, {"chala", "baagundi"}, PolarityLabel::Positive,
            Provenance::BigramExtraction, "very good");
  add_entry(out.bigrams, {"konchem", "chedu"}, PolarityLabel::Negative,
            Provenance::BigramExtraction, "somewhat bad");
  add_entry(out.bigrams, {"oka", "cinema"}, PolarityLabel::Neutral, Provenance::BigramExtraction,
            "a film");
  add_entry(out.bigrams, {"kani", "parvaledu"}, PolarityLabel::Ambiguous,
            Provenance::BigramExtraction, "but passable");

  // Per-domain composition: movie 136/132, product 101/100, book 100/99.
  struct Block {
    Domain domain;
    std::size_t positive;
    std::size_t negative;
  };
  constexpr std::array<Block, 3> kBlocks = {
      {{Domain::Movie, 136, 132}, {Domain::Product, 101, 100}, {Domain::Book, 100, 99}}};

  Rng rng(seed);
  std::vector<Review> reviews;
  std::size_t next_id = 0;
  auto pick = [&](auto const& words) { return words[rng.below(words.size())]; };
  for (const auto& block : kBlocks) {
    for (std::size_t k = 0; k < block.positive + block.negative; ++k) {
      const Sentiment gold = k < block.positive ? Sentiment::Positive : Sentiment::Negative;
      const bool pos = gold == Sentiment::Positive;
      std::vector<Chunk> chunks;
      const auto filler = 8 + rng.below(10);
      for (std::size_t f = 0; f < filler; ++f)
        chunks.push_back({std::string(pick(kFiller))});
      chunks.push_back({std::string(pick(kNeutral).text)});
      const double style = rng.uniform();
      if (style < 0.12) {
        // no lexicon signal at all
      } else {
        const auto words = 1 + rng.below(4);
        for (std::size_t w = 0; w < words; ++w) {
          const bool agrees = rng.uniform() < 0.8;
          const auto& word = (pos == agrees) ? pick(kPositive) : pick(kNegative);
          std::string token(word.text);
          if (rng.uniform() < 0.35) token += pick(kSuffixes);
          chunks.push_back({token});
        }
        if (style > 0.6) {
          const auto& f = kFlips[rng.below(kFlips.size())];
          if ((f.label == PolarityLabel::Positive) == pos || rng.uniform() < 0.15)
            chunks.push_back({std::string(f.first), std::string(f.second)});
        }
        if (rng.uniform() < 0.2) chunks.push_back({std::string(pick(kAmbiguous).text)});
      }
      reviews.push_back(
          {numbered("rev", next_id++), block.domain, flatten(chunks, rng), gold});
    }
  }
  out.corpus = Corpus(std::move(reviews));

  // Embeddings: noise plus a weak polarity direction for sentiment words.
  std::vector<std::string> vocab;
  for (const auto& w : kFiller) vocab.emplace_back(w);
  for (const auto& w : kNeutral) vocab.emplace_back(w.text);
  for (const auto& w : kAmbiguous) vocab.emplace_back(w.text);
  for (const auto& w : kPositive) vocab.emplace_back(w.text);
  for (const auto& w : kNegative) vocab.emplace_back(w.text);
  vocab.emplace_back("ledu");
  vocab.emplace_back("kaadu");
  Rng erng(derive_seed(seed, 7));
  std::vector<double> direction(out.embeddings.dim());
  for (auto& x : direction) x = erng.normal();
  for (const auto& token : vocab) {
    double shift = 0.0;
    for (const auto& w : kPositive)
      if (w.text == token) shift = 0.6;
    for (const auto& w : kNegative)
      if (w.text == token) shift = -0.6;
    std::vector<double> v(out.embeddings.dim());
    for (std::size_t d = 0; d < v.size(); ++d) {
      // round to keep the text file short and exactly reproducible
      const double raw = erng.normal() + shift * direction[d];
      v[d] = std::round(raw * 1e4) / 1e4;
    }
    out.embeddings.put(token, std::move(v));
  }
  return out;
}

}  // namespace polarkit::synth
