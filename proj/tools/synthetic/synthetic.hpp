#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarkit/corpus.hpp"
#include "polarkit/lexicon.hpp"
#include "polarkit/vectors.hpp"

namespace polarkit::synth {

struct SyntheticResources {
  Corpus corpus;
  Lexicon unigrams;  // polar unigram lexicon
  Lexicon bigrams;   // polar bigram lexicon
};

/// Reviews carrying `planted_per_review` polar unigrams, each agreeing with
/// the review label with probability `consistency`, mixed into filler words
/// that no lexicon knows.
struct PlantedOptions {
  std::size_t reviews = 200;
  std::size_t planted_per_review = 20;
  double consistency = 0.95;
  std::size_t polar_vocabulary = 40;  // per polarity
  std::size_t filler_vocabulary = 300;
  std::size_t filler_per_review = 30;
  bool include_planted = true;  // false yields the same reviews minus planted words
  std::uint64_t seed = 1;
};

SyntheticResources planted_unigram_corpus(const PlantedOptions& options);

/// Reviews whose sentiment is carried by polarity-flipping bigrams: both
/// words of a positive-review bigram are negative unigrams and vice versa.
/// A share of reviews draw from a long tail of bigrams that occur only once,
/// so bigram polling loses coverage on them.
struct FlipOptions {
  std::size_t reviews = 300;
  std::size_t frequent_bigrams = 20;  // per polarity
  double long_tail_share = 0.3;
  std::size_t filler_vocabulary = 200;
  std::size_t filler_per_review = 12;
  std::uint64_t seed = 1;
};

SyntheticResources bigram_flip_corpus(const FlipOptions& options);

/// Reviews whose embedding heads carry no label information while polar-word
/// counts track the label. Only filler words get (random) vectors; the polar
/// words are out of vocabulary.
struct NoiseHeadOptions {
  std::size_t reviews = 300;
  std::size_t dim = 16;
  std::size_t filler_vocabulary = 400;
  std::size_t filler_per_review = 25;
  std::size_t polar_vocabulary = 30;  // per polarity
  std::size_t majority_words = 4;     // polar words agreeing with the label
  std::size_t minority_words = 1;     // polar words opposing it
  std::uint64_t seed = 1;
};

struct NoiseHeadCorpus {
  SyntheticResources resources;
  EmbeddingTable table;
};

NoiseHeadCorpus noise_head_corpus(const NoiseHeadOptions& options);

/// Demo bundle mirroring the three-domain review composition.
struct DemoBundle {
  Corpus corpus;
  Lexicon baseline;   // small unigram lexicon, all four labels
  Lexicon resource;   // larger unigram lexicon, all four labels
  Lexicon bigrams;    // annotated bigram lexicon, all four labels
  EmbeddingTable embeddings;
  std::string rules_tsv;
};

DemoBundle demo_bundle(std::uint64_t seed = 2018);

/// Independent random vectors for `vocabulary`.
EmbeddingTable random_embeddings(const std::vector<std::string>& vocabulary, std::size_t dim,
                                 std::uint64_t seed);

}  // namespace polarkit::synth
