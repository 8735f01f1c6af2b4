// Writes the bundled demo data set.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "polarkit/lexicon.hpp"
#include "polarkit/vectors.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kDemoConfig =
    "# Demo manifest. Paths are relative to this file.\n"
    "corpus = corpus.jsonl\n"
    "baseline-lexicon = baseline_lexicon.tsv\n"
    "unigram-lexicon = resource_lexicon.tsv\n"
    "bigram-lexicon = bigram_lexicon.tsv\n"
    "embeddings = embeddings.txt\n"
    "rules = rules.tsv\n"
    "ratio = 7:3\n"
    "seed = 42\n"
    "min-bigram-count = 2\n";

void write(const fs::path& path, auto&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  fn(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic demo data set", "polarkit-synth"};
  std::string out_dir = "data/demo";
  std::uint64_t seed = 2018;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto bundle = polarkit::synth::demo_bundle(seed);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write(dir / "corpus.jsonl", [&](auto& f) { polarkit::write_corpus(bundle.corpus, f); });
    write(dir / "baseline_lexicon.tsv",
          [&](auto& f) { polarkit::write_lexicon(bundle.baseline, f); });
    write(dir / "resource_lexicon.tsv",
          [&](auto& f) { polarkit::write_lexicon(bundle.resource, f); });
    write(dir / "bigram_lexicon.tsv", [&](auto& f) { polarkit::write_lexicon(bundle.bigrams, f); });
    write(dir / "embeddings.txt",
          [&](auto& f) { polarkit::write_embeddings(bundle.embeddings, f); });
    write(dir / "rules.tsv", [&](auto& f) { f << bundle.rules_tsv; });
    write(dir / "demo.conf", [&](auto& f) { f << kDemoConfig; });
    std::cout << "wrote " << bundle.corpus.size() << " reviews to " << dir.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
