#include "app.hpp"

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarkit/agreement.hpp"
#include "polarkit/annotation.hpp"
#include "polarkit/classifiers.hpp"
#include "polarkit/corpus.hpp"
#include "polarkit/error.hpp"
#include "polarkit/extraction.hpp"
#include "polarkit/lexicon.hpp"
#include "polarkit/polling.hpp"
#include "polarkit/random.hpp"
#include "polarkit/segmenter.hpp"
#include "polarkit/service.hpp"
#include "polarkit/vectors.hpp"
#include "polarkit/version.hpp"

namespace polarkit::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// Bad flags, bad config, unmet preconditions: exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config keys whose relative values are taken relative to the config file.
const std::set<std::string, std::less<>> kPathKeys = {
    "corpus",         "baseline-lexicon", "unigram-lexicon", "bigram-lexicon", "embeddings",
    "rules",          "log",              "data-dir",        "ui-dir"};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Provenance lines prefixed with '#'.
struct Header {
  std::string command;
  std::string canonical;  // effective configuration dump
  std::optional<std::uint64_t> seed;

  void write(std::ostream& os) const {
    os << "# polarkit " << kVersion << '\n'
       << "# command: " << command << '\n'
       << "# config-hash: " << hex64(fnv1a(canonical)) << '\n'
       << "# seed: " << (seed ? std::to_string(*seed) : std::string("none")) << '\n';
  }
};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoFailure, "cannot write " + path.string());
  return f;
}

void write_file(const fs::path& path, const std::string& contents) {
  auto f = open_out(path);
  f << contents;
  if (!f) throw Error(Errc::IoFailure, "cannot write " + path.string());
}

// ---------------------------------------------------------------------------
// shared option groups

struct SplitOptions {
  std::string ratio = "7:3";
  std::uint64_t seed = 42;
  bool no_stratify = false;
};

void add_split_options(CLI::App* app, SplitOptions& o) {
  app->add_option("--ratio", o.ratio, "train:test ratio, e.g. 7:3 or 0.7");
  app->add_option("--seed", o.seed, "split and training seed");
  app->add_flag("--no-stratify", o.no_stratify, "plain shuffle instead of per-label split");
}

CorpusSplit make_split(const Corpus& corpus, const SplitOptions& o) {
  const auto ratio = parse_split_ratio(o.ratio);
  if (!ratio) throw UsageError("--ratio: cannot parse '" + o.ratio + "'");
  return split_corpus(corpus, *ratio, o.seed, !o.no_stratify);
}

Corpus load_nonempty_corpus(const std::string& path) {
  Corpus corpus = load_corpus(path);
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "corpus " + path + " has no reviews");
  return corpus;
}

CLI::Option* add_input(CLI::App* app, const std::string& name, std::string& target,
                       const std::string& help) {
  return app->add_option(name, target, help)->check(CLI::ExistingFile);
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions {
  std::string corpus;
  SplitOptions split;
  std::string split_out;
};

void cmd_ingest(const IngestOptions& o, const Header& header, std::ostream& out) {
  const Corpus corpus = load_nonempty_corpus(o.corpus);
  const CorpusSplit split = make_split(corpus, o.split);

  std::map<Domain, std::pair<std::size_t, std::size_t>> by_domain;
  for (const auto& r : corpus.reviews()) {
    auto& cell = by_domain[r.domain];
    (r.gold == Sentiment::Positive ? cell.first : cell.second)++;
  }
  header.write(out);
  out << "domain\tpositive\tnegative\ttotal\n";
  for (const auto& [d, c] : by_domain)
    out << to_string(d) << '\t' << c.first << '\t' << c.second << '\t' << c.first + c.second
        << '\n';
  out << "all\t" << corpus.count(Sentiment::Positive) << '\t' << corpus.count(Sentiment::Negative)
      << '\t' << corpus.size() << '\n';

  auto side_counts = [&](const std::set<std::string>& ids) {
    std::size_t pos = 0;
    for (const auto& id : ids) pos += corpus.find(id)->gold == Sentiment::Positive;
    return std::pair{pos, ids.size() - pos};
  };
  const auto tr = side_counts(split.train_ids);
  const auto te = side_counts(split.test_ids);
  out << "split\tpositive\tnegative\ttotal\n"
      << "train\t" << tr.first << '\t' << tr.second << '\t' << split.train_ids.size() << '\n'
      << "test\t" << te.first << '\t' << te.second << '\t' << split.test_ids.size() << '\n';

  if (!o.split_out.empty()) {
    auto f = open_out(o.split_out);
    header.write(f);
    f << "id\tside\n";
    for (const auto& r : corpus.reviews())
      f << r.id << '\t' << (split.in_train(r.id) ? "train" : "test") << '\n';
  }
}

// ---------------------------------------------------------------------------
// extract

struct ExtractOptions {
  std::string corpus;
  std::uint64_t min_count = 2;
  std::string scope = "full";
  SplitOptions split;
  std::string rules;
  std::string out;
};

void cmd_extract(const ExtractOptions& o, const Header& header, std::ostream& out) {
  if (o.scope != "full" && o.scope != "train")
    throw UsageError("--scope must be 'full' or 'train', got '" + o.scope + "'");
  const Corpus corpus = load_nonempty_corpus(o.corpus);
  std::optional<SegmentationRules> rules;
  if (!o.rules.empty()) rules = load_rules(o.rules);

  std::optional<CorpusSplit> split;
  ExtractionScope scope = ExtractionScope::FullCorpus;
  if (o.scope == "train") {
    split = make_split(corpus, o.split);
    scope = ExtractionScope::TrainSplit;
  }
  auto counts = count_bigrams(
      corpus_streams(corpus, scope, split ? &*split : nullptr, rules ? &*rules : nullptr));
  const auto candidates = threshold_bigrams(counts, o.min_count);

  std::ostringstream body;
  header.write(body);
  write_candidates(candidates, body);
  if (o.out.empty()) {
    out << body.str();
  } else {
    write_file(o.out, body.str());
    out << candidates.size() << " candidates written to " << o.out << '\n';
  }
}

// ---------------------------------------------------------------------------
// kappa

struct KappaCliOptions {
  std::vector<std::string> files;
  std::string log;
  std::string task;
  std::string weighting = "linear";
  bool exclude_borderline = false;
};

std::vector<std::pair<std::string, Judgment>> read_judgments(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  std::vector<std::pair<std::string, Judgment>> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with('#')) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(Errc::MalformedRow,
                  path.string() + ":" + std::to_string(lineno) + ": expected item<TAB>judgment",
                  lineno);
    const std::string item = line.substr(0, tab);
    const std::string value = line.substr(tab + 1);
    if (std::exchange(header_allowed, false) && (item == "item" || item == "item_id")) continue;
    const auto j = parse_judgment(value);
    if (!j)
      throw Error(Errc::UnknownLabel,
                  path.string() + ":" + std::to_string(lineno) + ": unknown judgment '" + value +
                      "'",
                  lineno);
    if (!seen.insert(item).second)
      throw Error(Errc::DuplicateId,
                  path.string() + ":" + std::to_string(lineno) + ": item '" + item +
                      "' appears twice",
                  lineno);
    out.emplace_back(item, *j);
  }
  return out;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void cmd_kappa(const KappaCliOptions& o, const Header& header, std::ostream& out) {
  const bool from_files = !o.files.empty();
  if (from_files == !o.log.empty())
    throw UsageError("give either two annotation files or --log");
  if (from_files && o.files.size() != 2)
    throw UsageError("expected exactly two annotation files");
  KappaOptions options;
  const auto weighting = parse_weighting(o.weighting);
  if (!weighting) throw UsageError("--weighting: unknown value '" + o.weighting + "'");
  options.weighting = *weighting;
  options.include_borderline = !o.exclude_borderline;

  std::vector<std::pair<Judgment, Judgment>> pairs;
  std::string source;
  if (from_files) {
    const auto a = read_judgments(o.files[0]);
    const auto b = read_judgments(o.files[1]);
    std::map<std::string, Judgment> second(b.begin(), b.end());
    if (a.size() != b.size())
      throw Error(Errc::ItemMismatch, "annotation files cover different items");
    for (const auto& [item, j] : a) {
      auto it = second.find(item);
      if (it == second.end())
        throw Error(Errc::ItemMismatch, "item '" + item + "' missing from " + o.files[1]);
      pairs.emplace_back(j, it->second);
    }
    source = "files";
  } else {
    const auto tasks = AnnotationStore::replay(o.log);
    const AnnotationTask* task = nullptr;
    for (const auto& t : tasks)
      if (o.task.empty() ? tasks.size() == 1 : t.task_id == o.task) task = &t;
    if (!task) {
      if (o.task.empty())
        throw UsageError("log holds " + std::to_string(tasks.size()) + " tasks; pick one with --task");
      throw Error(Errc::UnknownTask, "no task '" + o.task + "' in " + o.log);
    }
    pairs = completed_pairs(*task);
    source = "log:" + task->task_id;
  }
  if (!options.include_borderline)
    std::erase_if(pairs, [](const auto& p) {
      return p.first == Judgment::Uncertain || p.second == Judgment::Uncertain;
    });
  const auto result = cohen_kappa(pairs, options);
  const auto order = effective_order(options);

  header.write(out);
  out << "source\t" << source << '\n'
      << "weighting\t" << to_string(options.weighting) << '\n'
      << "include_borderline\t" << (options.include_borderline ? "true" : "false") << '\n'
      << "pairs\t" << pairs.size() << '\n'
      << "observed_agreement\t" << fixed(result.observed_agreement) << '\n'
      << "chance_agreement\t" << fixed(result.chance_agreement) << '\n'
      << "kappa\t" << fixed(result.kappa) << '\n'
      << "table";
  for (auto j : order) out << '\t' << to_string(j);
  out << '\n';
  for (std::size_t r = 0; r < order.size(); ++r) {
    out << to_string(order[r]);
    for (std::size_t c = 0; c < order.size(); ++c) out << '\t' << result.table.at(r, c);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// stats

struct StatsOptions {
  std::vector<std::string> lexicons;
  std::string out;
};

void cmd_stats(const StatsOptions& o, const Header& header, std::ostream& out) {
  if (o.lexicons.empty()) throw UsageError("no lexicon given");
  std::vector<std::pair<std::string, LabelDistribution>> rows;
  for (const auto& spec : o.lexicons) {
    std::string name;
    fs::path path;
    if (auto eq = spec.find('='); eq != std::string::npos && !fs::exists(spec)) {
      name = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    } else {
      path = spec;
      name = path.stem().string();
    }
    if (!fs::exists(path)) throw UsageError("lexicon not found: " + path.string());
    rows.emplace_back(name, lexicon_stats(load_lexicon(path)));
  }
  std::ostringstream body;
  header.write(body);
  write_stats_table(body, rows);
  if (o.out.empty()) out << body.str();
  else write_file(o.out, body.str());
}

// ---------------------------------------------------------------------------
// poll

struct PollCliOptions {
  std::string corpus;
  std::string baseline_lexicon;
  std::string unigram_lexicon;
  std::string bigram_lexicon;
  std::vector<std::string> modes = {"all"};
  std::string segment = "both";
  std::string rules;
  std::uint64_t min_bigram_count = 2;
  SplitOptions split;
  bool no_split = false;
  std::string scope = "auto";
  std::string out;
};

struct PollColumn {
  std::string label;
  PollingMode mode;
  const Lexicon* unigrams;
  const Lexicon* bigrams;
};

std::string slug(std::string_view label) {
  std::string s;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
    else if (!s.empty() && s.back() != '_') s += '_';
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

json report_json(const PollingReport& r) {
  json j;
  j["column"] = r.column;
  j["mode"] = std::string(to_string(r.mode));
  j["segmentation"] = r.segmentation;
  j["accuracy_pct"] = r.accuracy_pct ? json(*r.accuracy_pct) : json(nullptr);
  j["correct"] = r.correct;
  j["classified"] = r.classified();
  j["unclassified"] = r.unclassified;
  j["total"] = r.total;
  json domains = json::object();
  for (const auto& [d, t] : r.per_domain)
    domains[std::string(to_string(d))] = {
        {"correct", t.correct}, {"classified", t.classified}, {"total", t.total}};
  j["per_domain"] = std::move(domains);
  return j;
}

void cmd_poll(const PollCliOptions& o, const Header& header, std::ostream& out) {
  // Resolve modes and segmentation before touching any data.
  std::set<PollingMode> modes;
  bool explicit_modes = true;
  for (const auto& m : o.modes) {
    if (m == "all") {
      explicit_modes = false;
      modes.insert({PollingMode::Unigram, PollingMode::Bigram, PollingMode::UnigramPlusBigram});
    } else if (auto mode = parse_polling_mode(m)) {
      modes.insert(*mode);
    } else {
      throw UsageError("--mode: unknown mode '" + m + "'");
    }
  }
  std::vector<bool> segmentations;
  if (o.segment == "off") segmentations = {false};
  else if (o.segment == "on") segmentations = {true};
  else if (o.segment == "both") segmentations = {false, true};
  else throw UsageError("--segment must be off, on or both");
  const bool wants_segmentation = o.segment != "off";
  if (wants_segmentation && o.rules.empty() && (explicit_modes || o.segment == "on"))
    throw UsageError("--segment " + o.segment + " needs --rules");
  if (wants_segmentation && o.rules.empty()) segmentations = {false};

  const bool has_unigram = !o.baseline_lexicon.empty() || !o.unigram_lexicon.empty();
  const bool has_bigram = !o.bigram_lexicon.empty();
  if (!has_unigram && !has_bigram) throw UsageError("poll needs at least one polar lexicon");
  auto drop_or_fail = [&](PollingMode mode, bool available, const std::string& why) {
    if (!modes.contains(mode) || available) return;
    if (explicit_modes) throw UsageError(why);
    modes.erase(mode);
  };
  drop_or_fail(PollingMode::Unigram, has_unigram, "unigram mode needs a unigram lexicon");
  drop_or_fail(PollingMode::Bigram, has_bigram, "bigram mode needs --bigram-lexicon");
  drop_or_fail(PollingMode::UnigramPlusBigram, has_unigram && has_bigram,
               "combined mode needs a unigram and a bigram lexicon");
  const bool bigram_modes =
      modes.contains(PollingMode::Bigram) || modes.contains(PollingMode::UnigramPlusBigram);
  if (bigram_modes && o.no_split)
    throw UsageError("bigram polling needs a training split; remove --no-split");

  EvalScope scope = EvalScope::Auto;
  if (o.scope == "test") scope = EvalScope::TestSplit;
  else if (o.scope == "full") scope = EvalScope::FullCorpus;
  else if (o.scope != "auto") throw UsageError("--scope must be auto, test or full");
  if (scope == EvalScope::TestSplit && o.no_split)
    throw UsageError("--scope test needs a split; remove --no-split");

  const Corpus corpus = load_nonempty_corpus(o.corpus);
  std::optional<SegmentationRules> rules;
  if (!o.rules.empty()) rules = load_rules(o.rules);
  Lexicon baseline, resource, bigram_all, bigram_train;
  if (!o.baseline_lexicon.empty()) baseline = filter_polar(load_lexicon(o.baseline_lexicon));
  if (!o.unigram_lexicon.empty()) resource = filter_polar(load_lexicon(o.unigram_lexicon));
  if (!o.bigram_lexicon.empty()) bigram_all = load_lexicon(o.bigram_lexicon);
  std::optional<CorpusSplit> split;
  if (!o.no_split) split = make_split(corpus, o.split);
  if (split && has_bigram)
    bigram_train = training_bigram_lexicon(corpus, *split, bigram_all, o.min_bigram_count);

  const auto columns_labels = default_polling_columns();
  const Lexicon empty;
  const Lexicon& combined_uni = o.unigram_lexicon.empty() ? baseline : resource;
  std::vector<PollColumn> columns;
  if (modes.contains(PollingMode::Unigram)) {
    if (!o.baseline_lexicon.empty())
      columns.push_back({columns_labels[0], PollingMode::Unigram, &baseline, &empty});
    if (!o.unigram_lexicon.empty())
      columns.push_back({columns_labels[1], PollingMode::Unigram, &resource, &empty});
  }
  if (modes.contains(PollingMode::Bigram))
    columns.push_back({columns_labels[2], PollingMode::Bigram, &empty, &bigram_train});
  if (modes.contains(PollingMode::UnigramPlusBigram))
    columns.push_back(
        {columns_labels[3], PollingMode::UnigramPlusBigram, &combined_uni, &bigram_train});

  std::vector<PollingReport> reports;
  for (bool seg : segmentations)
    for (const auto& c : columns) {
      PollingOptions po;
      po.mode = c.mode;
      po.segmentation = seg;
      po.rules = seg ? &*rules : nullptr;
      po.scope = scope;
      po.column = c.label;
      reports.push_back(
          evaluate_polling(corpus, split ? &*split : nullptr, *c.unigrams, *c.bigrams, po));
    }

  std::ostringstream table;
  header.write(table);
  emit_polling_table(reports, table, columns_labels);
  out << table.str();
  if (o.out.empty()) return;

  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_file(dir / "polling_table.tsv", table.str());
  json summary;
  summary["reports"] = json::array();
  for (const auto& r : reports) summary["reports"].push_back(report_json(r));
  summary["bigram_lexicon_entries"] = bigram_train.size();
  write_file(dir / "polling_reports.json", summary.dump(2) + "\n");
  for (const auto& r : reports) {
    std::ostringstream v;
    header.write(v);
    write_verdicts(r, v);
    write_file(dir / "verdicts" /
                   (slug(r.column) + (r.segmentation ? "_after" : "_before") + ".tsv"),
               v.str());
  }
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyOptions {
  std::string corpus;
  std::string embeddings;
  std::string unigram_lexicon;
  std::string bigram_lexicon;
  std::vector<std::string> classifiers = {"all"};
  std::vector<std::string> feature_sets = {"all"};
  SplitOptions split;
  std::uint64_t min_bigram_count = 2;
  bool length_normalize = false;
  double svm_lambda = LinearSvmParams{}.lambda;
  std::size_t svm_epochs = LinearSvmParams{}.epochs;
  double rbf_c = GaussianSvmParams{}.c;
  double rbf_gamma = 0.0;  // 0 means 1/D
  std::size_t forest_trees = RandomForestParams{}.trees;
  std::size_t forest_depth = RandomForestParams{}.max_depth;
  std::size_t threads = 0;
  std::size_t mlp_hidden = MlpParams{}.hidden;
  std::size_t mlp_epochs = MlpParams{}.epochs;
  double mlp_lr = MlpParams{}.learning_rate;
  std::size_t knn_k = KnnParams{}.k;
  std::string out;
  std::string features_out;
};

std::vector<ClassifierSpec> classifier_specs(const ClassifyOptions& o) {
  std::vector<ClassifierKind> kinds;
  for (const auto& name : o.classifiers) {
    if (name == "all") {
      kinds.assign(std::begin(kAllClassifiers), std::end(kAllClassifiers));
    } else if (auto k = parse_classifier(name)) {
      kinds.push_back(*k);
    } else {
      throw UsageError("unknown classifier: " + name);
    }
  }
  std::vector<ClassifierSpec> specs;
  for (auto kind : kinds) {
    auto spec = ClassifierSpec::defaults(kind, derive_seed(o.split.seed, static_cast<int>(kind)));
    std::visit(
        [&](auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, LinearSvmParams>) {
            p.lambda = o.svm_lambda;
            p.epochs = o.svm_epochs;
          } else if constexpr (std::is_same_v<P, GaussianSvmParams>) {
            p.c = o.rbf_c;
            if (o.rbf_gamma > 0) p.gamma = o.rbf_gamma;
          } else if constexpr (std::is_same_v<P, RandomForestParams>) {
            p.trees = o.forest_trees;
            p.max_depth = o.forest_depth;
            p.threads = o.threads;
          } else if constexpr (std::is_same_v<P, MlpParams>) {
            p.hidden = o.mlp_hidden;
            p.epochs = o.mlp_epochs;
            p.learning_rate = o.mlp_lr;
          } else {
            p.k = o.knn_k;
          }
        },
        spec.params);
    try {
      spec.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<FeatureSet> feature_sets(const std::vector<std::string>& names) {
  std::vector<FeatureSet> out;
  for (const auto& name : names) {
    if (name == "all") out.assign(kAllFeatureSets.begin(), kAllFeatureSets.end());
    else if (auto fs = parse_feature_set(name)) out.push_back(*fs);
    else throw UsageError("unknown feature set: " + name);
  }
  return out;
}

void cmd_classify(const ClassifyOptions& o, const Header& header, std::ostream& out,
                  std::ostream& err) {
  const auto specs = classifier_specs(o);
  const auto sets = feature_sets(o.feature_sets);

  const Corpus corpus = load_nonempty_corpus(o.corpus);
  auto emb = load_embeddings(o.embeddings);
  for (const auto& w : emb.warnings) err << "warning: " << w << '\n';
  const Lexicon unigrams = filter_polar(load_lexicon(o.unigram_lexicon));
  const CorpusSplit split = make_split(corpus, o.split);
  Lexicon bigrams;
  if (!o.bigram_lexicon.empty())
    bigrams = training_bigram_lexicon(corpus, split, load_lexicon(o.bigram_lexicon),
                                      o.min_bigram_count);

  const ComparisonInputs inputs{corpus, split, emb.table, unigrams, bigrams,
                                AugmentOptions{o.length_normalize}};
  const auto cells = compare_feature_sets(inputs, specs, sets);

  std::ostringstream csv;
  header.write(csv);
  write_figure_csv(cells, csv);

  if (!o.features_out.empty()) {
    const PolarityMatcher matcher(unigrams, bigrams);
    std::vector<FeatureRow> rows;
    for (const auto& r : corpus.reviews()) {
      const auto tokens = tokenize(r.text);
      rows.push_back({r.id, std::string(to_string(r.gold)),
                      augment(doc_vector(tokens, emb.table).values, tokens, matcher,
                              inputs.augment)});
    }
    auto f = open_out(o.features_out);
    header.write(f);
    write_feature_matrix(rows, f);
  }

  if (o.out.empty()) {
    out << csv.str();
    return;
  }
  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_file(dir / "accuracy.csv", csv.str());
  json metrics;
  metrics["train_size"] = split.train_ids.size();
  metrics["test_size"] = split.test_ids.size();
  metrics["cells"] = json::array();
  for (const auto& c : cells) {
    const auto& e = c.evaluation;
    metrics["cells"].push_back({
        {"classifier", std::string(to_string(c.kind))},
        {"feature_set", std::string(to_string(c.features))},
        {"accuracy_pct", e.accuracy_pct},
        {"correct", e.correct},
        {"total", e.total},
        {"positive", {{"correct", e.positive.correct}, {"total", e.positive.total}}},
        {"negative", {{"correct", e.negative.correct}, {"total", e.negative.total}}},
    });
  }
  write_file(dir / "metrics.json", metrics.dump(2) + "\n");
  out << cells.size() << " cells written to " << (dir / "accuracy.csv").string() << '\n';
}

// ---------------------------------------------------------------------------
// serve

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "annotation-data";
  std::string ui_dir;
};

void cmd_serve(const ServeOptions& o, std::ostream& out) {
  fs::create_directories(o.data_dir);
  AnnotationStore store(fs::path(o.data_dir) / "events.jsonl");
  ServiceOptions so;
  if (!o.ui_dir.empty()) so.ui_dir = o.ui_dir;
  AnnotationServer server(store, so);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  out << "serving on http://" << o.host << ':' << o.port << " (log "
      << (fs::path(o.data_dir) / "events.jsonl").string() << ")\n"
      << std::flush;
  const bool ok = server.listen(o.host, o.port);
  if (!ok) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  if (!ok) throw UsageError("cannot listen on " + o.host + ":" + std::to_string(o.port));
}

// ---------------------------------------------------------------------------
// configuration file

bool truthy(const std::string& v) {
  return v == "true" || v == "1" || v == "yes" || v == "on";
}

CLI::Option* long_option(CLI::App* app, const std::string& key) {
  for (auto* opt : app->get_options())
    for (const auto& name : opt->get_lnames())
      if (name == key) return opt;
  return nullptr;
}

bool user_gave(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args)
    if (a == flag || a.starts_with(flag + "=")) return true;
  return false;
}

/// Expands `config_path` into --key=value arguments for `sub`. Keys at top
/// level apply to any subcommand defining them; keys under [name] must exist
/// in that subcommand. A key the user also passed on the command line is
/// skipped so the flag wins.
std::vector<std::string> config_args(CLI::App& app, CLI::App* sub, const fs::path& config_path,
                                     const std::vector<std::string>& user_args) {
  if (!fs::exists(config_path)) throw UsageError("config file not found: " + config_path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigBase().from_file(config_path.string());
  } catch (const CLI::Error& e) {
    throw UsageError("config " + config_path.string() + ": " + e.what());
  }
  const fs::path base = config_path.parent_path();
  std::vector<std::string> out;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (item.parents.size() > 1)
      throw UsageError("config: nested section for '" + item.name + "'");
    CLI::App* target = sub;
    if (!item.parents.empty()) {
      CLI::App* section = nullptr;
      try {
        section = app.get_subcommand(item.parents[0]);
      } catch (const CLI::OptionNotFound&) {
        throw UsageError("config: unknown section [" + item.parents[0] + "]");
      }
      if (!long_option(section, item.name))
        throw UsageError("config: [" + item.parents[0] + "] has no option '" + item.name + "'");
      if (section != sub) continue;
    } else {
      bool known = false;
      for (auto* s : app.get_subcommands({})) known = known || long_option(s, item.name);
      if (!known) throw UsageError("config: unknown key '" + item.name + "'");
    }
    CLI::Option* opt = long_option(target, item.name);
    if (!opt || item.name == "config" || user_gave(user_args, item.name)) continue;
    if (opt->get_type_size() == 0) {
      if (!item.inputs.empty() && truthy(item.inputs.front())) out.push_back("--" + item.name);
      continue;
    }
    for (auto value : item.inputs) {
      if (kPathKeys.contains(item.name) && !value.empty() && fs::path(value).is_relative())
        value = (base / value).lexically_normal().string();
      out.push_back("--" + item.name + "=" + value);
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Telugu sentiment lexicon and polarity toolkit", "polarkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string config_unused;
  auto make_sub = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->option_defaults()->always_capture_default();
    sub->add_option("--config", config_unused,
                    "flat key=value file; flags given on the command line win");
    return sub;
  };

  IngestOptions ingest;
  auto* s_ingest = make_sub("ingest", "validate a corpus and report its split");
  add_input(s_ingest, "--corpus", ingest.corpus, "corpus JSONL")->required();
  add_split_options(s_ingest, ingest.split);
  s_ingest->add_option("--split-out", ingest.split_out, "write id<TAB>side assignment here");

  ExtractOptions extract;
  auto* s_extract = make_sub("extract", "count and threshold bigram candidates");
  add_input(s_extract, "--corpus", extract.corpus, "corpus JSONL")->required();
  s_extract->add_option("--min-count", extract.min_count, "keep bigrams seen at least this often")
      ->check(CLI::PositiveNumber);
  s_extract->add_option("--scope", extract.scope, "full or train");
  add_split_options(s_extract, extract.split);
  add_input(s_extract, "--rules", extract.rules, "segment tokens with these suffix rules");
  s_extract->add_option("--out", extract.out, "candidate TSV (default: stdout)");

  KappaCliOptions kappa;
  auto* s_kappa = make_sub("kappa", "inter-annotator agreement");
  s_kappa->add_option("files", kappa.files, "two item<TAB>judgment files")
      ->check(CLI::ExistingFile);
  add_input(s_kappa, "--log", kappa.log, "annotation event log");
  s_kappa->add_option("--task", kappa.task, "task id inside --log");
  s_kappa->add_option("--weighting", kappa.weighting, "linear or unweighted");
  s_kappa->add_flag("--exclude-borderline", kappa.exclude_borderline,
                    "drop pairs where a side was uncertain");

  StatsOptions stats;
  auto* s_stats = make_sub("stats", "label distribution of lexicons");
  s_stats->add_option("lexicons", stats.lexicons, "lexicon TSV files, optionally Name=path");
  s_stats->add_option("--out", stats.out, "write the table here (default: stdout)");

  PollCliOptions poll;
  auto* s_poll = make_sub("poll", "majority-polling accuracy table");
  add_input(s_poll, "--corpus", poll.corpus, "corpus JSONL")->required();
  add_input(s_poll, "--baseline-lexicon", poll.baseline_lexicon, "baseline unigram lexicon");
  add_input(s_poll, "--unigram-lexicon", poll.unigram_lexicon, "unigram lexicon");
  add_input(s_poll, "--bigram-lexicon", poll.bigram_lexicon, "annotated bigram lexicon");
  s_poll->add_option("--mode", poll.modes, "all, unigram, bigram, combined")->delimiter(',');
  s_poll->add_option("--segment", poll.segment, "off, on or both");
  add_input(s_poll, "--rules", poll.rules, "suffix rules TSV");
  s_poll->add_option("--min-bigram-count", poll.min_bigram_count,
                     "training occurrences needed to keep a bigram")
      ->check(CLI::PositiveNumber);
  add_split_options(s_poll, poll.split);
  s_poll->add_flag("--no-split", poll.no_split, "score unigram polling on the full corpus only");
  s_poll->add_option("--scope", poll.scope, "auto, test or full");
  s_poll->add_option("--out", poll.out, "directory for table, JSON summary and verdicts");

  ClassifyOptions classify;
  auto* s_cls = make_sub("classify", "classifier comparison over feature sets");
  add_input(s_cls, "--corpus", classify.corpus, "corpus JSONL")->required();
  add_input(s_cls, "--embeddings", classify.embeddings, "word vectors, word2vec text format")
      ->required();
  add_input(s_cls, "--unigram-lexicon", classify.unigram_lexicon, "unigram lexicon")->required();
  add_input(s_cls, "--bigram-lexicon", classify.bigram_lexicon, "annotated bigram lexicon");
  s_cls->add_option("--classifiers", classify.classifiers,
                    "all or linear_svm,gaussian_svm,random_forest,mlp,knn")
      ->delimiter(',');
  s_cls->add_option("--feature-sets", classify.feature_sets,
                    "all or plain,plus_uni,plus_bi,plus_uni_bi")
      ->delimiter(',');
  add_split_options(s_cls, classify.split);
  s_cls->add_option("--min-bigram-count", classify.min_bigram_count,
                    "training occurrences needed to keep a bigram")
      ->check(CLI::PositiveNumber);
  s_cls->add_flag("--length-normalize", classify.length_normalize,
                  "divide polarity counts by review length");
  s_cls->add_option("--svm-lambda", classify.svm_lambda, "linear SVM regularization");
  s_cls->add_option("--svm-epochs", classify.svm_epochs, "linear SVM epochs");
  s_cls->add_option("--rbf-c", classify.rbf_c, "Gaussian SVM box constraint");
  s_cls->add_option("--rbf-gamma", classify.rbf_gamma, "Gaussian SVM gamma (0: 1/D)");
  s_cls->add_option("--forest-trees", classify.forest_trees, "random forest size");
  s_cls->add_option("--forest-depth", classify.forest_depth, "random forest depth cap");
  s_cls->add_option("--threads", classify.threads, "forest worker threads (0: all cores)");
  s_cls->add_option("--mlp-hidden", classify.mlp_hidden, "MLP hidden units");
  s_cls->add_option("--mlp-epochs", classify.mlp_epochs, "MLP epochs");
  s_cls->add_option("--mlp-lr", classify.mlp_lr, "MLP learning rate");
  s_cls->add_option("--knn-k", classify.knn_k, "neighbours for KNN");
  s_cls->add_option("--out", classify.out, "directory for accuracy.csv and metrics.json");
  s_cls->add_option("--features-out", classify.features_out, "write the feature matrix here");

  ServeOptions serve;
  auto* s_serve = make_sub("serve", "run the annotation service");
  s_serve->add_option("--host", serve.host, "bind address");
  s_serve->add_option("--port", serve.port, "TCP port")->check(CLI::Range(0, 65535));
  s_serve->add_option("--data-dir", serve.data_dir, "directory holding the event log");
  s_serve->add_option("--ui-dir", serve.ui_dir, "static UI bundle served at /")
      ->check(CLI::ExistingDirectory);

  // Split off --config and expand it ahead of the user's own arguments.
  std::vector<std::string> args;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    const auto& a = raw_args[i];
    if (a == "--config") {
      if (i + 1 == raw_args.size()) {
        err << "--config needs a file\n";
        return kExitConfig;
      }
      config_path = raw_args[++i];
    } else if (a.starts_with("--config=")) {
      config_path = a.substr(9);
    } else {
      args.push_back(a);
    }
  }
  if (config_path) {
    auto name = std::find_if(args.begin(), args.end(), [](const std::string& a) {
      return !a.starts_with('-');
    });
    CLI::App* sub = nullptr;
    if (name != args.end()) {
      try {
        sub = app.get_subcommand(*name);
      } catch (const CLI::OptionNotFound&) {
      }
    }
    if (!sub) {
      err << "--config needs a subcommand\n";
      return kExitConfig;
    }
    try {
      auto injected = config_args(app, sub, *config_path, args);
      args.insert(name + 1, injected.begin(), injected.end());
    } catch (const UsageError& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  Header header{sub->get_name(), sub->config_to_str(true, false), std::nullopt};
  try {
    if (sub == s_ingest) {
      header.seed = ingest.split.seed;
      cmd_ingest(ingest, header, out);
    } else if (sub == s_extract) {
      if (extract.scope == "train") header.seed = extract.split.seed;
      cmd_extract(extract, header, out);
    } else if (sub == s_kappa) {
      cmd_kappa(kappa, header, out);
    } else if (sub == s_stats) {
      cmd_stats(stats, header, out);
    } else if (sub == s_poll) {
      if (!poll.no_split) header.seed = poll.split.seed;
      cmd_poll(poll, header, out);
    } else if (sub == s_cls) {
      header.seed = classify.split.seed;
      cmd_classify(classify, header, out, err);
    } else if (sub == s_serve) {
      cmd_serve(serve, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace polarkit::cli
