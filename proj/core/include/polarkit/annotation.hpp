#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polarkit/agreement.hpp"
#include "polarkit/lexicon.hpp"

namespace polarkit {

enum class ItemStatus { Unlabeled, SingleLabeled, DualLabeled, Final, ReIteration, Unresolved };

/// "unlabeled", "single_labeled", "dual_labeled", "final", "reiteration",
/// "unresolved".
std::string_view to_string(ItemStatus s) noexcept;

struct TaskItem {
  std::string item_id;
  std::string ngram;  // lexicon key
  std::optional<std::string> gloss;
  std::uint64_t count = 0;
};

struct ItemState {
  ItemStatus status = ItemStatus::Unlabeled;
  unsigned round = 1;
  std::optional<PolarityLabel> label;  // set when Final
  bool borderline = false;
  bool disagreement = false;
  bool reviewed = false;  // senior confirmed or overrode the outcome
  /// Judgments submitted in the current round, keyed by annotator id.
  std::map<std::string, Judgment> current;
  /// Judgments of the last completed round, ordered as the task roster.
  std::optional<std::pair<Judgment, Judgment>> last_pair;
};

struct AnnotationTask {
  std::string task_id;
  std::vector<TaskItem> items;
  std::array<Annotator, 2> annotators;
  Provenance provenance = Provenance::Manual;
  unsigned max_rounds = 2;
  std::int64_t created = 0;
  std::vector<ItemState> states;
  std::unordered_map<std::string, std::size_t> index;

  const Annotator* annotator(std::string_view id) const;
  const Annotator& senior() const;
};

struct ProgressCounts {
  std::size_t items = 0;
  std::size_t unlabeled = 0;
  std::size_t single_labeled = 0;
  std::size_t final = 0;
  std::size_t reiteration = 0;
  std::size_t unresolved = 0;
  std::size_t dual_labeled_pairs = 0;  // items with a completed round
};

struct KappaSnapshot {
  KappaResult result;
  std::vector<Judgment> categories;
  std::size_t pairs = 0;
  ProgressCounts progress;
};

struct ItemView {
  std::size_t position = 0;
  TaskItem item;
  ItemState state;
};

struct TaskSpec {
  std::vector<TaskItem> items;
  std::vector<Annotator> annotators;
  Provenance provenance = Provenance::Manual;
  unsigned max_rounds = 2;
};

/// Dual-annotator task store backed by an append-only JSONL event log.
///
/// Every mutation is validated, appended (and flushed) to the log, then
/// applied through the same code path used for replay, so the in-memory item
/// index is always a pure function of the log. Writers are serialized; readers
/// share a lock and see a consistent prefix.
class AnnotationStore {
 public:
  using Clock = std::function<std::int64_t()>;

  /// In-memory store with no persistence.
  AnnotationStore();
  /// Opens (creating if needed) the log at `log_path` and replays it.
  explicit AnnotationStore(std::filesystem::path log_path, Clock clock = {});

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// Replays an existing log without opening it for writing.
  static std::vector<AnnotationTask> replay(const std::filesystem::path& log_path);

  /// Throws Error{InvalidArgument} for an empty item list, duplicate item ids
  /// or a roster that is not two annotators with distinct ids and ranks.
  std::string create_task(TaskSpec spec);

  std::vector<std::string> task_ids() const;
  AnnotationTask task(const std::string& task_id) const;

  /// Next item the annotator has not labeled in its current round, in task
  /// order. Throws Error{UnknownTask} or Error{Forbidden}.
  std::optional<ItemView> next_item(const std::string& task_id, const std::string& annotator) const;

  /// Records a judgment; the second judgment of a round triggers
  /// adjudication. Throws Error{UnknownTask, UnknownItem, Forbidden,
  /// DuplicateSubmission}.
  ItemView submit_label(const std::string& task_id, const std::string& item_id,
                        const std::string& annotator, Judgment judgment);

  /// Senior override of a Final or Unresolved item.
  ItemView resolve(const std::string& task_id, const std::string& item_id,
                   const std::string& annotator, PolarityLabel label);

  /// Final items decided by seniority and not yet reviewed. Only the senior
  /// annotator may ask (Error{Forbidden} otherwise).
  std::vector<ItemView> disagreements(const std::string& task_id, const std::string& annotator) const;

  /// Throws Error{NotReady} when no item has a completed round (or none
  /// remains after excluding borderline items).
  KappaSnapshot kappa(const std::string& task_id, const KappaOptions& options = {}) const;

  ProgressCounts progress(const std::string& task_id) const;

  /// Lexicon of the Final items.
  Lexicon export_lexicon(const std::string& task_id) const;

 private:
  struct Event;
  void apply(const Event& e);
  void append(const Event& e);
  const AnnotationTask& get(const std::string& task_id) const;
  static ProgressCounts count_progress(const AnnotationTask& task);
  std::int64_t now() const;

  mutable std::shared_mutex mutex_;
  std::vector<AnnotationTask> tasks_;
  std::unordered_map<std::string, std::size_t> task_index_;
  std::optional<std::filesystem::path> log_path_;
  std::ofstream log_;
  Clock clock_;
};

/// Judgment pairs of the last completed round per item, roster order.
std::vector<std::pair<Judgment, Judgment>> completed_pairs(const AnnotationTask& task);

}  // namespace polarkit
