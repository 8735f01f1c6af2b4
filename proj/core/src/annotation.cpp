#include "polarkit/annotation.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <set>

#include <json.hpp>

#include "polarkit/error.hpp"

namespace polarkit {

using nlohmann::json;

std::string_view to_string(ItemStatus s) noexcept {
  switch (s) {
    case ItemStatus::Unlabeled: return "unlabeled";
    case ItemStatus::SingleLabeled: return "single_labeled";
    case ItemStatus::DualLabeled: return "dual_labeled";
    case ItemStatus::Final: return "final";
    case ItemStatus::ReIteration: return "reiteration";
    case ItemStatus::Unresolved: return "unresolved";
  }
  return "unlabeled";
}

const Annotator* AnnotationTask::annotator(std::string_view id) const {
  for (const auto& a : annotators)
    if (a.id == id) return &a;
  return nullptr;
}

const Annotator& AnnotationTask::senior() const {
  return annotators[0].experience_rank < annotators[1].experience_rank ? annotators[0]
                                                                       : annotators[1];
}

std::vector<std::pair<Judgment, Judgment>> completed_pairs(const AnnotationTask& task) {
  std::vector<std::pair<Judgment, Judgment>> out;
  for (const auto& st : task.states)
    if (st.last_pair) out.push_back(*st.last_pair);
  return out;
}

struct AnnotationStore::Event {
  enum class Type { Task, Label, Resolve };
  Type type = Type::Task;
  std::string task_id;
  std::int64_t ts = 0;
  TaskSpec spec;
  std::string item_id;
  std::string annotator;
  Judgment judgment = Judgment::Uncertain;
  unsigned round = 1;
  PolarityLabel label = PolarityLabel::Neutral;

  json to_json() const {
    json j;
    j["task_id"] = task_id;
    j["ts"] = ts;
    switch (type) {
      case Type::Task: {
        j["type"] = "task";
        json roster = json::array();
        for (const auto& a : spec.annotators) roster.push_back({{"id", a.id}, {"rank", a.experience_rank}});
        json items = json::array();
        for (const auto& it : spec.items) {
          json x = {{"item_id", it.item_id}, {"ngram", it.ngram}, {"count", it.count}};
          if (it.gloss) x["gloss"] = *it.gloss;
          items.push_back(std::move(x));
        }
        j["annotators"] = std::move(roster);
        j["items"] = std::move(items);
        j["provenance"] = to_string(spec.provenance);
        j["max_rounds"] = spec.max_rounds;
        break;
      }
      case Type::Label:
        j["type"] = "label";
        j["item_id"] = item_id;
        j["annotator"] = annotator;
        j["judgment"] = to_string(judgment);
        j["round"] = round;
        break;
      case Type::Resolve:
        j["type"] = "resolve";
        j["item_id"] = item_id;
        j["annotator"] = annotator;
        j["label"] = to_string(label);
        break;
    }
    return j;
  }

  static Event from_json(const json& j) {
    Event e;
    e.task_id = j.at("task_id").get<std::string>();
    e.ts = j.at("ts").get<std::int64_t>();
    const auto type = j.at("type").get<std::string>();
    if (type == "task") {
      e.type = Type::Task;
      for (const auto& a : j.at("annotators"))
        e.spec.annotators.push_back({a.at("id").get<std::string>(), a.at("rank").get<int>()});
      for (const auto& x : j.at("items")) {
        TaskItem it{x.at("item_id").get<std::string>(), x.at("ngram").get<std::string>(),
                    std::nullopt, x.value("count", std::uint64_t{0})};
        if (x.contains("gloss")) it.gloss = x.at("gloss").get<std::string>();
        e.spec.items.push_back(std::move(it));
      }
      auto prov = parse_provenance(j.value("provenance", std::string("manual")));
      if (!prov) throw Error(Errc::MalformedRecord, "unknown provenance in log");
      e.spec.provenance = *prov;
      e.spec.max_rounds = j.value("max_rounds", 2u);
    } else if (type == "label") {
      e.type = Type::Label;
      e.item_id = j.at("item_id").get<std::string>();
      e.annotator = j.at("annotator").get<std::string>();
      auto jd = parse_judgment(j.at("judgment").get<std::string>());
      if (!jd) throw Error(Errc::MalformedRecord, "unknown judgment in log");
      e.judgment = *jd;
      e.round = j.at("round").get<unsigned>();
    } else if (type == "resolve") {
      e.type = Type::Resolve;
      e.item_id = j.at("item_id").get<std::string>();
      e.annotator = j.at("annotator").get<std::string>();
      auto l = parse_label(j.at("label").get<std::string>());
      if (!l) throw Error(Errc::MalformedRecord, "unknown label in log");
      e.label = *l;
    } else {
      throw Error(Errc::MalformedRecord, "unknown event type '" + type + "'");
    }
    return e;
  }
};

namespace {

void validate_spec(const TaskSpec& spec) {
  if (spec.items.empty()) throw Error(Errc::InvalidArgument, "a task needs at least one item");
  if (spec.annotators.size() != 2)
    throw Error(Errc::InvalidArgument, "a task needs exactly two annotators");
  const auto& a = spec.annotators;
  if (a[0].id.empty() || a[1].id.empty() || a[0].id == a[1].id)
    throw Error(Errc::InvalidArgument, "annotator ids must be non-empty and distinct");
  if (a[0].experience_rank == a[1].experience_rank)
    throw Error(Errc::InvalidArgument, "annotator ranks must be distinct");
  if (spec.max_rounds < 1) throw Error(Errc::InvalidArgument, "max_rounds must be >= 1");
  std::set<std::string_view> ids;
  for (const auto& it : spec.items) {
    if (it.item_id.empty()) throw Error(Errc::InvalidArgument, "item ids must be non-empty");
    if (!ids.insert(it.item_id).second)
      throw Error(Errc::InvalidArgument, "duplicate item id '" + it.item_id + "'");
    const auto parts = split_key(it.ngram);
    const bool ok = (parts.size() == 1 || parts.size() == 2) &&
                    std::none_of(parts.begin(), parts.end(), [](const std::string& t) {
                      return t.empty() || t.find_first_of("\t\r\n") != std::string::npos;
                    });
    if (!ok) throw Error(Errc::InvalidArgument, "item '" + it.item_id + "' has an invalid n-gram");
  }
}

ItemView view_of(const AnnotationTask& task, std::size_t pos) {
  return {pos, task.items[pos], task.states[pos]};
}

}  // namespace

AnnotationStore::AnnotationStore() = default;

AnnotationStore::AnnotationStore(std::filesystem::path log_path, Clock clock)
    : log_path_(std::move(log_path)), clock_(std::move(clock)) {
  std::uintmax_t good_bytes = 0;
  if (std::filesystem::exists(*log_path_)) {
    std::ifstream in(*log_path_, std::ios::binary);
    std::string line;
    std::size_t lineno = 0;
    std::uintmax_t offset = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const bool complete = !in.eof();
      const std::uintmax_t next = offset + line.size() + (complete ? 1 : 0);
      if (!line.empty()) {
        try {
          apply(Event::from_json(json::parse(line)));
        } catch (const std::exception& e) {
          // a torn final write is dropped; anything else is corruption
          if (!complete) break;
          throw Error(Errc::MalformedRecord,
                      "annotation log line " + std::to_string(lineno) + ": " + e.what(), lineno);
        }
      }
      offset = next;
      if (complete) good_bytes = offset;
    }
    if (std::filesystem::file_size(*log_path_) != good_bytes)
      std::filesystem::resize_file(*log_path_, good_bytes);
  } else if (log_path_->has_parent_path()) {
    std::filesystem::create_directories(log_path_->parent_path());
  }
  log_.open(*log_path_, std::ios::app | std::ios::binary);
  if (!log_) throw Error(Errc::IoFailure, "cannot open annotation log " + log_path_->string());
}

std::vector<AnnotationTask> AnnotationStore::replay(const std::filesystem::path& log_path) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open annotation log " + log_path.string());
  AnnotationStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      store.apply(Event::from_json(json::parse(line)));
    } catch (const std::exception& e) {
      if (in.eof()) break;
      throw Error(Errc::MalformedRecord,
                  "annotation log line " + std::to_string(lineno) + ": " + e.what(), lineno);
    }
  }
  return std::move(store.tasks_);
}

std::int64_t AnnotationStore::now() const {
  if (clock_) return clock_();
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void AnnotationStore::append(const Event& e) {
  if (!log_path_) return;
  log_ << e.to_json().dump() << '\n';
  log_.flush();
  if (!log_) throw Error(Errc::IoFailure, "append to annotation log failed");
}

void AnnotationStore::apply(const Event& e) {
  if (e.type == Event::Type::Task) {
    validate_spec(e.spec);
    if (task_index_.contains(e.task_id))
      throw Error(Errc::MalformedRecord, "task '" + e.task_id + "' created twice");
    AnnotationTask t;
    t.task_id = e.task_id;
    t.items = e.spec.items;
    t.annotators = {e.spec.annotators[0], e.spec.annotators[1]};
    t.provenance = e.spec.provenance;
    t.max_rounds = e.spec.max_rounds;
    t.created = e.ts;
    t.states.resize(t.items.size());
    for (std::size_t i = 0; i < t.items.size(); ++i) t.index.emplace(t.items[i].item_id, i);
    task_index_.emplace(t.task_id, tasks_.size());
    tasks_.push_back(std::move(t));
    return;
  }

  auto tit = task_index_.find(e.task_id);
  if (tit == task_index_.end()) throw Error(Errc::UnknownTask, "unknown task '" + e.task_id + "'");
  AnnotationTask& task = tasks_[tit->second];
  auto iit = task.index.find(e.item_id);
  if (iit == task.index.end()) throw Error(Errc::UnknownItem, "unknown item '" + e.item_id + "'");
  ItemState& st = task.states[iit->second];

  if (e.type == Event::Type::Resolve) {
    st.status = ItemStatus::Final;
    st.label = e.label;
    st.reviewed = true;
    return;
  }

  if (!task.annotator(e.annotator))
    throw Error(Errc::UnknownAnnotator, "unknown annotator '" + e.annotator + "'");
  if (st.status == ItemStatus::Final || st.status == ItemStatus::Unresolved ||
      e.round != st.round || st.current.contains(e.annotator))
    throw Error(Errc::MalformedRecord, "label event out of sequence for '" + e.item_id + "'");
  st.current[e.annotator] = e.judgment;
  if (st.current.size() == 1) {
    st.status = ItemStatus::SingleLabeled;
    return;
  }
  st.status = ItemStatus::DualLabeled;
  const auto& a0 = task.annotators[0];
  const auto& a1 = task.annotators[1];
  const AnnotationRecord r0{e.item_id, a0.id, st.current.at(a0.id), e.ts, st.round};
  const AnnotationRecord r1{e.item_id, a1.id, st.current.at(a1.id), e.ts, st.round};
  const auto outcome = adjudicate(r0, r1, task.annotators);
  st.last_pair = std::pair{r0.judgment, r1.judgment};
  st.current.clear();
  if (outcome.final()) {
    st.status = ItemStatus::Final;
    st.label = outcome.label;
    st.borderline = outcome.borderline;
    st.disagreement = outcome.disagreement;
  } else if (st.round < task.max_rounds) {
    ++st.round;
    st.status = ItemStatus::ReIteration;
  } else {
    st.status = ItemStatus::Unresolved;
  }
}

const AnnotationTask& AnnotationStore::get(const std::string& task_id) const {
  auto it = task_index_.find(task_id);
  if (it == task_index_.end()) throw Error(Errc::UnknownTask, "unknown task '" + task_id + "'");
  return tasks_[it->second];
}

std::string AnnotationStore::create_task(TaskSpec spec) {
  validate_spec(spec);
  std::unique_lock lock(mutex_);
  Event e;
  e.type = Event::Type::Task;
  e.task_id = "t" + std::to_string(tasks_.size() + 1);
  e.ts = now();
  e.spec = std::move(spec);
  append(e);
  apply(e);
  return e.task_id;
}

std::vector<std::string> AnnotationStore::task_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& t : tasks_) out.push_back(t.task_id);
  return out;
}

AnnotationTask AnnotationStore::task(const std::string& task_id) const {
  std::shared_lock lock(mutex_);
  return get(task_id);
}

std::optional<ItemView> AnnotationStore::next_item(const std::string& task_id,
                                                   const std::string& annotator) const {
  std::shared_lock lock(mutex_);
  const auto& task = get(task_id);
  if (!task.annotator(annotator))
    throw Error(Errc::Forbidden, "annotator '" + annotator + "' is not on task " + task_id);
  for (std::size_t i = 0; i < task.items.size(); ++i) {
    const auto& st = task.states[i];
    if (st.status == ItemStatus::Final || st.status == ItemStatus::Unresolved) continue;
    if (st.current.contains(annotator)) continue;
    return view_of(task, i);
  }
  return std::nullopt;
}

ItemView AnnotationStore::submit_label(const std::string& task_id, const std::string& item_id,
                                       const std::string& annotator, Judgment judgment) {
  std::unique_lock lock(mutex_);
  const auto& task = get(task_id);
  if (!task.annotator(annotator))
    throw Error(Errc::Forbidden, "annotator '" + annotator + "' is not on task " + task_id);
  auto it = task.index.find(item_id);
  if (it == task.index.end()) throw Error(Errc::UnknownItem, "unknown item '" + item_id + "'");
  const auto& st = task.states[it->second];
  if (st.status == ItemStatus::Final || st.status == ItemStatus::Unresolved)
    throw Error(Errc::DuplicateSubmission, "item '" + item_id + "' is already " +
                                               std::string(to_string(st.status)));
  if (st.current.contains(annotator))
    throw Error(Errc::DuplicateSubmission, "annotator '" + annotator + "' already labeled '" +
                                               item_id + "' in round " + std::to_string(st.round));
  Event e;
  e.type = Event::Type::Label;
  e.task_id = task_id;
  e.ts = now();
  e.item_id = item_id;
  e.annotator = annotator;
  e.judgment = judgment;
  e.round = st.round;
  append(e);
  apply(e);
  return view_of(get(task_id), it->second);
}

ItemView AnnotationStore::resolve(const std::string& task_id, const std::string& item_id,
                                  const std::string& annotator, PolarityLabel label) {
  std::unique_lock lock(mutex_);
  const auto& task = get(task_id);
  if (!task.annotator(annotator))
    throw Error(Errc::Forbidden, "annotator '" + annotator + "' is not on task " + task_id);
  if (task.senior().id != annotator)
    throw Error(Errc::Forbidden, "only the senior annotator may resolve items");
  auto it = task.index.find(item_id);
  if (it == task.index.end()) throw Error(Errc::UnknownItem, "unknown item '" + item_id + "'");
  const auto& st = task.states[it->second];
  if (st.status != ItemStatus::Final && st.status != ItemStatus::Unresolved)
    throw Error(Errc::NotReady, "item '" + item_id + "' is still being annotated");
  Event e;
  e.type = Event::Type::Resolve;
  e.task_id = task_id;
  e.ts = now();
  e.item_id = item_id;
  e.annotator = annotator;
  e.label = label;
  append(e);
  apply(e);
  return view_of(get(task_id), it->second);
}

std::vector<ItemView> AnnotationStore::disagreements(const std::string& task_id,
                                                     const std::string& annotator) const {
  std::shared_lock lock(mutex_);
  const auto& task = get(task_id);
  if (!task.annotator(annotator))
    throw Error(Errc::Forbidden, "annotator '" + annotator + "' is not on task " + task_id);
  if (task.senior().id != annotator)
    throw Error(Errc::Forbidden, "only the senior annotator may review disagreements");
  std::vector<ItemView> out;
  for (std::size_t i = 0; i < task.items.size(); ++i) {
    const auto& st = task.states[i];
    if (st.status == ItemStatus::Final && st.disagreement && !st.reviewed)
      out.push_back(view_of(task, i));
  }
  return out;
}

ProgressCounts AnnotationStore::count_progress(const AnnotationTask& task) {
  ProgressCounts p;
  p.items = task.items.size();
  for (const auto& st : task.states) {
    switch (st.status) {
      case ItemStatus::Unlabeled: ++p.unlabeled; break;
      case ItemStatus::SingleLabeled:
      case ItemStatus::DualLabeled: ++p.single_labeled; break;
      case ItemStatus::Final: ++p.final; break;
      case ItemStatus::ReIteration: ++p.reiteration; break;
      case ItemStatus::Unresolved: ++p.unresolved; break;
    }
    if (st.last_pair) ++p.dual_labeled_pairs;
  }
  return p;
}

ProgressCounts AnnotationStore::progress(const std::string& task_id) const {
  std::shared_lock lock(mutex_);
  return count_progress(get(task_id));
}

KappaSnapshot AnnotationStore::kappa(const std::string& task_id, const KappaOptions& options) const {
  std::shared_lock lock(mutex_);
  const auto& task = get(task_id);
  const auto pairs = completed_pairs(task);
  if (pairs.empty()) throw Error(Errc::NotReady, "no item has been labeled by both annotators yet");
  KappaSnapshot snap;
  try {
    snap.result = cohen_kappa(pairs, options);
  } catch (const Error& e) {
    if (e.code() == Errc::EmptyInput) throw Error(Errc::NotReady, e.what());
    throw;
  }
  snap.categories = effective_order(options);
  snap.pairs = static_cast<std::size_t>(snap.result.table.total());
  snap.progress = count_progress(task);
  return snap;
}

Lexicon AnnotationStore::export_lexicon(const std::string& task_id) const {
  std::shared_lock lock(mutex_);
  const auto& task = get(task_id);
  Lexicon lex;
  for (std::size_t i = 0; i < task.items.size(); ++i) {
    const auto& st = task.states[i];
    if (st.status != ItemStatus::Final || !st.label) continue;
    LexiconEntry e;
    e.ngram = split_key(task.items[i].ngram);
    e.label = *st.label;
    e.provenance = task.provenance;
    e.gloss = task.items[i].gloss;
    lex.put(std::move(e));
  }
  return lex;
}

}  // namespace polarkit
