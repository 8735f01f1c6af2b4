#include "polarkit/service.hpp"

#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "polarkit/error.hpp"
#include "polarkit/extraction.hpp"

namespace polarkit {

using nlohmann::json;

namespace {

int status_for(Errc code) {
  switch (code) {
    case Errc::UnknownTask:
    case Errc::UnknownItem: return 404;
    case Errc::Forbidden: return 403;
    case Errc::DuplicateSubmission:
    case Errc::NotReady: return 409;
    case Errc::IoFailure: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& msg) {
  send_json(res, status, {{"error", code}, {"message", msg}});
}

json item_json(const ItemView& v) {
  json j = {{"item_id", v.item.item_id},
            {"ngram", v.item.ngram},
            {"count", v.item.count},
            {"position", v.position},
            {"state", to_string(v.state.status)},
            {"round", v.state.round},
            {"borderline", v.state.borderline},
            {"disagreement", v.state.disagreement},
            {"reviewed", v.state.reviewed}};
  j["gloss"] = v.item.gloss ? json(*v.item.gloss) : json(nullptr);
  j["label"] = v.state.label ? json(to_string(*v.state.label)) : json(nullptr);
  if (v.state.last_pair)
    j["last_judgments"] = {to_string(v.state.last_pair->first), to_string(v.state.last_pair->second)};
  return j;
}

json progress_json(const ProgressCounts& p) {
  return {{"items", p.items},
          {"unlabeled", p.unlabeled},
          {"single_labeled", p.single_labeled},
          {"final", p.final},
          {"reiteration", p.reiteration},
          {"unresolved", p.unresolved},
          {"dual_labeled", p.dual_labeled_pairs}};
}

std::optional<bool> parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  return std::nullopt;
}

TaskSpec parse_task_request(const std::string& body) {
  const json j = json::parse(body);
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "request body must be a JSON object");
  TaskSpec spec;
  for (const auto& a : j.at("annotators")) {
    if (!a.is_object()) throw Error(Errc::InvalidArgument, "annotator entries must be objects");
    spec.annotators.push_back({a.at("id").get<std::string>(), a.at("rank").get<int>()});
  }
  if (j.contains("candidates_tsv")) {
    std::istringstream in(j.at("candidates_tsv").get<std::string>());
    for (auto& c : read_candidates(in))
      spec.items.push_back({c.key(), c.key(), std::move(c.gloss), c.count});
    spec.provenance = Provenance::BigramExtraction;
  }
  if (j.contains("items")) {
    for (const auto& x : j.at("items")) {
      TaskItem it;
      it.ngram = x.at("ngram").get<std::string>();
      it.item_id = x.contains("item_id") ? x.at("item_id").get<std::string>() : it.ngram;
      if (x.contains("gloss") && !x.at("gloss").is_null()) it.gloss = x.at("gloss").get<std::string>();
      it.count = x.value("count", std::uint64_t{0});
      spec.items.push_back(std::move(it));
    }
  }
  if (j.contains("provenance")) {
    auto p = parse_provenance(j.at("provenance").get<std::string>());
    if (!p) throw Error(Errc::InvalidArgument, "unknown provenance");
    spec.provenance = *p;
  }
  spec.max_rounds = j.value("max_rounds", 2u);
  return spec;
}

}  // namespace

struct AnnotationServer::Impl {
  Impl(AnnotationStore& s, ServiceOptions o) : store(s), options(std::move(o)) {}

  AnnotationStore& store;
  ServiceOptions options;
  httplib::Server server;

  template <typename F>
  httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), std::string(errc_name(e.code())), e.what());
      } catch (const json::exception& e) {
        send_error(res, 400, "BadRequest", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  void routes() {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}});
    });

    server.Post("/tasks", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto id = store.create_task(parse_task_request(req.body));
      send_json(res, 201, {{"task_id", id}, {"items", store.progress(id).items}});
    }));

    server.Get("/tasks", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"tasks", store.task_ids()}});
    }));

    server.Get("/tasks/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto task = store.task(req.path_params.at("id"));
      json roster = json::array();
      for (const auto& a : task.annotators)
        roster.push_back({{"id", a.id}, {"rank", a.experience_rank}, {"senior", a.id == task.senior().id}});
      json items = json::array();
      for (std::size_t i = 0; i < task.items.size(); ++i)
        items.push_back(item_json({i, task.items[i], task.states[i]}));
      send_json(res, 200,
                {{"task_id", task.task_id},
                 {"annotators", roster},
                 {"provenance", to_string(task.provenance)},
                 {"max_rounds", task.max_rounds},
                 {"items", items},
                 {"progress", progress_json(store.progress(task.task_id))}});
    }));

    server.Get("/tasks/:id/next", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto next = store.next_item(req.path_params.at("id"), req.get_param_value("annotator"));
      if (!next) {
        res.status = 204;
        return;
      }
      send_json(res, 200, item_json(*next));
    }));

    server.Post("/tasks/:id/items/:item/label",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = json::parse(req.body);
                  const auto judgment = parse_judgment(body.at("judgment").get<std::string>());
                  if (!judgment)
                    throw Error(Errc::InvalidArgument,
                                "judgment must be one of pos, neg, neu, amb, uncertain");
                  const auto v = store.submit_label(req.path_params.at("id"),
                                                    req.path_params.at("item"),
                                                    body.at("annotator").get<std::string>(), *judgment);
                  send_json(res, 200, item_json(v));
                }));

    server.Post("/tasks/:id/items/:item/resolve",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = json::parse(req.body);
                  const auto label = parse_label(body.at("label").get<std::string>());
                  if (!label) throw Error(Errc::InvalidArgument, "label must be one of pos, neg, neu, amb");
                  const auto v = store.resolve(req.path_params.at("id"), req.path_params.at("item"),
                                               body.at("annotator").get<std::string>(), *label);
                  send_json(res, 200, item_json(v));
                }));

    server.Get("/tasks/:id/kappa", guarded([this](const httplib::Request& req, httplib::Response& res) {
      KappaOptions opt;
      if (req.has_param("weighting")) {
        auto w = parse_weighting(req.get_param_value("weighting"));
        if (!w) throw Error(Errc::InvalidArgument, "weighting must be 'unweighted' or 'linear'");
        opt.weighting = *w;
      }
      if (req.has_param("include_borderline")) {
        auto b = parse_bool(req.get_param_value("include_borderline"));
        if (!b) throw Error(Errc::InvalidArgument, "include_borderline must be true or false");
        opt.include_borderline = *b;
      }
      const auto snap = store.kappa(req.path_params.at("id"), opt);
      json cats = json::array();
      for (auto c : snap.categories) cats.push_back(to_string(c));
      json table = json::array();
      for (std::size_t r = 0; r < snap.result.table.categories; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < snap.result.table.categories; ++c) row.push_back(snap.result.table.at(r, c));
        table.push_back(std::move(row));
      }
      send_json(res, 200,
                {{"kappa", snap.result.kappa},
                 {"weighting", to_string(opt.weighting)},
                 {"include_borderline", opt.include_borderline},
                 {"observed_agreement", snap.result.observed_agreement},
                 {"chance_agreement", snap.result.chance_agreement},
                 {"pairs", snap.pairs},
                 {"categories", cats},
                 {"contingency", table},
                 {"progress", progress_json(snap.progress)}});
    }));

    server.Get("/tasks/:id/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::ostringstream out;
      write_lexicon(store.export_lexicon(req.path_params.at("id")), out);
      res.status = 200;
      res.set_content(out.str(), "text/tab-separated-values; charset=utf-8");
    }));

    server.Get("/tasks/:id/disagreements",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto items =
                     store.disagreements(req.path_params.at("id"), req.get_param_value("annotator"));
                 json arr = json::array();
                 for (const auto& v : items) arr.push_back(item_json(v));
                 send_json(res, 200, {{"items", arr}});
               }));

    if (options.ui_dir) server.set_mount_point("/", options.ui_dir->string());
  }
};

AnnotationServer::AnnotationServer(AnnotationStore& store, ServiceOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  impl_->routes();
}

AnnotationServer::~AnnotationServer() { stop(); }

bool AnnotationServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int AnnotationServer::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool AnnotationServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_) impl_->server.stop();
}

void AnnotationServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace polarkit
