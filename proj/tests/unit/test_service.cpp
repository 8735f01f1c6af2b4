#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "polarkit/lexicon.hpp"
#include "polarkit/service.hpp"
#include "test_util.hpp"

using namespace polarkit;
using nlohmann::json;

namespace {

// Store plus server on an ephemeral loopback port.
struct LiveServer {
  AnnotationStore store;
  AnnotationServer server{store};
  int port = -1;
  std::thread thread;

  LiveServer() { start(); }
  explicit LiveServer(const std::filesystem::path& log) : store(log) { start(); }
  ~LiveServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }

  void start() {
    port = server.bind_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_connection_timeout(5);
    c.set_read_timeout(10);
    return c;
  }
};

const json kTask = {
    {"annotators", {{{"id", "jr"}, {"rank", 2}}, {{"id", "sr"}, {"rank", 1}}}},
    {"items",
     {{{"item_id", "a"}, {"ngram", "dhokA ledu"}, {"gloss", "no problem"}, {"count", 4}},
      {{"item_id", "b"}, {"ngram", "baagundi"}},
      {{"ngram", "chala baagundi"}}}}};

std::string create(httplib::Client& c, const json& body = kTask) {
  auto r = c.Post("/tasks", body.dump(), "application/json");
  REQUIRE(r);
  REQUIRE(r->status == 201);
  return json::parse(r->body).at("task_id").get<std::string>();
}

httplib::Result label(httplib::Client& c, const std::string& task, const std::string& item,
                      const std::string& annotator, const std::string& judgment) {
  return c.Post("/tasks/" + task + "/items/" + item + "/label",
                json{{"annotator", annotator}, {"judgment", judgment}}.dump(), "application/json");
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("task lifecycle over HTTP") {
    LiveServer live;
    auto c = live.client();
    REQUIRE(c.Get("/health")->status == 200);
    const auto t = create(c);
    CHECK(json::parse(c.Get("/tasks")->body)["tasks"] == json::array({t}));

    auto task = json::parse(c.Get("/tasks/" + t)->body);
    CHECK(task["items"].size() == 3);
    CHECK(task["items"][2]["item_id"] == "chala baagundi");
    CHECK(task["annotators"][1]["senior"] == true);
    CHECK(task["progress"]["unlabeled"] == 3);

    auto next = c.Get("/tasks/" + t + "/next?annotator=jr");
    REQUIRE(next->status == 200);
    CHECK(json::parse(next->body)["item_id"] == "a");
    CHECK(json::parse(next->body)["gloss"] == "no problem");

    CHECK(label(c, t, "a", "jr", "pos")->status == 200);
    auto done = label(c, t, "a", "sr", "neg");
    REQUIRE(done->status == 200);
    const auto item = json::parse(done->body);
    CHECK(item["state"] == "final");
    CHECK(item["label"] == "neg");
    CHECK(item["disagreement"] == true);
    CHECK(item["last_judgments"] == json::array({"pos", "neg"}));

    auto dis = c.Get("/tasks/" + t + "/disagreements?annotator=sr");
    REQUIRE(dis->status == 200);
    CHECK(json::parse(dis->body)["items"].size() == 1);
    CHECK(c.Get("/tasks/" + t + "/disagreements?annotator=jr")->status == 403);
    auto res = c.Post("/tasks/" + t + "/items/a/resolve",
                      json{{"annotator", "sr"}, {"label", "pos"}}.dump(), "application/json");
    REQUIRE(res->status == 200);
    CHECK(json::parse(res->body)["reviewed"] == true);

    // item id with a space travels URL-encoded
    CHECK(label(c, t, "chala%20baagundi", "jr", "pos")->status == 200);
    CHECK(label(c, t, "chala%20baagundi", "sr", "pos")->status == 200);
    CHECK(label(c, t, "b", "jr", "pos")->status == 200);
    CHECK(label(c, t, "b", "sr", "pos")->status == 200);
    CHECK(c.Get("/tasks/" + t + "/next?annotator=jr")->status == 204);
  }

  TEST_CASE("error status codes") {
    LiveServer live;
    auto c = live.client();
    const auto t = create(c);
    CHECK(c.Get("/tasks/t99")->status == 404);
    CHECK(label(c, t, "zz", "jr", "pos")->status == 404);
    CHECK(label(c, t, "a", "eve", "pos")->status == 403);
    CHECK(label(c, t, "a", "jr", "great")->status == 400);
    CHECK(c.Post("/tasks/" + t + "/items/a/label", "{", "application/json")->status == 400);
    CHECK(c.Post("/tasks", R"({"annotators": []})", "application/json")->status == 400);
    CHECK(c.Get("/tasks/" + t + "/kappa")->status == 409);
    CHECK(c.Get("/tasks/" + t + "/next?annotator=eve")->status == 403);
    CHECK(label(c, t, "a", "jr", "pos")->status == 200);
    const auto dup = label(c, t, "a", "jr", "neg");
    CHECK(dup->status == 409);
    CHECK(json::parse(dup->body)["error"] == "DuplicateSubmission");
    CHECK(c.Get("/tasks/" + t + "/kappa?weighting=cubic")->status == 400);
    CHECK(c.Get("/tasks/" + t + "/kappa?include_borderline=maybe")->status == 400);
  }

  TEST_CASE("concurrent duplicate submissions: exactly one wins") {
    LiveServer live;
    auto c = live.client();
    const auto t = create(c);
    for (const std::string item : {"a", "b"}) {
      std::atomic<int> ok = 0, conflict = 0, other = 0;
      std::atomic<bool> go = false;
      std::vector<std::thread> workers;
      for (int i = 0; i < 2; ++i)
        workers.emplace_back([&, i] {
          auto cc = live.client();
          while (!go) std::this_thread::yield();
          auto r = label(cc, t, item, "jr", i == 0 ? "pos" : "neg");
          if (r && r->status == 200) ++ok;
          else if (r && r->status == 409) ++conflict;
          else ++other;
        });
      go = true;
      for (auto& w : workers) w.join();
      CHECK(ok == 1);
      CHECK(conflict == 1);
      CHECK(other == 0);
    }
    CHECK(live.store.progress(t).single_labeled == 2);
  }

  TEST_CASE("kappa endpoint reports the snapshot") {
    LiveServer live;
    auto c = live.client();
    const auto t = create(c);
    label(c, t, "a", "jr", "pos");
    label(c, t, "a", "sr", "pos");
    label(c, t, "b", "jr", "uncertain");
    label(c, t, "b", "sr", "neg");
    auto k = c.Get("/tasks/" + t + "/kappa?weighting=unweighted&include_borderline=false");
    REQUIRE(k->status == 200);
    const auto j = json::parse(k->body);
    CHECK(j["pairs"] == 1);
    CHECK(j["categories"].size() == 4);
    CHECK(j["weighting"] == "unweighted");
    CHECK(j["kappa"].get<double>() == 1.0);
    const auto all = json::parse(c.Get("/tasks/" + t + "/kappa")->body);
    CHECK(all["pairs"] == 2);
    CHECK(all["contingency"].size() == 5);
    CHECK(all["progress"]["final"] == 2);
  }

  TEST_CASE("export round-trips through the lexicon reader") {
    LiveServer live;
    auto c = live.client();
    const auto t = create(c);
    label(c, t, "a", "jr", "pos");
    label(c, t, "a", "sr", "pos");
    label(c, t, "b", "jr", "amb");
    label(c, t, "b", "sr", "uncertain");
    auto r = c.Get("/tasks/" + t + "/export");
    REQUIRE(r->status == 200);
    std::istringstream in(r->body);
    const auto lex = read_lexicon(in);
    CHECK(lex == live.store.export_lexicon(t));
    REQUIRE(lex.size() == 2);
    CHECK(lex.find("dhokA ledu")->gloss == "no problem");
    CHECK(lex.find("baagundi")->label == PolarityLabel::Ambiguous);
  }

  TEST_CASE("tasks from a candidate TSV") {
    LiveServer live;
    auto c = live.client();
    json body = {{"annotators", kTask["annotators"]},
                 {"candidates_tsv", "ngram\tcount\tgloss\ndhokA ledu\t5\t\nmanchi cinema\t3\tgood film\n"}};
    const auto t = create(c, body);
    const auto task = json::parse(c.Get("/tasks/" + t)->body);
    CHECK(task["provenance"] == "bigram_extraction");
    REQUIRE(task["items"].size() == 2);
    CHECK(task["items"][1]["count"] == 3);
  }

  TEST_CASE("state survives a restart through the log") {
    testutil::TempDir dir("svc");
    const auto log = dir / "events.jsonl";
    std::string t;
    {
      LiveServer live(log);
      auto c = live.client();
      t = create(c);
      label(c, t, "a", "jr", "pos");
    }
    LiveServer live(log);
    auto c = live.client();
    CHECK(label(c, t, "a", "jr", "neg")->status == 409);
    CHECK(label(c, t, "a", "sr", "pos")->status == 200);
    CHECK(json::parse(c.Get("/tasks/" + t)->body)["progress"]["final"] == 1);
  }

  TEST_CASE("the UI bundle is served from the mount point") {
    testutil::TempDir dir("ui");
    testutil::write_text(dir / "index.html", "<html>ui</html>");
    AnnotationStore store;
    AnnotationServer server(store, {dir.path()});
    const int port = server.bind_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    httplib::Client c("127.0.0.1", port);
    auto r = c.Get("/index.html");
    CHECK((r && r->status == 200 && r->body == "<html>ui</html>"));
    CHECK(c.Get("/tasks")->status == 200);
    server.stop();
    th.join();
  }
}
