// Copyright 2026 The qstance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include <atomic>
#include <thread>

#include "doctest.h"
#include "qstance/annotate/server.h"
#include "qstance/annotate/service.h"
#include "qstance/util/errors.h"
#include "test_util.h"

namespace qstance::annotate {
namespace {

using triangulate::SampleItem;
using triangulate::SampleRole;

const char kText[] =
    "Que fera Emmanuel Macron? Le président reste silencieux. Faut-il s'en inquiéter? "
    "Personne ne le sait.";

SampleItem Item(int ordinal, const std::string &article, SampleRole role,
                std::vector<std::string> annotators) {
  SampleItem i;
  i.ordinal = ordinal;
  i.article_id = article;
  i.source = "local.ch";
  i.role = role;
  i.annotators = std::move(annotators);
  i.question_containing = true;
  return i;
}

std::vector<SampleItem> Manifest() {
  return {Item(0, "a1", SampleRole::kDouble, {"A", "B"}),
          Item(1, "a2", SampleRole::kMainEval, {"A"}),
          Item(2, "a3", SampleRole::kMainEval, {"B"}),
          Item(3, "a4", SampleRole::kDouble, {"A", "B"})};
}

std::map<std::string, ArticleView> Articles() {
  std::map<std::string, ArticleView> out;
  for (const char *id : {"a1", "a2", "a3", "a4"}) {
    ArticleView v;
    v.article.article_id = id;
    v.article.source = "local.ch";
    v.article.text = kText;
    v.sentences = {{id, 0, "Que fera Emmanuel Macron?", 0, 25},
                   {id, 1, "Le président reste silencieux.", 26, 56}};
    v.prelabels = {stance::Prediction{id, 0, true, 0.9, stance::StanceLabel::kRhetorical, 0.8}};
    out[id] = v;
  }
  return out;
}

Json Draft(int start, int end, const std::string &function = "rhetorical",
           Json axes = Json{"Stance/alignment"}) {
  return Json{{"span", {{"start", start}, {"end", end}}},
              {"interactional_context", "non-interview"},
              {"addressee", "audience"},
              {"form", "wh"},
              {"function", function},
              {"macro_axes", axes},
              {"answer_realized", false}};
}

Json Save(const std::string &annotator, int base_version, Json units, bool complete = false) {
  return Json{{"annotator", annotator},
              {"base_version", base_version},
              {"units", units},
              {"complete", complete}};
}

TEST_CASE("next task follows the manifest per annotator") {
  testing::TempDir dir;
  AnnotationService service(Manifest(), Articles(), dir.path());
  auto next = service.NextTask("A");
  CHECK(next.status == 200);
  CHECK(next.body["status"] == "assigned");
  CHECK(next.body["task"]["task_id"] == "t0");
  CHECK(next.body["task"]["annotator_status"] == "in-progress");
  // Asking again resumes the same task.
  CHECK(service.NextTask("A").body["task"]["task_id"] == "t0");
  CHECK(service.SaveUnits("t0", Save("A", 1, Json::array(), true)).status == 200);
  CHECK(service.NextTask("A").body["task"]["task_id"] == "t1");
  CHECK(service.SaveUnits("t1", Save("A", 1, Json::array(), true)).status == 200);
  // a3 belongs to B only; A moves on to a4.
  CHECK(service.NextTask("A").body["task"]["task_id"] == "t3");
  CHECK(service.SaveUnits("t3", Save("A", 1, Json::array(), true)).status == 200);
  const auto done = service.NextTask("A");
  CHECK(done.status == 200);
  CHECK(done.body["status"] == "done");
  CHECK(service.NextTask("B").body["task"]["task_id"] == "t0");
  CHECK(service.NextTask("Z").status == 404);
}

TEST_CASE("saving units uses optimistic versions and field validation") {
  testing::TempDir dir;
  AnnotationService service(Manifest(), Articles(), dir.path());
  SUBCASE("save before the task is started") {
    const auto r = service.SaveUnits("t0", Save("A", 1, Json::array()));
    CHECK(r.status == 409);
    CHECK(r.body["error"] == "task_not_started");
  }
  service.NextTask("A");
  const Json three = {Draft(0, 25), Draft(57, 81, "information-seeking"),
                      Draft(26, 56, "framing-procedural", {"Legitimation", "Stance/alignment"})};
  SUBCASE("valid three-unit save") {
    const auto r = service.SaveUnits("t0", Save("A", 1, three));
    CHECK(r.status == 200);
    CHECK(r.body["version"] == 2);
    CHECK(r.body["n_units"] == 3);
    const auto units = service.GetUnits("t0", "A", "A");
    REQUIRE(units.status == 200);
    CHECK(units.body["units"].size() == 3);
    CHECK(units.body["units"][0]["text"] == "Que fera Emmanuel Macron?");
    CHECK(units.body["units"][0]["unit_id"] == "a1:A:1");

    // A second writer still holding version 1 is rejected.
    const auto stale = service.SaveUnits("t0", Save("A", 1, Json::array()));
    CHECK(stale.status == 409);
    CHECK(stale.body["error"] == "conflict");
    CHECK(stale.body["current_version"] == 2);
    // Overwriting with the current version replaces the set.
    const auto again = service.SaveUnits("t0", Save("A", 2, Json{Draft(0, 25)}));
    CHECK(again.body["version"] == 3);
    CHECK(service.GetUnits("t0", "A", "A").body["units"].size() == 1);
  }
  SUBCASE("three macro axes are rejected with a field error") {
    Json bad = three;
    bad[1]["macro_axes"] = {"Legitimation", "Stance/alignment", "Discursive strategy"};
    const auto r = service.SaveUnits("t0", Save("A", 1, bad));
    CHECK(r.status == 422);
    REQUIRE(r.body["errors"].size() == 1);
    CHECK(r.body["errors"][0]["index"] == 1);
    CHECK(r.body["errors"][0]["field"] == "macro_axes");
    // Nothing was written.
    CHECK(service.GetUnits("t0", "A", "A").body["version"] == 1);
  }
  SUBCASE("spans are checked against the article") {
    const auto r = service.SaveUnits("t0", Save("A", 1, Json{Draft(90, 500)}));
    CHECK(r.status == 422);
    bool span_error = false;
    for (const auto &e : r.body["errors"]) span_error |= e["field"] == "span";
    CHECK(span_error);
    Json wrong_text = Draft(0, 25);
    wrong_text["text"] = "something else";
    CHECK(service.SaveUnits("t0", Save("A", 1, Json{wrong_text})).status == 422);
    Json foreign = Draft(0, 25);
    foreign["annotator_id"] = "B";
    CHECK(service.SaveUnits("t0", Save("A", 1, Json{foreign})).status == 422);
  }
  SUBCASE("malformed bodies and foreign tasks") {
    CHECK(service.SaveUnits("t0", Json{{"annotator", "A"}}).status == 400);
    CHECK(service.SaveUnits("t2", Save("A", 1, Json::array())).status == 403);
    CHECK(service.SaveUnits("t9", Save("A", 1, Json::array())).status == 404);
  }
  SUBCASE("status only moves forward") {
    CHECK(service.SaveUnits("t0", Save("A", 1, three, true)).status == 200);
    const auto r = service.SaveUnits("t0", Save("A", 2, Json::array()));
    CHECK(r.status == 409);
    CHECK(r.body["error"] == "task_complete");
    CHECK(service.GetUnits("t0", "A", "A").body["units"].size() == 3);
  }
}

TEST_CASE("double-coded units stay blinded until both annotators finish") {
  testing::TempDir dir;
  AnnotationService service(Manifest(), Articles(), dir.path());
  service.NextTask("A");
  service.NextTask("B");
  REQUIRE(service.SaveUnits("t0", Save("A", 1, Json{Draft(0, 25)}, true)).status == 200);
  CHECK(service.GetUnits("t0", "B", "A").status == 403);
  CHECK(service.GetUnits("t0", "B", "A").body["error"] == "blinded");
  CHECK_FALSE(service.GetArticle("a1", "B").body.contains("other_units"));
  CHECK(service.GetArticle("a2", "B").status == 403);
  CHECK(service.GetArticle("zz", "B").status == 404);

  REQUIRE(service.SaveUnits("t0", Save("B", 1, Json{Draft(0, 24)}, true)).status == 200);
  CHECK(service.GetUnits("t0", "B", "A").status == 200);
  const auto article = service.GetArticle("a1", "B");
  REQUIRE(article.body.contains("other_units"));
  CHECK(article.body["other_units"]["A"].size() == 1);
  CHECK(article.body["task"]["status"] == "complete");
  CHECK(article.body["sentences"].size() == 2);
  CHECK(article.body["prelabels"].size() == 1);
}

TEST_CASE("live agreement matches the offline computation on the stored files") {
  testing::TempDir dir;
  AnnotationService service(Manifest(), Articles(), dir.path());
  const auto empty = service.Agreement();
  CHECK(empty.status == 200);
  CHECK(empty.body["status"] == "insufficient_data");
  CHECK(empty.body["partial"] == true);

  SUBCASE("identical coding on two articles") {
    for (const char *task : {"t0", "t3"}) {
      for (const char *a : {"A", "B"}) {
        service.NextTask(a);
        const Json units = {Draft(0, 25, "rhetorical"), Draft(57, 81, "leading")};
        REQUIRE(service.SaveUnits(task, Save(a, 1, units, true)).status == 200);
      }
      // Move the single-coded tasks out of the way.
      if (std::string(task) == "t0") {
        service.NextTask("A");
        service.SaveUnits("t1", Save("A", 1, Json::array(), true));
        service.NextTask("B");
        service.SaveUnits("t2", Save("B", 1, Json::array(), true));
      }
    }
    const auto r = service.Agreement();
    CHECK(r.body["status"] == "ok");
    CHECK(r.body["partial"] == false);
    CHECK(r.body["report"]["cohen_kappa"] == 1.0);
    CHECK(r.body["report"]["jaccard_overlap"] == 1.0);
    CHECK(r.body["report"]["n_articles"] == 2);
  }
  SUBCASE("disagreements: online equals offline") {
    service.NextTask("A");
    service.NextTask("B");
    service.SaveUnits("t0", Save("A", 1, {Draft(0, 25, "rhetorical"), Draft(57, 81, "tag")},
                                 true));
    service.SaveUnits("t0", Save("B", 1, {Draft(4, 25, "rhetorical"), Draft(57, 81, "leading"),
                                          Draft(26, 56, "echo-clarification")},
                                 true));
    const auto online = service.Agreement().body;
    CHECK(online["status"] == "ok");
    CHECK(online["partial"] == true);
    const auto units = triangulate::ReadGoldUnits(dir.File(kUnitsFile));
    const auto sessions = ReadSessions(dir.File(kSessionsFile));
    CHECK(AgreementPayload(Manifest(), units, sessions) == online);
    const auto direct = triangulate::ComputeAgreement(units, {"a1"}, "A", "B");
    CHECK(online["report"] == direct.ToJson());
    CHECK(direct.n_matched_units == 2);
    CHECK(*direct.jaccard_overlap == doctest::Approx((21.0 + 24.0) / (25.0 + 24.0 + 30.0)));
  }
}

TEST_CASE("stored units reload bit-identically") {
  testing::TempDir dir;
  std::string first_units;
  Json saved;
  {
    AnnotationService service(Manifest(), Articles(), dir.path());
    service.NextTask("A");
    service.SaveUnits("t0", Save("A", 1, {Draft(57, 81, "tag"), Draft(0, 25)}));
    saved = service.GetUnits("t0", "A", "A").body;
    first_units = ReadFile(dir.File(kUnitsFile));
  }
  const auto units = triangulate::ReadGoldUnits(dir.File(kUnitsFile));
  REQUIRE(units.size() == 2);
  for (size_t i = 0; i < units.size(); ++i) CHECK(units[i].ToJson() == saved["units"][i]);

  AnnotationService reloaded(Manifest(), Articles(), dir.path());
  CHECK(reloaded.GetUnits("t0", "A", "A").body == saved);
  // The task is still in progress with the saved version.
  const auto r = reloaded.SaveUnits("t0", Save("A", 2, {Draft(57, 81, "tag"), Draft(0, 25)}));
  CHECK(r.status == 200);
  CHECK(r.body["version"] == 3);
  CHECK(ReadFile(dir.File(kUnitsFile)) == first_units);
}

TEST_CASE("concurrent saves on one version: exactly one wins") {
  testing::TempDir dir;
  AnnotationService service(Manifest(), Articles(), dir.path());
  service.NextTask("A");
  for (int round = 0; round < 20; ++round) {
    const int version = service.GetUnits("t0", "A", "A").body["version"].get<int>();
    std::atomic<int> ok{0}, conflict{0};
    std::vector<std::thread> writers;
    for (int w = 0; w < 4; ++w) {
      writers.emplace_back([&, w] {
        const auto r = service.SaveUnits("t0", Save("A", version, {Draft(w, 25)}));
        (r.status == 200 ? ok : conflict)++;
      });
    }
    for (auto &t : writers) t.join();
    CHECK(ok == 1);
    CHECK(conflict == 3);
  }
}

TEST_CASE("progress counts tasks, roles and annotators") {
  testing::TempDir dir;
  AnnotationService service(Manifest(), Articles(), dir.path());
  service.NextTask("A");
  service.SaveUnits("t0", Save("A", 1, Json::array(), true));
  const auto p = service.Progress().body;
  CHECK(p["tasks"]["total"] == 4);
  CHECK(p["tasks"]["in-progress"] == 1);
  CHECK(p["tasks"]["pending"] == 3);
  CHECK(p["annotators"]["A"]["complete"] == 1);
  CHECK(p["annotators"]["A"]["total"] == 3);
  CHECK(p["annotators"]["B"]["pending"] == 3);
  CHECK(p["roles"]["double"]["total"] == 2);
}

TEST_CASE("service construction checks the manifest") {
  testing::TempDir dir;
  auto manifest = Manifest();
  manifest[0].annotators = {"A"};
  CHECK_THROWS_AS(AnnotationService(manifest, Articles(), dir.path()), DataError);
  auto articles = Articles();
  articles.erase("a4");
  CHECK_THROWS_AS(AnnotationService(Manifest(), articles, dir.path()), DataError);
}

TEST_CASE("serve address parsing") {
  const auto a = ParseServeAddress("0.0.0.0:9000");
  CHECK(a.host == "0.0.0.0");
  CHECK(a.port == 9000);
  CHECK(ParseServeAddress(kDefaultServeAddr).port == 8080);
  CHECK_THROWS_AS(ParseServeAddress("localhost"), ConfigError);
  CHECK_THROWS_AS(ParseServeAddress("localhost:abc"), ConfigError);
  CHECK_THROWS_AS(ParseServeAddress("localhost:70000"), ConfigError);
}

TEST_CASE("HTTP round trip") {
  testing::TempDir dir;
  testing::TempDir www;
  WriteFileAtomic(www.File("index.html"), "<html>annotate</html>");
  AnnotationService service(Manifest(), Articles(), dir.path());
  AnnotationServer server(service, www.path());
  const int port = server.Start({"127.0.0.1", 0});
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);

  auto next = client.Get("/api/tasks/next?annotator=A");
  REQUIRE(next);
  CHECK(next->status == 200);
  CHECK(Json::parse(next->body)["task"]["task_id"] == "t0");
  CHECK(client.Get("/api/tasks/next")->status == 400);

  auto article = client.Get("/api/articles/a1?annotator=A");
  REQUIRE(article);
  CHECK(Json::parse(article->body)["text"] == kText);

  auto saved = client.Post("/api/tasks/t0/units",
                           Save("A", 1, Json{Draft(0, 25)}).dump(), "application/json");
  REQUIRE(saved);
  CHECK(saved->status == 200);
  CHECK(Json::parse(saved->body)["version"] == 2);
  auto stale = client.Post("/api/tasks/t0/units", Save("A", 1, Json::array()).dump(),
                           "application/json");
  CHECK(stale->status == 409);
  CHECK(client.Post("/api/tasks/t0/units", "{not json", "application/json")->status == 400);
  CHECK(client.Get("/api/tasks/t0/units?annotator=B&owner=A")->status == 403);

  auto agreement = client.Get("/api/agreement");
  CHECK(Json::parse(agreement->body)["status"] == "insufficient_data");
  auto progress = client.Get("/api/progress");
  CHECK(Json::parse(progress->body)["tasks"]["total"] == 4);
  auto index = client.Get("/index.html");
  REQUIRE(index);
  CHECK(index->body == "<html>annotate</html>");
  server.Stop();
}

}  // namespace
}  // namespace qstance::annotate
