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

#include <atomic>
#include <cmath>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "qstance/providers/mock.h"
#include "qstance/providers/transport.h"
#include "qstance/util/errors.h"
#include "qstance/util/utf8.h"
#include "test_util.h"

namespace qstance::providers {
namespace {

double Norm(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TEST_CASE("mock: embeddings are unit-norm, deterministic and content-sensitive") {
  MockTransport mock(MockFlavor::kStudent, 64);
  const auto a = mock.Embed("Qui paiera la facture ?");
  const auto b = mock.Embed("Qui paiera la facture ?");
  const auto c = mock.Embed("La météo sera clémente demain.");
  CHECK(a.size() == 64);
  CHECK(a == b);
  CHECK(Norm(a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Norm(mock.Embed("")) == doctest::Approx(1.0).epsilon(1e-12));
  double dot = 0.0;
  for (size_t i = 0; i < a.size(); ++i) dot += a[i] * c[i];
  CHECK(dot < 0.5);

  const Json response = mock.Post(kEmbedEndpoint, Json{{"texts", {"x", "y"}}});
  CHECK(response["dim"] == 64);
  CHECK(response["vectors"].size() == 2);
}

TEST_CASE("mock: NER gazetteer, requested labels only, code point offsets") {
  MockTransport mock(MockFlavor::kStudent);
  const std::vector<std::string> all = {"person", "organization", "location",
                                        "nationality or religious or political group",
                                        "generic social group", "public or audience", "event"};
  const std::string text = "Que fera Emmanuel Macron face à l'Union européenne ?";
  const Json mentions = mock.Ner(text, all);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0]["text"] == "Emmanuel Macron");
  CHECK(mentions[0]["label"] == "person");
  CHECK(mentions[0]["score"].get<double>() >= 0.5);
  CHECK(mentions[1]["label"] == "organization");
  for (const auto &m : mentions) {
    CHECK(utf8::Substr(text, m["start"], m["end"]) == m["text"].get<std::string>());
  }
  CHECK(mock.Ner(text, {"location"}).empty());
  CHECK(mock.Ner("Il pleut.", all).empty());
}

TEST_CASE("mock: stance cues") {
  MockTransport mock(MockFlavor::kTeacher);
  CHECK(mock.LabelStance("<tgt>C'est bien, n'est-ce pas ?</tgt>")["label"] == "tag");
  CHECK(mock.LabelStance("<tgt>Vraiment ?</tgt>")["label"] == "echo-clarification");
  CHECK(mock.LabelStance("<tgt>Combien coûtera le projet ?</tgt>")["label"] ==
        "information-seeking");
  CHECK(mock.LabelStance("<tgt>N'est-il pas temps d'agir ?</tgt>")["label"] == "leading");
  CHECK(mock.LabelStance("<tgt>Reste à savoir qui paiera la note.</tgt>")["label"] ==
        "framing-procedural");
  CHECK_THROWS_AS(mock.Post("/v1/unknown", Json::object()), ProviderError);
  CHECK_THROWS_AS(mock.Post(kBinaryEndpoint, Json{{"texts", 1}}), ProviderError);
}

TEST_CASE("cassette: record then replay offline, misses are provider errors") {
  testing::TempDir dir;
  const std::string path = JoinPath(dir.path(), "labels.cassette.jsonl");
  const Json request{{"items", {{{"context_text", "<tgt>Pourquoi ?</tgt>"}}}}};
  Json recorded;
  {
    auto recorder = MakeTransport("mock:teacher", path, /*record=*/true);
    recorded = recorder->Post(kBinaryEndpoint, request);
  }
  REQUIRE(FileExists(path));
  auto replay = MakeTransport("http://unused.invalid:1", path, /*record=*/false);
  CHECK(replay->Post(kBinaryEndpoint, request) == recorded);
  CHECK_THROWS_AS(replay->Post(kBinaryEndpoint, Json{{"items", Json::array()}}), ProviderError);
  CHECK_THROWS_AS(MakeTransport("mock", JoinPath(dir.path(), "missing.jsonl")), ConfigError);
  CHECK_THROWS_AS(MakeTransport("ftp://x"), ConfigError);
  CHECK_THROWS_AS(MakeTransport("https://labels.example"), ConfigError);
  CHECK_THROWS_AS(MakeTransport(""), ConfigError);
}

TEST_CASE("cassette: file content is independent of request order") {
  testing::TempDir dir;
  const std::string p1 = JoinPath(dir.path(), "one.jsonl");
  const std::string p2 = JoinPath(dir.path(), "two.jsonl");
  const Json r1{{"texts", {"alpha"}}};
  const Json r2{{"texts", {"beta"}}};
  {
    auto t = MakeTransport("mock", p1, true);
    t->Post(kEmbedEndpoint, r1);
    t->Post(kEmbedEndpoint, r2);
  }
  {
    auto t = MakeTransport("mock", p2, true);
    t->Post(kEmbedEndpoint, r2);
    t->Post(kEmbedEndpoint, r1);
  }
  CHECK(ReadFile(p1) == ReadFile(p2));
}

// Serves the mock over real HTTP; the first `failures` requests get a 503.
class LocalServer {
 public:
  explicit LocalServer(int failures) : failures_(failures) {
    server_.Post(R"(/prefix/v1/.*)", [this](const httplib::Request &req, httplib::Response &res) {
      if (failures_-- > 0) {
        res.status = 503;
        return;
      }
      if (req.body == "bad") {
        res.status = 400;
        return;
      }
      const std::string endpoint = req.path.substr(std::string("/prefix").size());
      res.set_content(mock_.Post(endpoint, Json::parse(req.body)).dump(), "application/json");
    });
    server_.Post("/garbage/v1/embed", [](const httplib::Request &, httplib::Response &res) {
      res.set_content("not json", "text/plain");
    });
    server_.Post("/reject/v1/embed", [](const httplib::Request &, httplib::Response &res) {
      res.status = 422;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string &prefix) const {
    return "http://127.0.0.1:" + std::to_string(port_) + prefix;
  }

 private:
  httplib::Server server_;
  MockTransport mock_{MockFlavor::kStudent};
  std::atomic<int> failures_;
  int port_ = 0;
  std::thread thread_;
};

TEST_CASE("http transport: path prefix, retry on 5xx, immediate failure on 4xx") {
  LocalServer server(2);
  RetryPolicy fast{.max_attempts = 3, .initial_backoff_ms = 1, .max_backoff_ms = 2,
                   .timeout_seconds = 5};
  HttpTransport http(server.url("/prefix/"), fast);
  const Json body{{"texts", {"Bonjour"}}};
  const Json response = http.Post(kEmbedEndpoint, body);
  CHECK(response == MockTransport(MockFlavor::kStudent).Post(kEmbedEndpoint, body));

  HttpTransport garbage(server.url("/garbage"), fast);
  CHECK_THROWS_AS(garbage.Post(kEmbedEndpoint, body), ProviderError);
  HttpTransport reject(server.url("/reject"), fast);
  CHECK_THROWS_AS(reject.Post(kEmbedEndpoint, body), ProviderError);
}

TEST_CASE("http transport: gives up after the retry budget") {
  LocalServer server(100);
  RetryPolicy fast{.max_attempts = 2, .initial_backoff_ms = 1, .max_backoff_ms = 1,
                   .timeout_seconds = 5};
  HttpTransport http(server.url("/prefix"), fast);
  CHECK_THROWS_AS(http.Post(kEmbedEndpoint, Json{{"texts", {"x"}}}), ProviderError);
  HttpTransport nowhere("http://127.0.0.1:1", fast);
  CHECK_THROWS_AS(nowhere.Post(kEmbedEndpoint, Json{{"texts", {"x"}}}), ProviderError);
  CHECK_THROWS_AS(HttpTransport("localhost:80"), ConfigError);
}

}  // namespace
}  // namespace qstance::providers
