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

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "cli_util.h"
#include "doctest.h"
#include "qstance/annotate/service.h"
#include "qstance/cli/config.h"
#include "qstance/cli/stages.h"
#include "qstance/corpus/types.h"
#include "qstance/metrics/spot_check.h"
#include "qstance/triangulate/gold.h"
#include "qstance/triangulate/sample.h"
#include "qstance/util/errors.h"

namespace qstance::cli {
namespace {

using testing::CliResult;
using testing::Concat;
using testing::DirectoryHashes;
using testing::FixtureArgs;
using testing::FixturePath;
using testing::RunCli;
using testing::TempDir;

Json ErrorSummary(const CliResult &r) {
  // The summary is the last stderr line; warnings may precede it.
  std::string err = r.err;
  while (!err.empty() && err.back() == '\n') err.pop_back();
  return Json::parse(err.substr(err.rfind('\n') == std::string::npos ? 0 : err.rfind('\n') + 1));
}

std::string FirstLine(const std::string &text) { return text.substr(0, text.find('\n')); }

// A full fixture run shared by several cases.
std::string FixtureRun() {
  static TempDir dir;
  static const bool done = [] {
    const auto r = RunCli(Concat(FixtureArgs(dir.path()), {"pipeline"}));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    return true;
  }();
  (void)done;
  return dir.path();
}

TEST_CASE("config: defaults carry the documented constants") {
  const PipelineConfig c = PipelineConfig::Resolve(ConfigValues());
  CHECK(c.teacher_keep == 0.7);
  CHECK(c.binary_gate == 0.7);
  CHECK(c.stance_gate == 0.7);
  CHECK(c.similarity == 0.40);
  CHECK(c.horizon == 15);
  CHECK(c.window_lengths == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(c.ner_threshold == 0.5);
  CHECK(!c.seed.has_value());
  CHECK(c.binary_url == c.student_url);
  CHECK(c.stance_url == c.student_url);
  CHECK_THROWS_AS(c.RequireSeed("sample"), ConfigError);
}

TEST_CASE("config: text parsing and validation") {
  ConfigValues v;
  v.MergeText("# comment\n\nsimilarity = 0.5\n  horizon=10  \nseed = 7\n", "file");
  const PipelineConfig c = PipelineConfig::Resolve(v);
  CHECK(c.similarity == 0.5);
  CHECK(c.horizon == 10);
  CHECK(c.RequireSeed("sample") == 7);
  CHECK(v.Origin("similarity") == "file");
  CHECK(v.Origin("stance_gate") == "default");

  ConfigValues bad;
  CHECK_THROWS_AS(bad.MergeText("no_such_key = 1\n", "file"), ConfigError);
  CHECK_THROWS_AS(bad.MergeText("just words\n", "file"), ConfigError);
  for (const char *text : {"similarity = 1.5", "stance_gate = -0.1", "horizon = 0",
                           "window_lengths = 1,,2", "threads = 0", "seed = abc",
                           "record = maybe", "annotators = A", "sample_main = 3"}) {
    ConfigValues w;
    w.MergeText(text, "file");
    CHECK_THROWS_AS(PipelineConfig::Resolve(w), ConfigError);
  }
}

TEST_CASE("config: environment overrides use the QS_ prefix") {
  ConfigValues v;
  v.MergeText("similarity = 0.5\n", "file");
  v.MergeEnvironment([](const char *name) -> const char * {
    if (std::string(name) == "QS_SIMILARITY") return "0.6";
    if (std::string(name) == "QS_BINARY_URL") return "http://binary.example:9000";
    if (std::string(name) == "QS_SERVE_ADDR") return "0.0.0.0:9090";
    return nullptr;
  });
  const PipelineConfig c = PipelineConfig::Resolve(v);
  CHECK(c.similarity == 0.6);
  CHECK(v.Origin("similarity") == "env");
  CHECK(c.binary_url == "http://binary.example:9000");
  CHECK(c.stance_url == c.student_url);
  CHECK(c.serve_addr == "0.0.0.0:9090");
}

TEST_CASE("cli: precedence is defaults < file < env < flags") {
  TempDir dir;
  WriteFileAtomic(dir.File("c.conf"), "similarity = 0.5\nhorizon = 9\nthreads = 3\n");
  const auto r = RunCli({"--config", dir.File("c.conf"), "--similarity", "0.7", "--set",
                         "threads=4", "config"},
                        {{"QS_SIMILARITY", "0.6"}, {"QS_HORIZON", "11"}});
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  const Json j = Json::parse(r.out);
  CHECK(j["similarity"]["value"] == "0.7");
  CHECK(j["similarity"]["origin"] == "flag");
  CHECK(j["horizon"]["value"] == "11");
  CHECK(j["horizon"]["origin"] == "env");
  CHECK(j["threads"]["value"] == "4");
  CHECK(j["stance_gate"]["value"] == "0.7");
  CHECK(j["stance_gate"]["origin"] == "default");
}

TEST_CASE("cli: exit codes and machine-readable errors") {
  TempDir dir;
  SUBCASE("missing prior stage is a data error") {
    const auto r = RunCli({"--out", dir.path(), "indices"});
    CHECK(r.exit_code == 4);
    const Json e = ErrorSummary(r);
    CHECK(e["status"] == "error");
    CHECK(e["kind"] == "data");
    CHECK(e["exit_code"] == 4);
    CHECK(e["command"] == "indices");
    CHECK(e["message"].get<std::string>().find("qstance ingest") != std::string::npos);
  }
  SUBCASE("invalid configuration") {
    const auto r = RunCli({"--out", dir.path(), "--similarity", "2", "indices"});
    CHECK(r.exit_code == 2);
    CHECK(ErrorSummary(r)["kind"] == "config");
  }
  SUBCASE("unknown flag") {
    const auto r = RunCli({"--no-such-flag", "ingest"});
    CHECK(r.exit_code == 2);
    CHECK(ErrorSummary(r)["kind"] == "config");
  }
  SUBCASE("missing subcommand") { CHECK(RunCli({}).exit_code == 2); }
  SUBCASE("sampling without a seed") {
    const auto ingest = RunCli({"--articles", FixturePath("articles.jsonl"), "--out",
                                dir.path(), "ingest"});
    REQUIRE_MESSAGE(ingest.exit_code == 0, ingest.err);
    const auto r = RunCli({"--out", dir.path(), "candidates"});
    CHECK(r.exit_code == 2);
    CHECK(ErrorSummary(r)["message"].get<std::string>().find("seed") != std::string::npos);
  }
  SUBCASE("unreachable provider") {
    const auto args = Concat(FixtureArgs(dir.path()), {"ingest"});
    REQUIRE(RunCli(args).exit_code == 0);
    REQUIRE(RunCli(Concat(FixtureArgs(dir.path()), {"candidates"})).exit_code == 0);
    const auto r = RunCli(Concat(FixtureArgs(dir.path()),
                                 {"--teacher-url", "http://127.0.0.1:1", "pseudo-label"}));
    CHECK(r.exit_code == 3);
    CHECK(ErrorSummary(r)["kind"] == "provider");
  }
  SUBCASE("malformed input") {
    WriteFileAtomic(dir.File("bad.jsonl"), "{\"article_id\": \"x\"}\n");
    const auto r = RunCli({"--articles", dir.File("bad.jsonl"), "--out", dir.path(), "ingest"});
    CHECK(r.exit_code == 4);
  }
}

TEST_CASE("cli: fixture pipeline matches the committed golden hashes") {
  const auto hashes = DirectoryHashes(FixtureRun());
  const std::string golden_path = FixturePath("golden_hashes.txt");
  const std::string actual = testing::FormatHashes(hashes);
  const char *update = std::getenv("QS_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    WriteFileAtomic(golden_path, actual);
    MESSAGE("rewrote " << golden_path);
  }
  REQUIRE_MESSAGE(FileExists(golden_path), "run with QS_UPDATE_GOLDEN=1 to create it");
  const std::string golden = ReadFile(golden_path);
  if (golden != actual) {
    // Name the differing files before failing.
    std::map<std::string, std::string> expected;
    std::istringstream in(golden);
    std::string hash, path;
    while (in >> hash >> path) expected[path] = hash;
    for (const auto &[p, h] : hashes) {
      if (expected.count(p) == 0) {
        MESSAGE("unexpected file " << p);
      } else if (expected[p] != h) {
        MESSAGE("changed " << p);
      }
    }
    for (const auto &[p, h] : expected) {
      if (hashes.count(p) == 0) MESSAGE("missing file " << p);
    }
  }
  CHECK(golden == actual);
}

TEST_CASE("cli: outputs do not depend on the thread count") {
  TempDir eight;
  const auto r = RunCli(Concat(FixtureArgs(eight.path()), {"--threads", "8", "pipeline"}));
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  CHECK(DirectoryHashes(eight.path()) == DirectoryHashes(FixtureRun()));
}

TEST_CASE("cli: rerunning stages is idempotent and keeps upstream files intact") {
  TempDir dir;
  std::filesystem::copy(FixtureRun(), dir.path(), std::filesystem::copy_options::recursive);
  const auto before = DirectoryHashes(dir.path());
  for (const char *stage : {"ingest", "candidates", "pseudo-label", "sample", "export-train",
                            "infer", "answers", "entities", "indices", "spot-check", "eval",
                            "report"}) {
    const auto r = RunCli(Concat(FixtureArgs(dir.path()), {stage}));
    REQUIRE_MESSAGE(r.exit_code == 0, stage << ": " << r.err);
  }
  CHECK(DirectoryHashes(dir.path()) == before);

  // Deleting a downstream output and regenerating it leaves upstream
  // outputs untouched and restores the same bytes.
  std::filesystem::remove(dir.File(files::kQa));
  std::filesystem::remove_all(dir.File(files::kReportsDir));
  REQUIRE(RunCli(Concat(FixtureArgs(dir.path()), {"answers"})).exit_code == 0);
  REQUIRE(RunCli(Concat(FixtureArgs(dir.path()), {"report"})).exit_code == 0);
  CHECK(DirectoryHashes(dir.path()) == before);
}

TEST_CASE("cli: report and sweep tables") {
  const std::string out = FixtureRun();
  SUBCASE("stance-global") {
    const auto r = RunCli(Concat(FixtureArgs(out), {"report", "--table", "stance-global"}));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(FirstLine(r.out) == "Stance,N,% of interrogatives");
    CHECK(r.out == ReadFile(JoinPath(out, "reports/table1_stance_global.csv")));
  }
  SUBCASE("similarity sweep") {
    const auto r = RunCli(Concat(FixtureArgs(out), {"sweep", "--kind", "similarity"}));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    const CsvTable t = ParseCsv(r.out);
    CHECK(t.header ==
          std::vector<std::string>{"Similarity", "answered", "unanswered", "internal",
                                   "via quotes"});
    CHECK(t.rows.size() == 5);
  }
  SUBCASE("confidence sweep") {
    const auto r = RunCli(Concat(FixtureArgs(out), {"sweep", "--kind", "confidence"}));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(!ParseCsv(r.out).rows.empty());
  }
  SUBCASE("unknown table") {
    const auto r = RunCli(Concat(FixtureArgs(out), {"report", "--table", "nope"}));
    CHECK(r.exit_code == 2);
  }
  SUBCASE("every table schema is written") {
    for (const char *name :
         {"table1_stance_global.csv", "table2_meta_topics.csv", "table3_outlets.csv",
          "table4_answerability.csv", "table4_dialogicity.csv", "table5_confidence.csv",
          "table6_similarity.csv", "table8_model_iaa.csv", "table9_per_class.csv",
          "figure3_confusion.csv"}) {
      CHECK_MESSAGE(FileExists(JoinPath(out, std::string("reports/") + name)), name);
    }
    // Table 7 needs an audited spot-check manifest; audit the drawn one.
    TempDir dir;
    CsvTable manifest = ReadCsv(JoinPath(out, files::kSpotCheckManifest));
    const int verdict = manifest.Column("verdict");
    REQUIRE(verdict >= 0);
    for (size_t i = 0; i < manifest.rows.size(); ++i) {
      manifest.rows[i][static_cast<size_t>(verdict)] = std::string(metrics::kVerdicts[i % 4]);
    }
    WriteCsv(dir.File("audited.csv"), manifest);
    const auto r = RunCli(Concat(FixtureArgs(out), {"--spot-check-audited",
                                                     dir.File("audited.csv"), "report",
                                                     "--table", "spot-check"}));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(!r.out.empty());
    std::filesystem::remove(JoinPath(out, "reports/table7_spot_check_answered.csv"));
    std::filesystem::remove(JoinPath(out, "reports/table7_spot_check_unanswered.csv"));
  }
}

TEST_CASE("cli: cassettes replay provider exchanges offline") {
  TempDir dir;
  const std::string cassette = dir.File("cassette");
  auto args = [&](std::vector<std::string> extra) {
    return Concat(FixtureArgs(dir.File("out")), extra);
  };
  REQUIRE(RunCli(args({"ingest"})).exit_code == 0);
  REQUIRE(RunCli(args({"candidates"})).exit_code == 0);
  const auto record = RunCli(args({"--cassette", cassette, "--record", "pseudo-label"}));
  REQUIRE_MESSAGE(record.exit_code == 0, record.err);
  const std::string recorded = ReadFile(dir.File("out/pseudo_labels.jsonl"));
  CHECK(FileExists(JoinPath(cassette, "teacher.jsonl")));
  std::filesystem::remove(dir.File("out/pseudo_labels.jsonl"));
  // Replay needs no live provider.
  const auto replay = RunCli(
      args({"--cassette", cassette, "--teacher-url", "http://127.0.0.1:1", "pseudo-label"}));
  REQUIRE_MESSAGE(replay.exit_code == 0, replay.err);
  CHECK(ReadFile(dir.File("out/pseudo_labels.jsonl")) == recorded);
}

TEST_CASE("cli: eval agreement equals the annotation API on the same files") {
  const std::string out = FixtureRun();
  TempDir store;
  const auto manifest =
      triangulate::ParseSampleManifest(ReadCsv(JoinPath(out, files::kSampleManifest)));
  // An annotation store holding the fixture gold units with every task done.
  auto units = triangulate::ReadGoldUnits(FixturePath("gold_units.jsonl"));
  std::set<std::string> sampled;
  for (const auto &item : manifest) sampled.insert(item.article_id);
  std::vector<Json> session_rows;
  for (const auto &item : manifest) {
    for (const auto &a : item.annotators) {
      session_rows.push_back(annotate::Session{annotate::TaskId(item), item.article_id, a,
                                               annotate::TaskStatus::kComplete, 2}
                                 .ToJson());
    }
  }
  std::vector<triangulate::GoldUnit> kept;
  for (auto &u : units) {
    if (sampled.count(u.article_id)) kept.push_back(u);
  }
  triangulate::WriteGoldUnits(store.File(annotate::kUnitsFile), kept);
  WriteJsonLines(store.File(annotate::kSessionsFile), session_rows);

  TempDir eval_out;
  std::filesystem::copy(out, eval_out.path(), std::filesystem::copy_options::recursive);
  const auto r = RunCli(Concat(FixtureArgs(eval_out.path()), {"--gold", store.path(), "eval"}));
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  const Json offline = Json::parse(ReadFile(eval_out.File("eval/eval.json")))["agreement"];

  std::map<std::string, annotate::ArticleView> views;
  for (const Json &row : ReadJsonLines(JoinPath(out, files::kArticles))) {
    auto article = corpus::ArticleFromJson(row);
    if (sampled.count(article.article_id)) views[article.article_id].article = article;
  }
  annotate::AnnotationService service(manifest, views, store.path());
  const auto online = service.Agreement();
  CHECK(online.status == 200);
  CHECK(online.body == offline);
  CHECK(offline["status"] == "ok");
  CHECK(offline["report"]["cohen_kappa"].is_number());

  // The same numbers come out of the file-based gold input.
  const Json file_based = Json::parse(ReadFile(JoinPath(out, "eval/eval.json")))["agreement"];
  CHECK(file_based == offline);
}

}  // namespace
}  // namespace qstance::cli
