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

#include <sstream>

#include "doctest.h"
#include "qstance/candidates/candidates.h"
#include "qstance/util/errors.h"
#include "qstance/util/random.h"
#include "qstance/util/utf8.h"
#include "test_util.h"

namespace qstance::candidates {
namespace {

using corpus::SentenceKey;
using F = RuleFamily;

std::vector<std::string> FixtureLines(const std::string &name) {
  std::istringstream in(ReadFile(testing::DataPath(name)));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

const CandidateDetector &Detector() {
  static const CandidateDetector detector(RuleSet::Default());
  return detector;
}

TEST_CASE("detect_candidate: documented examples") {
  CHECK(Detector().Match("Pourquoi est-il parti ?") ==
        std::set<F>{F::kQmark, F::kInitialPattern});
  CHECK(Detector().Match("On peut se demander si cela suffira.") ==
        std::set<F>{F::kVerbPattern});
  CHECK(Detector().Match("Il fait beau aujourd'hui.").empty());
  CHECK(Detector().Match("Reste à savoir qui paiera.") == std::set<F>{F::kNounPattern});
}

TEST_CASE("detect_candidate: initial patterns are anchored after quotes and dashes") {
  CHECK(Detector().Match("« Comment faire, dans ces conditions.").count(F::kInitialPattern));
  CHECK(Detector().Match("— Faut-il partir.").count(F::kInitialPattern));
  CHECK(Detector().Match("COMBIEN de fois faudra-t-il le répéter.").count(F::kInitialPattern));
  // Not sentence-initial, not a word prefix.
  CHECK(!Detector().Match("Il explique comment faire.").count(F::kInitialPattern));
  CHECK(!Detector().Match("Commentaire du jour.").count(F::kInitialPattern));
  // Typographic apostrophe matches the straight one in the rule file.
  CHECK(Detector().Match("Qu’est-ce que cela change.").count(F::kInitialPattern));
}

TEST_CASE("detect_candidate: every rule-file exemplar fires its own family") {
  const RuleSet rules = RuleSet::Default();
  CHECK(rules.version == 1);
  for (const auto &p : rules.initial) {
    CAPTURE(p);
    CHECK(Detector().Match(p + " la suite.").count(F::kInitialPattern));
  }
  for (const auto &p : rules.verb) {
    CAPTURE(p);
    CHECK(Detector().Match("Hier, " + p + " était légitime.").count(F::kVerbPattern));
  }
  for (const auto &p : rules.noun) {
    CAPTURE(p);
    CHECK(Detector().Match("Hier, " + p + " était légitime.").count(F::kNounPattern));
  }
}

TEST_CASE("detect_candidate: recall over question fixture, precision over declaratives") {
  const auto questions = FixtureLines("question_fixture.txt");
  REQUIRE(!questions.empty());
  for (const auto &q : questions) {
    CAPTURE(q);
    const auto rules = Detector().Match(q);
    CHECK(rules.count(F::kQmark));
  }
  const auto declaratives = FixtureLines("declarative_fixture.txt");
  REQUIRE(declaratives.size() == 100);
  for (const auto &d : declaratives) {
    CAPTURE(d);
    CHECK(!Detector().Match(d).count(F::kQmark));
  }
}

TEST_CASE("detect_candidate: accent folding is opt-in") {
  const RuleSet rules = RuleSet::Default();
  CandidateDetector strict(rules);
  CandidateDetector folded(rules, {.fold_accents = true});
  CHECK(strict.Match("Reste a savoir qui paiera.").empty());
  CHECK(folded.Match("Reste a savoir qui paiera.") == std::set<F>{F::kNounPattern});
  CHECK(folded.Match("RESTE À SAVOIR.") == std::set<F>{F::kNounPattern});
}

TEST_CASE("detect_candidate: recall property over random strings") {
  SeededRng rng(11);
  const std::u32string alphabet = U"abcdeé ?.!«»'-";
  for (int trial = 0; trial < 2000; ++trial) {
    std::u32string s;
    const size_t len = rng.UniformBelow(30);
    for (size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.UniformBelow(alphabet.size())]);
    const std::string text = utf8::Encode(s);
    corpus::SentenceRecord sentence{"a", 0, text, 0, 0};
    const CandidateRecord record = Detector().Detect(sentence);
    CHECK(record.is_candidate == !record.matched_rules.empty());
    if (text.find('?') != std::string::npos) CHECK(record.is_candidate);
  }
}

TEST_CASE("rule file: sections, comments and errors") {
  const RuleSet rules = RuleSet::Parse(
      "#! version 3\n# comment\n[initial]\npourquoi # trailing\n\n[noun]\nreste à savoir\n");
  CHECK(rules.version == 3);
  CHECK(rules.initial == std::vector<std::string>{"pourquoi"});
  CHECK(rules.noun == std::vector<std::string>{"reste à savoir"});
  CHECK_THROWS_AS(RuleSet::Parse("pourquoi\n"), DataError);
  CHECK_THROWS_AS(RuleSet::Parse("[adverb]\nx\n"), DataError);
}

TEST_CASE("candidate record: JSON round trip keeps the rule set") {
  CandidateRecord r{"a1", 4, true, {F::kNounPattern, F::kQmark}, false};
  const Json j = r.ToJson();
  CHECK(j["matched_rules"] == Json::array({"qmark", "noun_pattern"}));
  const CandidateRecord back = CandidateRecord::FromJson(j);
  CHECK(back.matched_rules == r.matched_rules);
  CHECK(back.sent_id == 4);
}

std::vector<SentenceKey> Keys(size_t n, const std::string &prefix = "a") {
  std::vector<SentenceKey> keys;
  for (size_t i = 0; i < n; ++i) keys.push_back({prefix + std::to_string(i / 10), static_cast<int>(i % 10)});
  return keys;
}

TEST_CASE("calibration_sample: size rule, cap and determinism") {
  CHECK(CalibrationSample(Keys(1000), 100, 42).size() == 25);
  CHECK(CalibrationSample(Keys(1000), 101, 42).size() == 26);
  CHECK(CalibrationSample(Keys(10), 100, 42).size() == 10);
  CHECK(CalibrationSample(Keys(1000), 0, 42).empty());
  CHECK(CalibrationSample(Keys(1000), 100, 42) == CalibrationSample(Keys(1000), 100, 42));
  CHECK(CalibrationSample(Keys(1000), 100, 42) != CalibrationSample(Keys(1000), 100, 43));
  // Input order does not matter.
  auto shuffled = Keys(1000);
  SeededRng rng(5);
  rng.Shuffle(shuffled);
  CHECK(CalibrationSample(shuffled, 100, 42) == CalibrationSample(Keys(1000), 100, 42));
}

TEST_CASE("calibration_sample: inclusion is roughly uniform") {
  const auto pool = Keys(40);
  std::vector<int> hits(40, 0);
  for (uint64_t seed = 0; seed < 4000; ++seed) {
    const auto picks = CalibrationSample(pool, 40, seed);  // 10 of 40
    CHECK(picks.size() == 10);
    for (const auto &k : picks) {
      const size_t index = std::stoul(k.article_id.substr(1)) * 10 + k.sent_id;
      ++hits[index];
    }
  }
  // Expected 1000 hits each; 5 sigma is about 137.
  for (int h : hits) CHECK(std::abs(h - 1000) < 150);
}

TEST_CASE("calibration_sample: per-source mode") {
  std::map<std::string, SourcePool> pools;
  pools["arcinfo.ch"] = {8, Keys(100, "x")};
  pools["lefigaro.fr"] = {40, Keys(5, "y")};
  const auto picks = CalibrationSamplePerSource(pools, 9);
  size_t from_x = 0;
  size_t from_y = 0;
  for (const auto &k : picks) (k.article_id[0] == 'x' ? from_x : from_y)++;
  CHECK(from_x == 2);
  CHECK(from_y == 5);
}

}  // namespace
}  // namespace qstance::candidates
