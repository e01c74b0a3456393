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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "qstance/triangulate/agreement.h"
#include "qstance/triangulate/evaluate.h"
#include "qstance/triangulate/gold.h"
#include "qstance/triangulate/sample.h"
#include "qstance/util/errors.h"
#include "qstance/util/random.h"
#include "test_util.h"

namespace qstance::triangulate {
namespace {

using metrics::SourceGroup;
using stance::Prediction;
using stance::PseudoLabel;
using stance::StanceLabel;

Json ValidUnitJson() {
  return Json{{"article_id", "a1"},
              {"unit_id", "u1"},
              {"annotator_id", "A"},
              {"span", {{"start", 0}, {"end", 25}}},
              {"text", "Que fera Emmanuel Macron?"},
              {"interactional_context", "non-interview"},
              {"addressee", "audience"},
              {"form", "wh"},
              {"function", "rhetorical"},
              {"macro_axes", {"Stance/alignment"}},
              {"answer_realized", false}};
}

bool HasField(const std::vector<FieldError> &errors, const std::string &field) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const FieldError &e) { return e.field == field; });
}

GoldUnit Unit(const std::string &article, const std::string &annotator, int start, int end,
              StanceLabel function = StanceLabel::kInformationSeeking,
              const std::string &id = "") {
  GoldUnit u;
  u.article_id = article;
  u.annotator_id = annotator;
  u.unit_id = id.empty() ? annotator + "-" + std::to_string(start) : id;
  u.start = start;
  u.end = end;
  u.text = std::string(static_cast<size_t>(end - start), 'x');
  u.interactional_context = "non-interview";
  u.addressee = "audience";
  u.form = "polar";
  u.function = function;
  u.macro_axes = {"Legitimation"};
  return u;
}

TEST_CASE("gold units validate field by field") {
  const std::string text = "Que fera Emmanuel Macron? Rien.";
  std::vector<FieldError> errors;
  auto u = ParseGoldUnit(ValidUnitJson(), errors, &text);
  REQUIRE(u.has_value());
  CHECK(errors.empty());
  CHECK(u->function == StanceLabel::kRhetorical);
  CHECK(u->length() == 25);

  SUBCASE("three macro axes are rejected") {
    Json j = ValidUnitJson();
    j["macro_axes"] = {"Legitimation", "Stance/alignment", "Discursive strategy"};
    errors.clear();
    CHECK_FALSE(ParseGoldUnit(j, errors, &text).has_value());
    CHECK(HasField(errors, "macro_axes"));
    CHECK_THROWS_AS(GoldUnitFromJson(j), DataError);
  }
  SUBCASE("empty and duplicate axes are rejected") {
    Json j = ValidUnitJson();
    j["macro_axes"] = Json::array();
    errors.clear();
    CHECK_FALSE(ParseGoldUnit(j, errors).has_value());
    j["macro_axes"] = {"Legitimation", "Legitimation"};
    errors.clear();
    CHECK_FALSE(ParseGoldUnit(j, errors).has_value());
    CHECK(HasField(errors, "macro_axes"));
  }
  SUBCASE("closed vocabularies and the span are checked") {
    Json j = ValidUnitJson();
    j["form"] = "question";
    j["function"] = "ironic";
    j["addressee"] = "crowd";
    j["span"] = {{"start", 10}, {"end", 5}};
    errors.clear();
    CHECK_FALSE(ParseGoldUnit(j, errors).has_value());
    CHECK(HasField(errors, "form"));
    CHECK(HasField(errors, "function"));
    CHECK(HasField(errors, "addressee"));
    CHECK(HasField(errors, "span"));
  }
  SUBCASE("span must lie within the article and match its text") {
    Json j = ValidUnitJson();
    j["span"] = {{"start", 20}, {"end", 200}};
    errors.clear();
    CHECK_FALSE(ParseGoldUnit(j, errors, &text).has_value());
    CHECK(HasField(errors, "span"));
    j = ValidUnitJson();
    j["text"] = "Que fera Emmanuel Macron!";
    errors.clear();
    CHECK_FALSE(ParseGoldUnit(j, errors, &text).has_value());
    CHECK(HasField(errors, "text"));
  }
  SUBCASE("missing answer flag") {
    Json j = ValidUnitJson();
    j.erase("answer_realized");
    errors.clear();
    CHECK_FALSE(ParseGoldUnit(j, errors).has_value());
    CHECK(HasField(errors, "answer_realized"));
  }
}

TEST_CASE("gold units round-trip through JSON lines") {
  testing::TempDir dir;
  std::vector<GoldUnit> units = {GoldUnitFromJson(ValidUnitJson()), Unit("a2", "B", 3, 9)};
  units[1].macro_axes = {"Legitimation", "Authority positioning"};
  units[1].answer_realized = true;
  WriteGoldUnits(dir.File("units.jsonl"), units);
  const auto back = ReadGoldUnits(dir.File("units.jsonl"));
  REQUIRE(back.size() == 2);
  for (size_t i = 0; i < 2; ++i) CHECK(back[i].ToJson() == units[i].ToJson());
}

// ---------------------------------------------------------------- sampling

PseudoLabel Label(const std::string &article, int sent, std::optional<StanceLabel> s) {
  PseudoLabel l;
  l.article_id = article;
  l.sent_id = sent;
  l.is_interrogative = s.has_value();
  l.binary_confidence = 0.95;
  l.stance = s;
  if (s) l.stance_confidence = 0.8;
  return l;
}

struct Population {
  std::vector<corpus::ArticleRecord> articles;
  std::vector<PseudoLabel> labels;
};

// `per_group` question-containing and `free_per_group` question-free
// articles in each source group, with dominant stances spread evenly.
Population MakePopulation(int per_group, int free_per_group, uint64_t seed = 1) {
  Population pop;
  SeededRng rng(seed);
  for (int g = 0; g < 2; ++g) {
    const auto scale = g == 0 ? corpus::Scale::kRegional : corpus::Scale::kNational;
    for (int i = 0; i < per_group + free_per_group; ++i) {
      corpus::ArticleRecord a;
      a.article_id = (g == 0 ? "L" : "N") + std::to_string(10000 + i);
      a.source = g == 0 ? "local.ch" : "national.fr";
      a.text = "x";
      a.outlet = corpus::OutletMeta{a.source, "x", scale, corpus::OutletType::kGeneral};
      if (i < per_group) {
        const auto dominant = stance::kAllStances[static_cast<size_t>(i) % 6];
        const int n = 1 + static_cast<int>(rng.UniformBelow(3));
        for (int k = 0; k < n; ++k) pop.labels.push_back(Label(a.article_id, k, dominant));
        pop.labels.push_back(Label(a.article_id, n, std::nullopt));
      } else {
        pop.labels.push_back(Label(a.article_id, 0, std::nullopt));
      }
      pop.articles.push_back(std::move(a));
    }
  }
  return pop;
}

TEST_CASE("dominant stance takes the most frequent label, ties in typology order") {
  std::vector<PseudoLabel> labels = {Label("a", 0, StanceLabel::kRhetorical),
                                     Label("a", 1, StanceLabel::kFramingProcedural),
                                     Label("a", 2, StanceLabel::kRhetorical),
                                     Label("a", 3, StanceLabel::kFramingProcedural)};
  CHECK(DominantStance(labels) == StanceLabel::kFramingProcedural);
  labels.push_back(Label("a", 4, StanceLabel::kRhetorical));
  CHECK(DominantStance(labels) == StanceLabel::kRhetorical);
  CHECK(DominantStance({Label("a", 4, std::nullopt)}) == std::nullopt);
  // Information-seeking precedes rhetorical in the typology order.
  CHECK(DominantStance({Label("a", 0, StanceLabel::kRhetorical),
                        Label("a", 1, StanceLabel::kInformationSeeking)}) ==
        StanceLabel::kInformationSeeking);
}

TEST_CASE("default plan over an ample population") {
  const auto pop = MakePopulation(600, 300);
  SamplePlan plan;
  plan.seed = 7;
  const Sample sample = StratifiedSample(pop.articles, pop.labels, plan);
  CHECK(sample.items.size() == 700);
  CHECK(sample.scale == 1.0);
  CHECK(sample.warnings.empty());
  CHECK(sample.Count(SampleRole::kMainEval) == 400);
  CHECK(sample.Count(SampleRole::kDouble) == 100);
  CHECK(sample.Count(SampleRole::kExtensionA) == 100);
  CHECK(sample.Count(SampleRole::kExtensionB) == 100);
  for (SampleRole r : kAllRoles) {
    CHECK(sample.Count(r, SourceGroup::kLocal) == sample.Count(r, SourceGroup::kNational));
  }
  int local = 0;
  std::set<std::string> ids;
  std::map<std::string, int> main_by_annotator;
  int main_free = 0;
  std::map<std::pair<int, int>, int> dominant_counts;  // (group, stance rank)
  for (const auto &i : sample.items) {
    local += i.source_group == SourceGroup::kLocal;
    ids.insert(i.article_id);
    CHECK(i.ordinal == static_cast<int>(&i - sample.items.data()));
    switch (i.role) {
      case SampleRole::kMainEval:
        REQUIRE(i.annotators.size() == 1);
        ++main_by_annotator[i.annotators[0]];
        main_free += !i.question_containing;
        break;
      case SampleRole::kDouble:
        CHECK(i.annotators == std::vector<std::string>{"A", "B"});
        CHECK(i.question_containing);
        break;
      case SampleRole::kExtensionA:
        CHECK(i.annotators == std::vector<std::string>{"A"});
        CHECK(i.question_containing);
        break;
      case SampleRole::kExtensionB:
        CHECK(i.annotators == std::vector<std::string>{"B"});
        CHECK(i.question_containing);
        break;
    }
    if (i.question_containing) {
      REQUIRE(i.dominant_stance.has_value());
      ++dominant_counts[{i.source_group == SourceGroup::kLocal ? 0 : 1,
                         stance::TypologyRank(*i.dominant_stance)}];
    }
  }
  CHECK(local == 350);
  CHECK(ids.size() == 700);
  CHECK(main_by_annotator["A"] == 200);
  CHECK(main_by_annotator["B"] == 200);
  CHECK(main_free == 200);
  // 250 question-containing draws per group over six stance strata.
  for (const auto &[key, n] : dominant_counts) CHECK((n == 41 || n == 42));
}

TEST_CASE("sampling is seeded and independent of input order") {
  auto pop = MakePopulation(300, 150);
  SamplePlan plan;
  plan.seed = 11;
  const auto first = FormatCsv(SampleManifest(StratifiedSample(pop.articles, pop.labels, plan)));
  const auto again = FormatCsv(SampleManifest(StratifiedSample(pop.articles, pop.labels, plan)));
  CHECK(first == again);
  SeededRng rng(3);
  rng.Shuffle(pop.articles);
  rng.Shuffle(pop.labels);
  CHECK(FormatCsv(SampleManifest(StratifiedSample(pop.articles, pop.labels, plan))) == first);
  plan.seed = 12;
  CHECK(FormatCsv(SampleManifest(StratifiedSample(pop.articles, pop.labels, plan))) != first);
}

TEST_CASE("a small population scales every role down proportionally") {
  // 125 question-containing articles per group cover half of the 250 needed.
  const auto pop = MakePopulation(125, 300);
  SamplePlan plan;
  const Sample sample = StratifiedSample(pop.articles, pop.labels, plan);
  CHECK(sample.scale == doctest::Approx(0.5));
  REQUIRE(sample.warnings.size() == 1);
  CHECK(sample.warnings[0].find("scaled") != std::string::npos);
  CHECK(sample.Count(SampleRole::kMainEval) == 200);
  CHECK(sample.Count(SampleRole::kDouble) == 50);
  CHECK(sample.Count(SampleRole::kExtensionA) == 50);
  CHECK(sample.Count(SampleRole::kExtensionB) == 50);
  for (SampleRole r : kAllRoles) {
    CHECK(sample.Count(r, SourceGroup::kLocal) == sample.Count(r, SourceGroup::kNational));
  }
}

TEST_CASE("sampling preconditions") {
  auto pop = MakePopulation(10, 10);
  std::vector<corpus::ArticleRecord> local_only;
  for (const auto &a : pop.articles) {
    if (a.article_id[0] == 'L') local_only.push_back(a);
  }
  CHECK_THROWS_AS(StratifiedSample(local_only, pop.labels, SamplePlan{}), DataError);
  SamplePlan odd;
  odd.double_coded = 99;
  CHECK_THROWS_AS(StratifiedSample(pop.articles, pop.labels, odd), ConfigError);
  SamplePlan same;
  same.annotator_b = "A";
  CHECK_THROWS_AS(same.Validate(), ConfigError);

  // Articles without an outlet are left out with a warning.
  pop.articles.push_back(pop.articles.front());
  pop.articles.back().article_id = "Z1";
  pop.articles.back().outlet.reset();
  const Sample s = StratifiedSample(pop.articles, pop.labels, SamplePlan{});
  CHECK(std::none_of(s.items.begin(), s.items.end(),
                     [](const SampleItem &i) { return i.article_id == "Z1"; }));
  CHECK(std::any_of(s.warnings.begin(), s.warnings.end(),
                    [](const std::string &w) { return w.find("source group") != w.npos; }));
}

TEST_CASE("sample manifest round-trips") {
  const auto pop = MakePopulation(300, 150);
  const Sample sample = StratifiedSample(pop.articles, pop.labels, SamplePlan{});
  const CsvTable table = SampleManifest(sample);
  CHECK(table.header == std::vector<std::string>{"ordinal", "article_id", "source",
                                                 "source_group", "role", "annotators",
                                                 "question_containing", "dominant_stance"});
  const auto items = ParseSampleManifest(ParseCsv(FormatCsv(table)));
  REQUIRE(items.size() == sample.items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    CHECK(items[i].article_id == sample.items[i].article_id);
    CHECK(items[i].role == sample.items[i].role);
    CHECK(items[i].annotators == sample.items[i].annotators);
    CHECK(items[i].dominant_stance == sample.items[i].dominant_stance);
    CHECK(items[i].source_group == sample.items[i].source_group);
  }
  CsvTable broken = table;
  broken.rows[0][4] = "triple";
  CHECK_THROWS_AS(ParseSampleManifest(broken), DataError);
}

// --------------------------------------------------------------- alignment

std::vector<Span> RandomSpans(SeededRng &rng, size_t n, int text_length) {
  std::vector<Span> spans;
  for (size_t i = 0; i < n; ++i) {
    const int start = static_cast<int>(rng.UniformBelow(static_cast<uint64_t>(text_length - 1)));
    const int len = 1 + static_cast<int>(rng.UniformBelow(30));
    spans.push_back({start, std::min(text_length, start + len)});
  }
  return spans;
}

TEST_CASE("alignment examples") {
  SUBCASE("identical span sets") {
    const std::vector<Span> spans = {{0, 10}, {20, 35}, {50, 60}};
    const auto al = AlignSpans(spans, spans);
    CHECK(al.pairs.size() == 3);
    CHECK(al.unmatched_a.empty());
    CHECK(CorpusJaccard({{spans, spans, al}}) == 1.0);
  }
  SUBCASE("half-overlapping sole spans") {
    const auto al = AlignSpans({{0, 10}}, {{5, 15}});
    REQUIRE(al.pairs.size() == 1);
    CHECK(al.pairs[0].jaccard == doctest::Approx(5.0 / 15.0).epsilon(1e-12));
    CHECK(al.pairs[0].jaccard == doctest::Approx(oracle::CharJaccard({{0, 10}}, {{5, 15}})));
  }
  SUBCASE("disjoint and touching spans never match") {
    const auto al = AlignSpans({{0, 10}}, {{10, 20}});
    CHECK(al.pairs.empty());
    CHECK(al.unmatched_a == std::vector<size_t>{0});
    CHECK(al.unmatched_b == std::vector<size_t>{0});
  }
  SUBCASE("greedy takes the best pair first") {
    // a0 overlaps b0 strongly; a1 overlaps b0 weakly and b1 not at all.
    const auto al = AlignSpans({{0, 10}, {8, 30}}, {{0, 9}, {40, 50}});
    REQUIRE(al.pairs.size() == 1);
    CHECK(al.pairs[0].a == 0);
    CHECK(al.pairs[0].b == 0);
    CHECK(al.unmatched_a == std::vector<size_t>{1});
  }
  SUBCASE("optimal can beat greedy") {
    // Greedy takes a0-b0 (2/3) and strands a1; optimal pairs a0-b1 (0.6)
    // and a1-b0 (3/7).
    const std::vector<Span> a = {{0, 10}, {6, 16}};
    const std::vector<Span> b = {{2, 12}, {0, 6}};
    const auto greedy = AlignSpans(a, b, AlignMode::kGreedy);
    const auto optimal = AlignSpans(a, b, AlignMode::kOptimal);
    auto total = [](const Alignment &al) {
      double s = 0;
      for (const auto &p : al.pairs) s += p.jaccard;
      return s;
    };
    CHECK(greedy.pairs.size() == 1);
    CHECK(total(greedy) == doctest::Approx(2.0 / 3.0));
    CHECK(optimal.pairs.size() == 2);
    CHECK(total(optimal) == doctest::Approx(0.6 + 3.0 / 7.0));
  }
}

TEST_CASE("alignment properties on random span sets") {
  SeededRng rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = RandomSpans(rng, rng.UniformBelow(7), 120);
    const auto b = RandomSpans(rng, rng.UniformBelow(7), 120);
    const auto ab = AlignSpans(a, b);
    const auto ba = AlignSpans(b, a);
    // One-to-one, positive overlap, pair Jaccard matches the set oracle.
    std::set<size_t> used_a, used_b;
    for (const auto &p : ab.pairs) {
      CHECK(used_a.insert(p.a).second);
      CHECK(used_b.insert(p.b).second);
      CHECK(p.jaccard > 0.0);
      CHECK(p.jaccard == doctest::Approx(oracle::CharJaccard({{a[p.a].start, a[p.a].end}},
                                                             {{b[p.b].start, b[p.b].end}}))
                             .epsilon(1e-12));
    }
    CHECK(ab.pairs.size() + ab.unmatched_a.size() == a.size());
    CHECK(ab.pairs.size() + ab.unmatched_b.size() == b.size());
    // Symmetric in annotators: the same span pairs, the same corpus Jaccard.
    std::multiset<std::pair<std::pair<int, int>, std::pair<int, int>>> pairs_ab, pairs_ba;
    for (const auto &p : ab.pairs) {
      pairs_ab.insert({{a[p.a].start, a[p.a].end}, {b[p.b].start, b[p.b].end}});
    }
    for (const auto &p : ba.pairs) {
      pairs_ba.insert({{a[p.b].start, a[p.b].end}, {b[p.a].start, b[p.a].end}});
    }
    CHECK(pairs_ab == pairs_ba);
    if (!a.empty() || !b.empty()) {
      CHECK(CorpusJaccard({{a, b, ab}}) == doctest::Approx(CorpusJaccard({{b, a, ba}})));
    }

    // Optimal matching reaches the brute-force maximum of summed Jaccard.
    double best = 0.0;
    std::vector<size_t> perm(std::max(a.size(), b.size()));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double s = 0.0;
      for (size_t i = 0; i < a.size(); ++i) {
        if (perm[i] < b.size()) s += SpanJaccard(a[i], b[perm[i]]);
      }
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    double optimal = 0.0;
    for (const auto &p : AlignSpans(a, b, AlignMode::kOptimal).pairs) optimal += p.jaccard;
    CHECK(optimal == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("corpus Jaccard pools over the union of segments") {
  SUBCASE("one annotator annotates nothing") {
    const std::vector<Span> a = {{0, 10}, {30, 40}};
    CHECK(CorpusJaccard({{a, {}, AlignSpans(a, {})}}) == 0.0);
  }
  SUBCASE("mixed three-article fixture") {
    // Article 1: [0,10) vs [5,15): inter 5, union 15.
    // Article 2: [0,20) vs [0,20) matched (20/20), [40,50) unmatched on A,
    //            [60,64) unmatched on B: union 20 + 10 + 4.
    // Article 3: [0,8) vs [2,6): inter 4, union 8.
    // Total: (5 + 20 + 4) / (15 + 34 + 8) = 29 / 57.
    std::vector<ArticleAlignment> arts;
    auto add = [&](std::vector<Span> a, std::vector<Span> b) {
      auto al = AlignSpans(a, b);
      arts.push_back({std::move(a), std::move(b), std::move(al)});
    };
    add({{0, 10}}, {{5, 15}});
    add({{0, 20}, {40, 50}}, {{0, 20}, {60, 64}});
    add({{0, 8}}, {{2, 6}});
    CHECK(CorpusJaccard(arts) == doctest::Approx(29.0 / 57.0).epsilon(1e-12));
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(CorpusJaccard({}), DataError);
    CHECK_THROWS_AS(CorpusJaccard({{{}, {}, Alignment{}}}), DataError);
  }
}

// ------------------------------------------------------------------- kappa

std::vector<std::string> Names(const std::vector<StanceLabel> &labels) {
  std::vector<std::string> out;
  for (auto l : labels) out.emplace_back(stance::ToString(l));
  return out;
}

TEST_CASE("Cohen's kappa") {
  using L = StanceLabel;
  SUBCASE("identical sequences") {
    const std::vector<L> a = {L::kRhetorical, L::kLeading, L::kRhetorical, L::kTag};
    CHECK(CohenKappa(a, a) == 1.0);
  }
  SUBCASE("degenerate single label") {
    const std::vector<L> a(5, L::kEchoClarification);
    CHECK(CohenKappa(a, a) == 1.0);
  }
  SUBCASE("observed equals chance") {
    CHECK(CohenKappa({L::kTag, L::kTag, L::kLeading, L::kLeading},
                     {L::kTag, L::kLeading, L::kTag, L::kLeading}) == doctest::Approx(0.0));
  }
  SUBCASE("3x3 confusion fixture") {
    // Rows (first annotator) x columns (second annotator).
    const int matrix[3][3] = {{20, 5, 0}, {3, 15, 2}, {1, 4, 10}};
    const L classes[3] = {L::kInformationSeeking, L::kRhetorical, L::kFramingProcedural};
    std::vector<L> a, b;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        for (int k = 0; k < matrix[r][c]; ++k) {
          a.push_back(classes[r]);
          b.push_back(classes[c]);
        }
      }
    }
    // p_o = 45/60, p_e = (25*24 + 20*24 + 15*12) / 3600 = 0.35.
    CHECK(CohenKappa(a, b) == doctest::Approx((0.75 - 0.35) / 0.65).epsilon(1e-12));
    CHECK(std::abs(CohenKappa(a, b) - oracle::DirectKappa(Names(a), Names(b))) < 1e-12);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(CohenKappa({}, {}), DataError);
    CHECK_THROWS_AS(CohenKappa({L::kTag}, {}), DataError);
  }
}

TEST_CASE("kappa agrees with the direct formula and ignores relabeling") {
  SeededRng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + rng.UniformBelow(60);
    const size_t classes = 1 + rng.UniformBelow(6);
    std::vector<StanceLabel> a, b;
    for (size_t i = 0; i < n; ++i) {
      a.push_back(stance::kAllStances[rng.UniformBelow(classes)]);
      b.push_back(rng.UniformUnit() < 0.6 ? a.back()
                                          : stance::kAllStances[rng.UniformBelow(classes)]);
    }
    const double kappa = CohenKappa(a, b);
    CHECK(std::abs(kappa - oracle::DirectKappa(Names(a), Names(b))) < 1e-12);
    // kappa never exceeds raw accuracy.
    double acc = 0;
    for (size_t i = 0; i < n; ++i) acc += a[i] == b[i];
    CHECK(kappa <= acc / n + 1e-12);

    std::vector<StanceLabel> perm(stance::kAllStances.begin(), stance::kAllStances.end());
    rng.Shuffle(perm);
    auto relabel = [&](std::vector<StanceLabel> v) {
      for (auto &l : v) l = perm[static_cast<size_t>(stance::TypologyRank(l))];
      return v;
    };
    CHECK(std::abs(CohenKappa(relabel(a), relabel(b)) - kappa) < 1e-12);
  }
}

TEST_CASE("agreement report over double-coded articles") {
  using L = StanceLabel;
  std::vector<GoldUnit> units = {
      Unit("d1", "A", 0, 10, L::kRhetorical),         Unit("d1", "B", 5, 15, L::kRhetorical),
      Unit("d1", "A", 40, 60, L::kLeading),           Unit("d1", "B", 40, 60, L::kTag),
      Unit("d2", "A", 0, 20, L::kInformationSeeking), Unit("d2", "B", 0, 20, L::kInformationSeeking),
      Unit("d2", "B", 60, 64, L::kTag),
      // Not double-coded, or a third annotator: ignored.
      Unit("x9", "A", 0, 20, L::kTag),                Unit("d1", "C", 0, 10, L::kTag)};
  const auto report = ComputeAgreement(units, {"d1", "d2", "d3"}, "A", "B");
  CHECK(report.n_articles == 3);
  CHECK(report.n_units_a == 3);
  CHECK(report.n_units_b == 4);
  CHECK(report.n_matched_units == 3);
  // (5 + 20 + 20) / (15 + 20 + 20 + 4)
  CHECK(*report.jaccard_overlap == doctest::Approx(45.0 / 59.0).epsilon(1e-12));
  CHECK(*report.label_accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(*report.cohen_kappa <= *report.label_accuracy);
  int matrix_total = 0;
  for (const auto &row : report.confusion) {
    for (int c : row) matrix_total += c;
  }
  CHECK(matrix_total == report.n_matched_units);
  CHECK(report.confusion[static_cast<size_t>(stance::TypologyRank(L::kLeading))]
                        [static_cast<size_t>(stance::TypologyRank(L::kTag))] == 1);
  CHECK(report.flags.empty());

  const auto swapped = ComputeAgreement(units, {"d3", "d2", "d1"}, "B", "A");
  CHECK(*swapped.jaccard_overlap == doctest::Approx(*report.jaccard_overlap));
  CHECK(*swapped.cohen_kappa == doctest::Approx(*report.cohen_kappa));

  const auto empty = ComputeAgreement(units, {}, "A", "B");
  CHECK(empty.n_articles == 0);
  CHECK(!empty.jaccard_overlap.has_value());
  CHECK(empty.flags == std::vector<std::string>{"insufficient_data"});
  const Json j = empty.ToJson();
  CHECK(j["cohen_kappa"].is_null());
}

// -------------------------------------------------------------- evaluation

std::vector<corpus::SentenceRecord> Sentences(const std::string &article,
                                              const std::vector<std::pair<int, int>> &ranges) {
  std::vector<corpus::SentenceRecord> out;
  for (const auto &[s, e] : ranges) {
    out.push_back({article, static_cast<int>(out.size()), "", static_cast<size_t>(s),
                   static_cast<size_t>(e)});
  }
  return out;
}

Prediction Pred(const std::string &article, int sent, bool positive,
                std::optional<StanceLabel> s = std::nullopt, double conf = 0.9) {
  return Prediction{article, sent, positive, conf, s,
                    s ? std::optional<double>(0.8) : std::nullopt};
}

TEST_CASE("gold sentence labels come from overlapping units") {
  using L = StanceLabel;
  const auto sentences = Sentences("a", {{0, 20}, {21, 40}, {41, 60}, {61, 80}});
  const std::vector<GoldUnit> units = {
      Unit("a", "A", 15, 30, L::kTag),       // 5 chars in s0, 9 in s1
      Unit("a", "A", 25, 40, L::kLeading),   // 15 chars in s1: wins
      Unit("a", "A", 61, 70, L::kRhetorical),
      Unit("b", "A", 0, 80, L::kRhetorical)};  // other article
  const auto gold = GoldSentenceLabels({sentences}, units);
  REQUIRE(gold.size() == 4);
  CHECK(gold[0].positive);
  CHECK(gold[0].stance == L::kTag);
  CHECK(gold[1].stance == L::kLeading);
  CHECK_FALSE(gold[2].positive);
  CHECK(gold[3].stance == L::kRhetorical);
}

std::vector<GoldSentence> BinaryGold(int tp, int fp, int fn, int tn,
                                     std::vector<Prediction> &preds) {
  std::vector<GoldSentence> gold;
  auto add = [&](bool g, bool p, int n) {
    for (int i = 0; i < n; ++i) {
      const int id = static_cast<int>(gold.size());
      gold.push_back({"a", id, g, g ? std::optional(StanceLabel::kTag) : std::nullopt});
      preds.push_back(Pred("a", id, p));
    }
  };
  add(true, true, tp);
  add(false, true, fp);
  add(true, false, fn);
  add(false, false, tn);
  return gold;
}

TEST_CASE("binary evaluation") {
  SUBCASE("all correct") {
    std::vector<Prediction> preds;
    const auto gold = BinaryGold(10, 0, 0, 30, preds);
    const auto m = EvaluateBinary(preds, gold, 0.7);
    CHECK(*m.accuracy == 1.0);
    CHECK(*m.f1 == 1.0);
    CHECK(m.flags.empty());
  }
  SUBCASE("precision 0.76 and recall 0.80") {
    std::vector<Prediction> preds;
    const auto gold = BinaryGold(76, 24, 19, 881, preds);
    const auto m = EvaluateBinary(preds, gold, 0.7);
    CHECK(*m.precision == doctest::Approx(0.76));
    CHECK(*m.recall == doctest::Approx(0.80));
    CHECK(std::abs(*m.f1 - 0.78) < 0.005);
    CHECK(*m.accuracy == doctest::Approx(957.0 / 1000.0));
  }
  SUBCASE("no predicted positives") {
    std::vector<Prediction> preds;
    const auto gold = BinaryGold(0, 0, 5, 5, preds);
    const auto m = EvaluateBinary(preds, gold, 0.7);
    CHECK_FALSE(m.precision.has_value());
    CHECK_FALSE(m.f1.has_value());
    CHECK(*m.recall == 0.0);
    CHECK(std::find(m.flags.begin(), m.flags.end(), "precision") != m.flags.end());
  }
  SUBCASE("the binary gate applies to confidence") {
    std::vector<GoldSentence> gold = {{"a", 0, true, StanceLabel::kTag}};
    std::vector<Prediction> preds = {Pred("a", 0, true, std::nullopt, 0.65)};
    CHECK(EvaluateBinary(preds, gold, 0.7).fn == 1);
    CHECK(EvaluateBinary(preds, gold, 0.6).tp == 1);
  }
  SUBCASE("missing prediction") {
    CHECK_THROWS_AS(EvaluateBinary({}, {{"a", 0, false, std::nullopt}}, 0.7), DataError);
  }
}

TEST_CASE("stance evaluation") {
  using L = StanceLabel;
  SUBCASE("perfect agreement") {
    std::vector<GoldSentence> gold;
    std::vector<Prediction> preds;
    for (int i = 0; i < 24; ++i) {
      const auto l = stance::kAllStances[static_cast<size_t>(i) % 6];
      gold.push_back({"a", i, true, l});
      preds.push_back(Pred("a", i, true, l));
    }
    for (bool conditional : {false, true}) {
      const auto e = EvaluateStance(preds, gold, conditional, 0.7);
      CHECK(*e.macro_f1 == 1.0);
      CHECK(*e.micro_f1 == 1.0);
      const auto rows = e.NormalizedRows();
      REQUIRE(rows.size() == 6);
      for (size_t r = 0; r < 6; ++r) {
        for (size_t c = 0; c < 6; ++c) CHECK(rows[r].second[c] == (r == c ? 1.0 : 0.0));
      }
    }
  }
  SUBCASE("a gated-out gold positive drops its row in conditional mode") {
    std::vector<GoldSentence> gold = {{"a", 0, true, L::kTag},
                                      {"a", 1, true, L::kLeading},
                                      {"a", 2, true, L::kLeading},
                                      {"a", 3, false, std::nullopt}};
    std::vector<Prediction> preds = {Pred("a", 0, false), Pred("a", 1, true, L::kLeading),
                                     Pred("a", 2, true, L::kRhetorical),
                                     Pred("a", 3, true, L::kTag)};
    const auto cond = EvaluateStance(preds, gold, true, 0.7);
    CHECK(cond.n_gold == 2);
    const auto rows = cond.NormalizedRows();
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].first == L::kLeading);
    CHECK(rows[0].second[static_cast<size_t>(stance::TypologyRank(L::kLeading))] == 0.5);

    const auto uncond = EvaluateStance(preds, gold, false, 0.7);
    CHECK(uncond.n_gold == 3);
    const auto &tag = uncond.classes[static_cast<size_t>(stance::TypologyRank(L::kTag))];
    CHECK(tag.support == 1);
    CHECK(*tag.recall == 0.0);
    CHECK(*tag.f1 == 0.0);
    // The gold-negative sentence predicted as tag is outside the evaluation.
    CHECK(tag.predicted == 0);
  }
  SUBCASE("random fixtures: macro-F1 is the mean of defined class F1, rows sum to 1") {
    SeededRng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<GoldSentence> gold;
      std::vector<Prediction> preds;
      const size_t classes = 1 + rng.UniformBelow(6);
      for (int i = 0; i < 80; ++i) {
        const bool positive = rng.UniformUnit() < 0.5;
        const auto g = stance::kAllStances[rng.UniformBelow(classes)];
        gold.push_back({"a", i, positive, positive ? std::optional(g) : std::nullopt});
        const bool routed = rng.UniformUnit() < 0.7;
        preds.push_back(routed ? Pred("a", i, true,
                                      rng.UniformUnit() < 0.6
                                          ? g
                                          : stance::kAllStances[rng.UniformBelow(6)])
                               : Pred("a", i, false));
      }
      for (bool conditional : {false, true}) {
        const auto e = EvaluateStance(preds, gold, conditional, 0.7);
        double sum = 0;
        int n = 0, support = 0;
        for (const auto &c : e.classes) {
          support += c.support;
          if (c.f1) {
            sum += *c.f1;
            ++n;
          }
        }
        CHECK(support == e.n_gold);
        if (n > 0) CHECK(*e.macro_f1 == doctest::Approx(sum / n).epsilon(1e-12));
        CHECK(e.flags.size() >= static_cast<size_t>(6 - n));
        for (const auto &[label, row] : e.NormalizedRows()) {
          CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("evaluation report tables") {
  std::vector<Prediction> preds;
  const auto gold = BinaryGold(8, 2, 2, 8, preds);
  const auto binary = EvaluateBinary(preds, gold, 0.7);
  const auto stance_eval = EvaluateStance(preds, gold, false, 0.7);
  const auto agreement =
      ComputeAgreement({Unit("d", "A", 0, 10), Unit("d", "B", 0, 10)}, {"d"}, "A", "B");

  const CsvTable t8 = ModelAgreementTable(binary, stance_eval, agreement);
  CHECK(t8.header == std::vector<std::string>{"Metric", "Value"});
  std::vector<std::string> keys;
  for (const auto &r : t8.rows) keys.push_back(r[0]);
  CHECK(keys == std::vector<std::string>{
                    "Evaluation sentences", "Accuracy", "Precision (interrogative)",
                    "Recall (interrogative)", "F1 (interrogative)", "Evaluation interrogatives",
                    "Macro-F1", "Micro-F1", "Double-coded articles",
                    "Matched interrogative units", "Jaccard overlap (spans)",
                    "Accuracy (stance labels)", "Cohen's kappa"});
  CHECK(t8.rows[0][1] == "20");
  CHECK(t8.rows[2][1] == "0.8000");
  CHECK(t8.rows[12][1] == "1.0000");

  const CsvTable t9 = PerClassTable(stance_eval);
  CHECK(t9.header ==
        std::vector<std::string>{"Stance", "Precision", "Recall", "F1", "Support"});
  REQUIRE(t9.rows.size() == 6);
  CHECK(t9.rows[0][0] == "Framing-procedural");
  CHECK(t9.rows[1][0] == "Information-seeking");
  int support = 0;
  for (const auto &r : t9.rows) support += std::stoi(r[4]);
  CHECK(support == stance_eval.n_gold);

  const CsvTable fig = ConfusionTable(EvaluateStance(preds, gold, true, 0.7));
  CHECK(fig.header.size() == 7);
  CHECK(fig.header[0] == "Gold");
}

}  // namespace
}  // namespace qstance::triangulate
