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

#include "qstance/triangulate/evaluate.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "qstance/util/errors.h"

namespace qstance::triangulate {

namespace {

using stance::StanceLabel;

std::optional<double> Ratio(int num, int den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

Json Opt(const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); }

std::string Cell(const std::optional<double> &v) { return v ? FormatFixed(*v, 4) : ""; }

size_t Rank(StanceLabel l) { return static_cast<size_t>(stance::TypologyRank(l)); }

std::map<corpus::SentenceKey, const stance::Prediction *> IndexPredictions(
    const std::vector<stance::Prediction> &predictions) {
  std::map<corpus::SentenceKey, const stance::Prediction *> index;
  for (const auto &p : predictions) {
    if (!index.emplace(p.key(), &p).second) {
      throw DataError("duplicate prediction for " + p.article_id + "#" +
                      std::to_string(p.sent_id));
    }
  }
  return index;
}

const stance::Prediction &Find(
    const std::map<corpus::SentenceKey, const stance::Prediction *> &index,
    const GoldSentence &g) {
  auto it = index.find(corpus::SentenceKey{g.article_id, g.sent_id});
  if (it == index.end()) {
    throw DataError("no prediction for gold sentence " + g.article_id + "#" +
                    std::to_string(g.sent_id));
  }
  return *it->second;
}

bool PredictedPositive(const stance::Prediction &p, double gate) {
  return p.binary_label && p.binary_conf >= gate;
}

}  // namespace

std::vector<GoldSentence> GoldSentenceLabels(
    const std::vector<std::vector<corpus::SentenceRecord>> &articles,
    const std::vector<GoldUnit> &units) {
  std::map<std::string, std::vector<const GoldUnit *>> by_article;
  for (const auto &u : units) by_article[u.article_id].push_back(&u);
  for (auto &[id, list] : by_article) {
    std::sort(list.begin(), list.end(), [](const GoldUnit *x, const GoldUnit *y) {
      return std::tie(x->start, x->end, x->unit_id) < std::tie(y->start, y->end, y->unit_id);
    });
  }
  std::vector<GoldSentence> out;
  for (const auto &sentences : articles) {
    for (const auto &s : sentences) {
      GoldSentence g{s.article_id, s.sent_id, false, std::nullopt};
      const Span sent{static_cast<int>(s.start), static_cast<int>(s.end)};
      int best = 0;
      if (auto it = by_article.find(s.article_id); it != by_article.end()) {
        for (const GoldUnit *u : it->second) {
          const int overlap = Overlap(sent, Span{u->start, u->end});
          if (overlap > best) {
            best = overlap;
            g.positive = true;
            g.stance = u->function;
          }
        }
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::optional<double> F1Score(std::optional<double> precision, std::optional<double> recall) {
  if (!precision || !recall || *precision + *recall == 0.0) return std::nullopt;
  return 2.0 * *precision * *recall / (*precision + *recall);
}

Json BinaryMetrics::ToJson() const {
  return Json{{"n", n},           {"tp", tp},
              {"fp", fp},         {"fn", fn},
              {"tn", tn},         {"accuracy", Opt(accuracy)},
              {"precision", Opt(precision)}, {"recall", Opt(recall)},
              {"f1", Opt(f1)},    {"flags", flags}};
}

BinaryMetrics EvaluateBinary(const std::vector<stance::Prediction> &predictions,
                             const std::vector<GoldSentence> &gold, double binary_gate) {
  const auto index = IndexPredictions(predictions);
  BinaryMetrics m;
  for (const auto &g : gold) {
    const bool predicted = PredictedPositive(Find(index, g), binary_gate);
    if (g.positive) {
      ++(predicted ? m.tp : m.fn);
    } else {
      ++(predicted ? m.fp : m.tn);
    }
  }
  m.n = static_cast<int>(gold.size());
  m.accuracy = Ratio(m.tp + m.tn, m.n);
  m.precision = Ratio(m.tp, m.tp + m.fp);
  m.recall = Ratio(m.tp, m.tp + m.fn);
  m.f1 = F1Score(m.precision, m.recall);
  if (!m.accuracy) m.flags.push_back("accuracy");
  if (!m.precision) m.flags.push_back("precision");
  if (!m.recall) m.flags.push_back("recall");
  if (!m.f1) m.flags.push_back("f1");
  return m;
}

std::vector<std::pair<StanceLabel, std::array<double, 6>>> StanceEvaluation::NormalizedRows()
    const {
  std::vector<std::pair<StanceLabel, std::array<double, 6>>> rows;
  for (size_t r = 0; r < 6; ++r) {
    int total = 0;
    for (int c : confusion[r]) total += c;
    if (total == 0) continue;
    std::array<double, 6> row{};
    for (size_t c = 0; c < 6; ++c) row[c] = static_cast<double>(confusion[r][c]) / total;
    rows.emplace_back(stance::kTypologyOrder[r], row);
  }
  return rows;
}

Json StanceEvaluation::ToJson() const {
  Json classes_json = Json::array();
  for (const auto &c : classes) {
    classes_json.push_back(Json{{"label", std::string(stance::ToString(c.label))},
                                {"support", c.support},
                                {"predicted", c.predicted},
                                {"correct", c.correct},
                                {"precision", Opt(c.precision)},
                                {"recall", Opt(c.recall)},
                                {"f1", Opt(c.f1)}});
  }
  Json rows = Json::array();
  for (const auto &[label, row] : NormalizedRows()) {
    rows.push_back(Json{{"gold", std::string(stance::ToString(label))}, {"predicted", row}});
  }
  Json counts = Json::array();
  for (const auto &row : confusion) counts.push_back(row);
  return Json{{"conditional", conditional}, {"n_gold", n_gold},
              {"classes", classes_json},    {"macro_f1", Opt(macro_f1)},
              {"micro_f1", Opt(micro_f1)},  {"confusion_counts", counts},
              {"confusion_normalized", rows}, {"flags", flags}};
}

StanceEvaluation EvaluateStance(const std::vector<stance::Prediction> &predictions,
                                const std::vector<GoldSentence> &gold, bool conditional,
                                double binary_gate) {
  const auto index = IndexPredictions(predictions);
  StanceEvaluation e;
  e.conditional = conditional;
  std::array<int, 6> support{}, predicted{}, correct{};
  for (const auto &g : gold) {
    if (!g.positive) continue;
    if (!g.stance) throw DataError("gold positive without a function label");
    const auto &p = Find(index, g);
    const bool routed = PredictedPositive(p, binary_gate) && p.stance.has_value();
    if (conditional && !routed) continue;
    ++e.n_gold;
    ++support[Rank(*g.stance)];
    if (!routed) continue;
    ++predicted[Rank(*p.stance)];
    ++e.confusion[Rank(*g.stance)][Rank(*p.stance)];
    if (*p.stance == *g.stance) ++correct[Rank(*g.stance)];
  }

  double f1_sum = 0.0;
  int f1_count = 0;
  int total_correct = 0, total_predicted = 0;
  for (size_t k = 0; k < 6; ++k) {
    ClassMetrics c;
    c.label = stance::kTypologyOrder[k];
    c.support = support[k];
    c.predicted = predicted[k];
    c.correct = correct[k];
    c.precision = Ratio(c.correct, c.predicted);
    c.recall = Ratio(c.correct, c.support);
    c.f1 = F1Score(c.precision, c.recall);
    // A class that is both absent from gold and never predicted has no
    // defined score; a class with a score of zero counts as 0.
    if (!c.f1 && (c.support > 0 || c.predicted > 0)) c.f1 = 0.0;
    if (c.f1) {
      f1_sum += *c.f1;
      ++f1_count;
    } else {
      e.flags.push_back("f1_null:" + std::string(stance::ToString(c.label)));
    }
    total_correct += c.correct;
    total_predicted += c.predicted;
    e.classes.push_back(c);
  }
  if (f1_count > 0) e.macro_f1 = f1_sum / f1_count;
  e.micro_f1 = F1Score(Ratio(total_correct, total_predicted), Ratio(total_correct, e.n_gold));
  if (!e.micro_f1 && e.n_gold > 0) e.micro_f1 = 0.0;
  if (!e.macro_f1) e.flags.push_back("macro_f1");
  if (!e.micro_f1) e.flags.push_back("micro_f1");
  return e;
}

CsvTable ModelAgreementTable(const BinaryMetrics &binary, const StanceEvaluation &stance,
                             const AgreementReport &agreement) {
  CsvTable t;
  t.header = {"Metric", "Value"};
  t.rows = {{"Evaluation sentences", std::to_string(binary.n)},
            {"Accuracy", Cell(binary.accuracy)},
            {"Precision (interrogative)", Cell(binary.precision)},
            {"Recall (interrogative)", Cell(binary.recall)},
            {"F1 (interrogative)", Cell(binary.f1)},
            {"Evaluation interrogatives", std::to_string(stance.n_gold)},
            {"Macro-F1", Cell(stance.macro_f1)},
            {"Micro-F1", Cell(stance.micro_f1)},
            {"Double-coded articles", std::to_string(agreement.n_articles)},
            {"Matched interrogative units", std::to_string(agreement.n_matched_units)},
            {"Jaccard overlap (spans)", Cell(agreement.jaccard_overlap)},
            {"Accuracy (stance labels)", Cell(agreement.label_accuracy)},
            {"Cohen's kappa", Cell(agreement.cohen_kappa)}};
  return t;
}

CsvTable PerClassTable(const StanceEvaluation &evaluation) {
  CsvTable t;
  t.header = {"Stance", "Precision", "Recall", "F1", "Support"};
  for (const auto &c : evaluation.classes) {
    t.rows.push_back({stance::DisplayName(c.label), Cell(c.precision), Cell(c.recall),
                      Cell(c.f1), std::to_string(c.support)});
  }
  return t;
}

CsvTable ConfusionTable(const StanceEvaluation &evaluation) {
  CsvTable t;
  t.header = {"Gold"};
  for (auto l : stance::kTypologyOrder) t.header.push_back(stance::DisplayName(l));
  for (const auto &[label, row] : evaluation.NormalizedRows()) {
    std::vector<std::string> cells = {stance::DisplayName(label)};
    for (double v : row) cells.push_back(FormatFixed(v, 4));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace qstance::triangulate
