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

#include "qstance/stance/pipeline.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "qstance/corpus/context.h"
#include "qstance/util/errors.h"
#include "qstance/util/random.h"

namespace qstance::stance {

namespace {

constexpr char kInterrogative[] = "interrogative";
constexpr char kNonInterrogative[] = "non-interrogative";

struct Item {
  corpus::SentenceKey key;
  std::string context_text;
};

std::vector<std::string> Texts(const std::vector<Item> &items) {
  std::vector<std::string> texts;
  texts.reserve(items.size());
  for (const auto &item : items) texts.push_back(item.context_text);
  return texts;
}

bool ByKey(const TrainingRow &a, const TrainingRow &b) {
  return std::tie(a.article_id, a.sent_id) < std::tie(b.article_id, b.sent_id);
}

Json LabelCounts(const std::vector<TrainingRow> &rows, const std::vector<std::string> &vocab) {
  std::map<std::string, int> counts;
  for (const auto &v : vocab) counts[v] = 0;
  for (const auto &r : rows) ++counts[r.label];
  Json out = Json::object();
  for (const auto &[label, n] : counts) out[label] = n;
  return out;
}

Json SplitSummary(const std::vector<TrainingRow> &rows, const std::vector<std::string> &vocab) {
  return Json{{"rows", rows.size()}, {"labels", LabelCounts(rows, vocab)}};
}

}  // namespace

Json LabelError::ToJson() const {
  return Json{{"article_id", article_id}, {"sent_id", sent_id}, {"stage", stage},
              {"error", message}};
}

PseudoLabelOutput PseudoLabelSentences(const Articles &articles,
                                       const std::set<corpus::SentenceKey> &selected,
                                       const std::set<corpus::SentenceKey> &calibration,
                                       const LabelClient &binary_teacher,
                                       const LabelClient &stance_teacher) {
  std::vector<Item> items;
  for (const auto &article : articles) {
    for (const auto &s : article) {
      corpus::SentenceKey key{s.article_id, s.sent_id};
      if (selected.count(key) == 0) continue;
      items.push_back({key, corpus::BuildContext(article, s.sent_id,
                                                 corpus::kClassificationRadius)
                                .context_text});
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Item &a, const Item &b) { return a.key < b.key; });

  PseudoLabelOutput out;
  const auto binary = binary_teacher.LabelBinary(Texts(items));
  std::vector<size_t> positives;  // indices into out.labels
  std::vector<Item> stance_items;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto &r = binary[i];
    if (!r.ok()) {
      out.errors.push_back({items[i].key.article_id, items[i].key.sent_id, "binary", r.error});
      continue;
    }
    PseudoLabel label;
    label.article_id = items[i].key.article_id;
    label.sent_id = items[i].key.sent_id;
    label.context_text = items[i].context_text;
    label.is_interrogative = r.is_interrogative;
    label.binary_confidence = r.confidence;
    label.binary_snapped = r.snapped;
    label.calibration_pick = calibration.count(items[i].key) != 0;
    if (label.is_interrogative) {
      positives.push_back(out.labels.size());
      stance_items.push_back(items[i]);
    }
    out.labels.push_back(std::move(label));
  }

  const auto stances = stance_teacher.LabelStance(Texts(stance_items));
  for (size_t j = 0; j < positives.size(); ++j) {
    const auto &r = stances[j];
    PseudoLabel &label = out.labels[positives[j]];
    if (!r.ok()) {
      out.errors.push_back({label.article_id, label.sent_id, "stance", r.error});
      continue;
    }
    label.stance = r.label;
    label.stance_confidence = r.confidence;
    label.stance_snapped = r.snapped;
  }
  return out;
}

TrainingRows FilterHighConfidence(const std::vector<PseudoLabel> &labels, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("teacher keep threshold must be in (0, 1]");
  }
  TrainingRows rows;
  for (const auto &p : labels) {
    if (p.binary_confidence >= threshold) {
      rows.binary.push_back({p.article_id, p.sent_id, p.context_text,
                             p.is_interrogative ? kInterrogative : kNonInterrogative});
    }
    if (p.is_interrogative && p.stance && p.stance_confidence &&
        *p.stance_confidence >= threshold) {
      rows.stance.push_back(
          {p.article_id, p.sent_id, p.context_text, std::string(ToString(*p.stance))});
    }
  }
  std::sort(rows.binary.begin(), rows.binary.end(), ByKey);
  std::sort(rows.stance.begin(), rows.stance.end(), ByKey);
  return rows;
}

TrainingExport ExportTrainingSet(const TrainingRows &rows,
                                 const std::set<std::string> &excluded_articles,
                                 const ExportOptions &options) {
  if (!(options.holdout_fraction >= 0.0 && options.holdout_fraction < 1.0)) {
    throw ConfigError("holdout fraction must be in [0, 1)");
  }
  std::set<std::string> all_articles;
  for (const auto *task : {&rows.binary, &rows.stance}) {
    for (const auto &r : *task) all_articles.insert(r.article_id);
  }
  std::vector<std::string> pool;
  size_t n_excluded = 0;
  for (const auto &a : all_articles) {
    if (excluded_articles.count(a) != 0) {
      ++n_excluded;
    } else {
      pool.push_back(a);
    }
  }
  if (pool.empty()) {
    throw DataError("no training articles left after removing the evaluation articles");
  }
  SeededRng rng(options.seed);
  rng.Shuffle(pool);
  const auto n_val = static_cast<size_t>(
      std::floor(options.holdout_fraction * static_cast<double>(pool.size()) + 0.5 + 1e-9));

  TrainingExport data;
  data.validation_articles.insert(pool.begin(), pool.begin() + static_cast<long>(n_val));
  data.train_articles.insert(pool.begin() + static_cast<long>(n_val), pool.end());

  auto route = [&](const std::vector<TrainingRow> &in, std::vector<TrainingRow> &train,
                   std::vector<TrainingRow> &validation) {
    for (const auto &r : in) {
      if (data.validation_articles.count(r.article_id) != 0) {
        validation.push_back(r);
      } else if (data.train_articles.count(r.article_id) != 0) {
        train.push_back(r);
      }
    }
    std::sort(train.begin(), train.end(), ByKey);
    std::sort(validation.begin(), validation.end(), ByKey);
  };
  route(rows.binary, data.train_binary, data.validation_binary);
  route(rows.stance, data.train_stance, data.validation_stance);

  const std::vector<std::string> binary_vocab = {kInterrogative, kNonInterrogative};
  std::vector<std::string> stance_vocab;
  for (StanceLabel s : kAllStances) stance_vocab.emplace_back(ToString(s));
  data.manifest = Json{
      {"seed", options.seed},
      {"holdout_fraction", options.holdout_fraction},
      {"threshold", options.threshold},
      {"excluded_articles", n_excluded},
      {"articles",
       {{"train", data.train_articles.size()}, {"validation", data.validation_articles.size()}}},
      {"binary",
       {{"train", SplitSummary(data.train_binary, binary_vocab)},
        {"validation", SplitSummary(data.validation_binary, binary_vocab)}}},
      {"stance",
       {{"train", SplitSummary(data.train_stance, stance_vocab)},
        {"validation", SplitSummary(data.validation_stance, stance_vocab)}}}};
  return data;
}

void WriteTrainingExport(const TrainingExport &data, const std::string &dir) {
  EnsureDirectory(dir);
  auto write = [&](const std::string &name, const std::vector<TrainingRow> &rows) {
    std::vector<Json> lines;
    lines.reserve(rows.size());
    for (const auto &r : rows) lines.push_back(r.ToJson());
    WriteJsonLines(JoinPath(dir, name), lines);
  };
  write("train_binary.jsonl", data.train_binary);
  write("validation_binary.jsonl", data.validation_binary);
  write("train_stance.jsonl", data.train_stance);
  write("validation_stance.jsonl", data.validation_stance);
  WriteFileAtomic(JoinPath(dir, "manifest.json"), data.manifest.dump(2) + "\n");
}

InferenceOutput InferTwoStep(const Articles &articles, const LabelClient &binary_student,
                             const LabelClient &stance_student, double gate) {
  if (!(gate >= 0.0 && gate <= 1.0)) throw ConfigError("binary gate must be in [0, 1]");
  std::vector<Item> items;
  for (const auto &article : articles) {
    for (const auto &s : article) {
      items.push_back({{s.article_id, s.sent_id},
                       corpus::BuildContext(article, s.sent_id, corpus::kClassificationRadius)
                           .context_text});
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Item &a, const Item &b) { return a.key < b.key; });

  InferenceOutput out;
  const auto binary = binary_student.LabelBinary(Texts(items));
  std::vector<size_t> gated;
  std::vector<Item> stance_items;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto &r = binary[i];
    if (!r.ok()) {
      out.errors.push_back({items[i].key.article_id, items[i].key.sent_id, "binary", r.error});
      continue;
    }
    Prediction p;
    p.article_id = items[i].key.article_id;
    p.sent_id = items[i].key.sent_id;
    p.binary_label = r.is_interrogative;
    p.binary_conf = r.confidence;
    if (p.binary_label && p.binary_conf >= gate) {
      gated.push_back(out.predictions.size());
      stance_items.push_back(items[i]);
    }
    out.predictions.push_back(std::move(p));
  }
  out.stance_queries = stance_items.size();
  const auto stances = stance_student.LabelStance(Texts(stance_items));
  for (size_t j = 0; j < gated.size(); ++j) {
    Prediction &p = out.predictions[gated[j]];
    if (!stances[j].ok()) {
      out.errors.push_back({p.article_id, p.sent_id, "stance", stances[j].error});
      continue;
    }
    p.stance = stances[j].label;
    p.stance_conf = stances[j].confidence;
  }
  return out;
}

size_t CountStanceLabeled(const std::vector<Prediction> &predictions) {
  return static_cast<size_t>(std::count_if(predictions.begin(), predictions.end(),
                                           [](const Prediction &p) { return p.stance.has_value(); }));
}

}  // namespace qstance::stance
