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

// Entity annotation of questions and answers. Mentions come from an NER
// provider over a closed, coarse label set; only mentions at or above the
// score threshold are retained. Addressivity types each question by the
// kinds of entity it mentions.

#ifndef QSTANCE_SEMANTICS_ENTITIES_H_
#define QSTANCE_SEMANTICS_ENTITIES_H_

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/answers/qa.h"
#include "qstance/corpus/types.h"
#include "qstance/providers/transport.h"

namespace qstance::semantics {

enum class EntityLabel {
  kPerson,
  kOrganization,
  kLocation,
  kCollectiveGroup,  // nationality, religious or political group
  kSocialGroup,
  kPublic,
  kEvent,
};

inline constexpr std::array<EntityLabel, 7> kAllEntityLabels = {
    EntityLabel::kPerson,      EntityLabel::kOrganization, EntityLabel::kLocation,
    EntityLabel::kCollectiveGroup, EntityLabel::kSocialGroup, EntityLabel::kPublic,
    EntityLabel::kEvent};

// Wire strings, e.g. "person", "nationality or religious or political group".
std::string_view ToString(EntityLabel label);
std::optional<EntityLabel> ParseEntityLabel(std::string_view text);
// The label list sent with every NER request, in kAllEntityLabels order.
std::vector<std::string> EntityLabelStrings();

inline constexpr double kMentionThreshold = 0.5;

struct EntityMention {
  std::string text;
  EntityLabel label = EntityLabel::kPerson;
  double score = 0.0;
  // Code point offsets into the annotated text, end exclusive.
  int start = 0;
  int end = 0;

  Json ToJson() const;
  static EntityMention FromJson(const Json &j);
};

enum class Addressivity { kActorFocused, kGroupFocused, kIssueFocused };

inline constexpr std::array<Addressivity, 3> kAllAddressivity = {
    Addressivity::kActorFocused, Addressivity::kGroupFocused, Addressivity::kIssueFocused};

std::string_view ToString(Addressivity a);

// actor-focused: any person, organization or location mention;
// group-focused: otherwise any collective, social-group or public mention;
// issue-focused: everything else, including event-only questions.
Addressivity ClassifyAddressivity(const std::vector<EntityMention> &mentions);

bool MentionsLabel(const std::vector<EntityMention> &mentions, EntityLabel label);

class NerClient {
 public:
  struct Options {
    int batch_size = 16;
    int max_in_flight = 1;
    double threshold = kMentionThreshold;
  };

  NerClient(std::shared_ptr<providers::JsonTransport> transport, Options options);

  // One retained-mention list per input text, in input order. Mentions
  // below the threshold are discarded; mentions with an unknown label or
  // offsets outside the text are dropped with a warning. Transport
  // failures propagate.
  std::vector<std::vector<EntityMention>> Annotate(const std::vector<std::string> &texts) const;

  const Options &options() const { return options_; }

 private:
  std::shared_ptr<providers::JsonTransport> transport_;
  Options options_;
};

// Question-side NER input: previous sentence (if any), the question, and
// the next sentence (if any), joined by single spaces.
std::string QuestionContext(const std::vector<corpus::SentenceRecord> &article, int sent_id);

struct EntityRecord {
  std::string article_id;
  int sent_id = 0;
  std::vector<EntityMention> question_entities;
  // Empty for unanswered questions: the answer side is only annotated when
  // an answer span exists.
  std::vector<EntityMention> answer_entities;

  corpus::SentenceKey key() const { return {article_id, sent_id}; }
  Json ToJson() const;
  static EntityRecord FromJson(const Json &j);
};

// Annotates every QA record: question contexts always, answer spans only
// for answered records (each distinct span text is sent once). Output is
// sorted by (article_id, sent_id).
std::vector<EntityRecord> AnnotateQuestionsAndAnswers(
    const std::vector<std::vector<corpus::SentenceRecord>> &articles,
    const std::vector<answers::QaRecord> &records, const NerClient &client);

}  // namespace qstance::semantics

#endif  // QSTANCE_SEMANTICS_ENTITIES_H_
