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

// Human-coded interrogative units. Each unit is a character span of the
// article text (code point offsets, end exclusive) with its coding:
// interactional context, addressee, grammatical form, pragmatic function
// (one of the six stances), one or two macro axes, and whether an answer is
// realized in the article.

#ifndef QSTANCE_TRIANGULATE_GOLD_H_
#define QSTANCE_TRIANGULATE_GOLD_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/stance/labels.h"
#include "qstance/util/io.h"

namespace qstance::triangulate {

inline const std::vector<std::string> kInteractionalContexts = {"interview", "non-interview"};
inline const std::vector<std::string> kAddressees = {"individual", "collective", "audience",
                                                     "self"};
inline const std::vector<std::string> kForms = {"wh",     "polar",   "alternative",
                                                "tag",    "declarative-question",
                                                "elliptic", "indirect"};
inline const std::vector<std::string> kMacroAxes = {"Authority positioning",
                                                    "Framing/agenda-setting", "Stance/alignment",
                                                    "Legitimation", "Discursive strategy"};

struct GoldUnit {
  std::string article_id;
  std::string unit_id;
  std::string annotator_id;
  int start = 0;
  int end = 0;
  std::string text;
  std::string interactional_context;
  std::string addressee;
  std::string form;
  stance::StanceLabel function = stance::StanceLabel::kFramingProcedural;
  std::vector<std::string> macro_axes;
  bool answer_realized = false;

  int length() const { return end - start; }
  Json ToJson() const;
};

struct FieldError {
  std::string field;
  std::string message;

  Json ToJson() const { return Json{{"field", field}, {"message", message}}; }
};

// Field-level validation of a unit given as JSON (as posted by the
// annotation UI). When `article_text` is given, the span must lie within
// it and `text` must equal the spanned substring. Returns the parsed unit
// when there are no errors.
std::optional<GoldUnit> ParseGoldUnit(const Json &j, std::vector<FieldError> &errors,
                                      const std::string *article_text = nullptr);

// Strict variant: throws DataError listing the field errors.
GoldUnit GoldUnitFromJson(const Json &j, const std::string *article_text = nullptr);

std::vector<GoldUnit> ReadGoldUnits(const std::string &path);
void WriteGoldUnits(const std::string &path, const std::vector<GoldUnit> &units);

}  // namespace qstance::triangulate

#endif  // QSTANCE_TRIANGULATE_GOLD_H_
