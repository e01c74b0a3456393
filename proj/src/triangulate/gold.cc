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

#include "qstance/triangulate/gold.h"

#include <algorithm>
#include <set>

#include "qstance/util/errors.h"
#include "qstance/util/utf8.h"

namespace qstance::triangulate {

namespace {

bool OneOf(const std::vector<std::string> &set, const std::string &value) {
  return std::find(set.begin(), set.end(), value) != set.end();
}

std::string Join(const std::vector<std::string> &items) {
  std::string out;
  for (const auto &i : items) out += (out.empty() ? "" : ", ") + i;
  return out;
}

}  // namespace

Json GoldUnit::ToJson() const {
  return Json{{"article_id", article_id},
              {"unit_id", unit_id},
              {"annotator_id", annotator_id},
              {"span", Json{{"start", start}, {"end", end}}},
              {"text", text},
              {"interactional_context", interactional_context},
              {"addressee", addressee},
              {"form", form},
              {"function", std::string(stance::ToString(function))},
              {"macro_axes", macro_axes},
              {"answer_realized", answer_realized}};
}

std::optional<GoldUnit> ParseGoldUnit(const Json &j, std::vector<FieldError> &errors,
                                      const std::string *article_text) {
  const size_t before = errors.size();
  if (!j.is_object()) {
    errors.push_back({"unit", "must be a JSON object"});
    return std::nullopt;
  }
  GoldUnit u;
  auto string_field = [&](const char *name, std::string &out, bool allow_empty = false) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) {
      errors.push_back({name, "required string"});
      return;
    }
    out = it->get<std::string>();
    if (!allow_empty && out.empty()) errors.push_back({name, "must not be empty"});
  };
  auto closed_field = [&](const char *name, std::string &out,
                          const std::vector<std::string> &allowed) {
    string_field(name, out);
    if (!out.empty() && !OneOf(allowed, out)) {
      errors.push_back({name, "must be one of: " + Join(allowed)});
    }
  };
  string_field("article_id", u.article_id);
  string_field("unit_id", u.unit_id);
  string_field("annotator_id", u.annotator_id);
  string_field("text", u.text, true);
  closed_field("interactional_context", u.interactional_context, kInteractionalContexts);
  closed_field("addressee", u.addressee, kAddressees);
  closed_field("form", u.form, kForms);

  std::string function;
  string_field("function", function);
  if (!function.empty()) {
    if (auto s = stance::ParseStance(function)) {
      u.function = *s;
    } else {
      errors.push_back({"function", "must be one of the six stance labels"});
    }
  }

  const Json *span = j.contains("span") ? &j["span"] : nullptr;
  if (span == nullptr || !span->is_object() || !span->contains("start") ||
      !span->contains("end") || !(*span)["start"].is_number_integer() ||
      !(*span)["end"].is_number_integer()) {
    errors.push_back({"span", "required object {start, end} with integer offsets"});
  } else {
    const long start = (*span)["start"].get<long>();
    const long end = (*span)["end"].get<long>();
    if (start < 0 || end <= start) {
      errors.push_back({"span", "needs 0 <= start < end"});
    } else {
      u.start = static_cast<int>(start);
      u.end = static_cast<int>(end);
      if (article_text != nullptr) {
        const size_t length = utf8::Length(*article_text);
        if (static_cast<size_t>(end) > length) {
          errors.push_back({"span", "extends beyond the article text (" +
                                        std::to_string(length) + " characters)"});
        } else if (utf8::Substr(*article_text, static_cast<size_t>(start),
                                static_cast<size_t>(end)) != u.text) {
          errors.push_back({"text", "does not match the article text at the span"});
        }
      }
    }
  }

  auto axes = j.find("macro_axes");
  if (axes == j.end() || !axes->is_array()) {
    errors.push_back({"macro_axes", "required list of 1 or 2 axes"});
  } else {
    std::set<std::string> seen;
    for (const auto &a : *axes) {
      if (!a.is_string() || !OneOf(kMacroAxes, a.get<std::string>())) {
        errors.push_back({"macro_axes", "each axis must be one of: " + Join(kMacroAxes)});
        break;
      }
      if (!seen.insert(a.get<std::string>()).second) {
        errors.push_back({"macro_axes", "axes must be distinct"});
        break;
      }
      u.macro_axes.push_back(a.get<std::string>());
    }
    if (axes->empty() || axes->size() > 2) {
      errors.push_back({"macro_axes", "must hold 1 or 2 axes, got " +
                                          std::to_string(axes->size())});
    }
  }

  auto answer = j.find("answer_realized");
  if (answer == j.end() || !answer->is_boolean()) {
    errors.push_back({"answer_realized", "required boolean"});
  } else {
    u.answer_realized = answer->get<bool>();
  }
  if (errors.size() != before) return std::nullopt;
  return u;
}

GoldUnit GoldUnitFromJson(const Json &j, const std::string *article_text) {
  std::vector<FieldError> errors;
  auto u = ParseGoldUnit(j, errors, article_text);
  if (!u) {
    std::string message = "invalid gold unit";
    if (j.is_object() && j.contains("unit_id") && j["unit_id"].is_string()) {
      message += " " + j["unit_id"].get<std::string>();
    }
    for (const auto &e : errors) message += "; " + e.field + ": " + e.message;
    throw DataError(message);
  }
  return *u;
}

std::vector<GoldUnit> ReadGoldUnits(const std::string &path) {
  std::vector<GoldUnit> units;
  for (const Json &row : ReadJsonLines(path)) units.push_back(GoldUnitFromJson(row));
  return units;
}

void WriteGoldUnits(const std::string &path, const std::vector<GoldUnit> &units) {
  std::vector<Json> rows;
  rows.reserve(units.size());
  for (const auto &u : units) rows.push_back(u.ToJson());
  WriteJsonLines(path, rows);
}

}  // namespace qstance::triangulate
