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

#include "qstance/stance/labels.h"

#include <cmath>

#include "qstance/util/errors.h"

namespace qstance::stance {

std::string_view ToString(StanceLabel label) {
  switch (label) {
    case StanceLabel::kInformationSeeking:
      return "information-seeking";
    case StanceLabel::kRhetorical:
      return "rhetorical";
    case StanceLabel::kLeading:
      return "leading";
    case StanceLabel::kTag:
      return "tag";
    case StanceLabel::kEchoClarification:
      return "echo-clarification";
    case StanceLabel::kFramingProcedural:
      return "framing-procedural";
  }
  return "";
}

std::string DisplayName(StanceLabel label) {
  std::string name(ToString(label));
  name[0] = static_cast<char>(name[0] - 'a' + 'A');
  return name;
}

std::optional<StanceLabel> ParseStance(std::string_view text) {
  for (StanceLabel label : kAllStances) {
    if (text == ToString(label)) return label;
  }
  return std::nullopt;
}

int TypologyRank(StanceLabel label) {
  for (size_t i = 0; i < kTypologyOrder.size(); ++i) {
    if (kTypologyOrder[i] == label) return static_cast<int>(i);
  }
  return static_cast<int>(kTypologyOrder.size());
}

SnappedConfidence SnapToScale(double confidence) {
  double best = kTeacherScale[0];
  double best_distance = std::fabs(confidence - best);
  for (double v : kTeacherScale) {
    const double d = std::fabs(confidence - v);
    if (d < best_distance - 1e-12) {
      best = v;
      best_distance = d;
    }
  }
  return {best, best_distance > 1e-9};
}

namespace {

void CheckUnit(double x, const char *field, const std::string &who) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DataError(std::string(field) + " outside [0,1] for " + who);
  }
}

std::optional<StanceLabel> StanceField(const Json &j, const char *field, const std::string &who) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  const auto parsed = ParseStance(j[field].get<std::string>());
  if (!parsed) throw DataError("unknown stance label '" + j[field].get<std::string>() + "' for " + who);
  return parsed;
}

std::optional<double> OptionalNumber(const Json &j, const char *field) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  return j[field].get<double>();
}

Json NullableStance(const std::optional<StanceLabel> &s) {
  return s ? Json(std::string(ToString(*s))) : Json(nullptr);
}

Json NullableNumber(const std::optional<double> &x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

Json PseudoLabel::ToJson() const {
  Json flags = Json::array();
  if (binary_snapped) flags.push_back("binary_snapped");
  if (stance_snapped) flags.push_back("stance_snapped");
  if (calibration_pick) flags.push_back("calibration");
  return Json{{"article_id", article_id},
              {"sent_id", sent_id},
              {"context_text", context_text},
              {"is_interrogative", is_interrogative},
              {"binary_confidence", binary_confidence},
              {"stance", NullableStance(stance)},
              {"stance_confidence", NullableNumber(stance_confidence)},
              {"flags", flags}};
}

PseudoLabel PseudoLabel::FromJson(const Json &j) {
  PseudoLabel p;
  try {
    p.article_id = j.at("article_id").get<std::string>();
    p.sent_id = j.at("sent_id").get<int>();
    const std::string who = p.article_id + "#" + std::to_string(p.sent_id);
    p.context_text = j.value("context_text", "");
    p.is_interrogative = j.at("is_interrogative").get<bool>();
    p.binary_confidence = j.at("binary_confidence").get<double>();
    p.stance = StanceField(j, "stance", who);
    p.stance_confidence = OptionalNumber(j, "stance_confidence");
    for (const auto &flag : j.value("flags", Json::array())) {
      const std::string f = flag.get<std::string>();
      if (f == "binary_snapped") p.binary_snapped = true;
      if (f == "stance_snapped") p.stance_snapped = true;
      if (f == "calibration") p.calibration_pick = true;
    }
    if (SnapToScale(p.binary_confidence).snapped) {
      throw DataError("binary_confidence off the teacher scale for " + who);
    }
    if (p.stance && !p.is_interrogative) {
      throw DataError("stance on a non-interrogative pseudo-label for " + who);
    }
    if (p.stance.has_value() != p.stance_confidence.has_value()) {
      throw DataError("stance and stance_confidence must come together for " + who);
    }
    if (p.stance_confidence && SnapToScale(*p.stance_confidence).snapped) {
      throw DataError("stance_confidence off the teacher scale for " + who);
    }
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed pseudo-label: ") + e.what());
  }
  return p;
}

Json Prediction::ToJson() const {
  return Json{{"article_id", article_id},
              {"sent_id", sent_id},
              {"binary_label", binary_label},
              {"binary_conf", binary_conf},
              {"stance", NullableStance(stance)},
              {"stance_conf", NullableNumber(stance_conf)}};
}

Prediction Prediction::FromJson(const Json &j) {
  Prediction p;
  try {
    p.article_id = j.at("article_id").get<std::string>();
    p.sent_id = j.at("sent_id").get<int>();
    const std::string who = p.article_id + "#" + std::to_string(p.sent_id);
    p.binary_label = j.at("binary_label").get<bool>();
    p.binary_conf = j.at("binary_conf").get<double>();
    CheckUnit(p.binary_conf, "binary_conf", who);
    p.stance = StanceField(j, "stance", who);
    p.stance_conf = OptionalNumber(j, "stance_conf");
    if (p.stance.has_value() != p.stance_conf.has_value()) {
      throw DataError("stance and stance_conf must come together for " + who);
    }
    if (p.stance_conf) CheckUnit(*p.stance_conf, "stance_conf", who);
    if (p.stance && !p.binary_label) {
      throw DataError("stance on a non-interrogative prediction for " + who);
    }
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed prediction: ") + e.what());
  }
  return p;
}

}  // namespace qstance::stance
