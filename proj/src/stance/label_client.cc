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

#include "qstance/stance/label_client.h"

#include <algorithm>

#include "qstance/util/errors.h"
#include "qstance/util/parallel.h"

namespace qstance::stance {

namespace {

// Model outputs sometimes arrive as a JSON document inside a string.
const Json *Unwrap(const Json &raw, Json &storage, std::string &error) {
  if (raw.is_object()) return &raw;
  if (raw.is_string()) {
    try {
      storage = Json::parse(raw.get<std::string>());
    } catch (const Json::parse_error &) {
      error = "unparsable result: " + raw.get<std::string>().substr(0, 80);
      return nullptr;
    }
    if (storage.is_object()) return &storage;
  }
  error = "result is not a JSON object";
  return nullptr;
}

bool ReadConfidence(const Json &result, bool teacher_scale, double &value, bool &snapped,
                    std::string &error) {
  if (!result.contains("confidence") || !result["confidence"].is_number()) {
    error = "result without numeric confidence";
    return false;
  }
  const double raw = result["confidence"].get<double>();
  if (teacher_scale) {
    const SnappedConfidence s = SnapToScale(raw);
    value = s.value;
    snapped = s.snapped;
    return true;
  }
  if (!(raw >= 0.0 && raw <= 1.0)) {
    error = "confidence outside [0,1]";
    return false;
  }
  value = raw;
  return true;
}

}  // namespace

LabelClient::LabelClient(std::shared_ptr<providers::JsonTransport> transport, Options options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  if (!transport_) throw ConfigError("label client needs a transport");
  if (options_.batch_size < 1) throw ConfigError("label batch size must be positive");
}

template <typename Result, typename Parse>
std::vector<Result> LabelClient::Run(const char *endpoint,
                                     const std::vector<std::string> &contexts,
                                     Parse parse) const {
  std::vector<Result> results(contexts.size());
  const size_t batch = static_cast<size_t>(options_.batch_size);
  const size_t n_batches = (contexts.size() + batch - 1) / batch;
  ParallelFor(n_batches, options_.max_in_flight, [&](size_t b) {
    const size_t begin = b * batch;
    const size_t end = std::min(contexts.size(), begin + batch);
    Json items = Json::array();
    for (size_t i = begin; i < end; ++i) items.push_back(Json{{"context_text", contexts[i]}});
    Json request{{"items", items}};
    if (!options_.prompt_id.empty()) request["prompt_id"] = options_.prompt_id;
    const Json response = transport_->Post(endpoint, request);
    const Json *list = nullptr;
    if (response.is_object() && response.contains("results") && response["results"].is_array() &&
        response["results"].size() == end - begin) {
      list = &response["results"];
    }
    for (size_t i = begin; i < end; ++i) {
      if (list == nullptr) {
        results[i].error = "batch answer without a matching results array";
      } else {
        parse((*list)[i - begin], results[i]);
      }
    }
  });
  return results;
}

std::vector<BinaryResult> LabelClient::LabelBinary(
    const std::vector<std::string> &contexts) const {
  const bool teacher = options_.teacher_scale;
  return Run<BinaryResult>(providers::kBinaryEndpoint, contexts,
                           [teacher](const Json &raw, BinaryResult &out) {
                             Json storage;
                             const Json *r = Unwrap(raw, storage, out.error);
                             if (r == nullptr) return;
                             if (!r->contains("is_interrogative") ||
                                 !(*r)["is_interrogative"].is_boolean()) {
                               out.error = "result without boolean is_interrogative";
                               return;
                             }
                             if (!ReadConfidence(*r, teacher, out.confidence, out.snapped,
                                                 out.error)) {
                               return;
                             }
                             out.is_interrogative = (*r)["is_interrogative"].get<bool>();
                           });
}

std::vector<StanceResult> LabelClient::LabelStance(
    const std::vector<std::string> &contexts) const {
  const bool teacher = options_.teacher_scale;
  return Run<StanceResult>(providers::kStanceEndpoint, contexts,
                           [teacher](const Json &raw, StanceResult &out) {
                             Json storage;
                             const Json *r = Unwrap(raw, storage, out.error);
                             if (r == nullptr) return;
                             if (!r->contains("label") || !(*r)["label"].is_string()) {
                               out.error = "result without string label";
                               return;
                             }
                             const auto label = ParseStance((*r)["label"].get<std::string>());
                             if (!label) {
                               out.error = "unknown stance label " + (*r)["label"].dump();
                               return;
                             }
                             if (!ReadConfidence(*r, teacher, out.confidence, out.snapped,
                                                 out.error)) {
                               return;
                             }
                             out.label = *label;
                           });
}

LabelClient::Options TeacherOptions(const std::string &mode) {
  LabelClient::Options options;
  options.batch_size = 8;
  options.teacher_scale = true;
  options.prompt_id = mode == "binary" ? "teacher_binary_v1" : "teacher_stance_v1";
  return options;
}

std::string LoadPrompt(const std::string &prompt_id) {
  const std::string path = std::string(QSTANCE_ASSET_DIR) + "/prompts/" + prompt_id + ".txt";
  if (!FileExists(path)) throw ConfigError("unknown prompt asset: " + prompt_id);
  return ReadFile(path);
}

}  // namespace qstance::stance
