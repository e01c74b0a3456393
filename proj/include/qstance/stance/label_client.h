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

// Typed client for the binary and stance label endpoints. Inputs are cut
// into batches that are sent concurrently (bounded in-flight count) and
// results are returned in input order.
//
// Error handling follows two levels: a transport failure fails the whole
// call (after the transport's own retries), while a result that cannot be
// understood becomes an item-level error and the rest of the batch is kept.

#ifndef QSTANCE_STANCE_LABEL_CLIENT_H_
#define QSTANCE_STANCE_LABEL_CLIENT_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qstance/providers/transport.h"
#include "qstance/stance/labels.h"

namespace qstance::stance {

struct BinaryResult {
  bool is_interrogative = false;
  double confidence = 0.0;
  bool snapped = false;
  std::string error;  // non-empty for an item-level failure

  bool ok() const { return error.empty(); }
};

struct StanceResult {
  StanceLabel label = StanceLabel::kFramingProcedural;
  double confidence = 0.0;
  bool snapped = false;
  std::string error;

  bool ok() const { return error.empty(); }
};

class LabelClient {
 public:
  struct Options {
    int batch_size = 32;
    int max_in_flight = 1;
    // Teacher mode: confidences are snapped onto the four-point scale.
    bool teacher_scale = false;
    // Prompt asset name sent along with teacher requests; empty for none.
    std::string prompt_id;
  };

  LabelClient(std::shared_ptr<providers::JsonTransport> transport, Options options);

  std::vector<BinaryResult> LabelBinary(const std::vector<std::string> &contexts) const;
  std::vector<StanceResult> LabelStance(const std::vector<std::string> &contexts) const;

  const Options &options() const { return options_; }

 private:
  // Posts `contexts` in batches and hands each raw result (or nullptr when
  // the batch answer is unusable) to `parse` with its input index.
  template <typename Result, typename Parse>
  std::vector<Result> Run(const char *endpoint, const std::vector<std::string> &contexts,
                          Parse parse) const;

  std::shared_ptr<providers::JsonTransport> transport_;
  Options options_;
};

// Options for the bundled teacher defaults (batch size 8, four-point
// scale, prompt asset reference).
LabelClient::Options TeacherOptions(const std::string &mode);

// Prompt asset text for a prompt id, read from assets/prompts/<id>.txt.
std::string LoadPrompt(const std::string &prompt_id);

}  // namespace qstance::stance

#endif  // QSTANCE_STANCE_LABEL_CLIENT_H_
