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

// Bundled deterministic provider for tests and offline runs. It answers the
// full wire protocol from cheap surface heuristics and text hashes, so its
// output depends only on the request body:
//
//   labels    rule hits and lexical cues; the teacher flavor answers on the
//             four-point confidence scale, the student flavor with
//             continuous confidences
//   embed     hashed bag of words (target weight 1, context 0.35) plus a
//             small text-seeded jitter, L2-normalized
//   ner       a small French gazetteer plus a capitalized-sequence guess
//
// None of this is a model; it only has to be stable and plausible.

#ifndef QSTANCE_PROVIDERS_MOCK_H_
#define QSTANCE_PROVIDERS_MOCK_H_

#include <string>
#include <vector>

#include "qstance/providers/transport.h"

namespace qstance::providers {

enum class MockFlavor { kTeacher, kStudent };

class MockTransport : public JsonTransport {
 public:
  explicit MockTransport(MockFlavor flavor, int embedding_dim = 256)
      : flavor_(flavor), embedding_dim_(embedding_dim) {}

  Json Post(const std::string &endpoint, const Json &body) override;

  // Individual handlers, exposed for tests.
  Json LabelBinary(const std::string &context_text) const;
  Json LabelStance(const std::string &context_text) const;
  std::vector<double> Embed(const std::string &text) const;
  Json Ner(const std::string &text, const std::vector<std::string> &labels) const;

 private:
  MockFlavor flavor_;
  int embedding_dim_;
};

}  // namespace qstance::providers

#endif  // QSTANCE_PROVIDERS_MOCK_H_
