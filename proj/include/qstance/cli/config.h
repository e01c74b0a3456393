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

// Pipeline configuration. Values come, in increasing precedence, from the
// built-in defaults, a plain-text `key = value` file, environment variables
// named QS_<KEY> (upper case), and command-line overrides. Every key is
// declared in one table with its default and description.

#ifndef QSTANCE_CLI_CONFIG_H_
#define QSTANCE_CLI_CONFIG_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/util/io.h"

namespace qstance::cli {

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

// All known keys, in documentation order.
const std::vector<ConfigKey> &ConfigKeys();

// Raw string values with their origin ("default", "file", "env", "flag").
class ConfigValues {
 public:
  ConfigValues();

  // `key = value` lines; blank lines and lines starting with '#' are
  // skipped. Unknown keys and malformed lines are ConfigErrors.
  void MergeText(std::string_view text, std::string_view origin);
  void MergeFile(const std::string &path);
  // Reads QS_<KEY> for every known key through `getenv`.
  void MergeEnvironment(const std::function<const char *(const char *)> &getenv);
  void Set(const std::string &key, const std::string &value, std::string_view origin);

  const std::string &Get(const std::string &key) const;
  const std::string &Origin(const std::string &key) const;

 private:
  std::map<std::string, std::pair<std::string, std::string>> values_;
};

struct PipelineConfig {
  // Inputs.
  std::string articles;
  std::string ontology;
  std::string meta_topics;
  std::string rules;
  std::string quote_markers;
  std::string gold;
  std::string vectors;
  std::string spot_check_audited;
  // Providers.
  std::string teacher_url;
  std::string student_url;
  std::string binary_url;  // resolved; falls back to student_url
  std::string stance_url;  // resolved; falls back to student_url
  std::string embed_url;
  std::string ner_url;
  std::string cassette;
  bool record = false;
  // Thresholds and search parameters.
  double teacher_keep = 0.7;
  double binary_gate = 0.7;
  double stance_gate = 0.7;
  double similarity = 0.40;
  int horizon = 15;
  std::vector<int> window_lengths = {1, 2, 3, 4, 5};
  double ner_threshold = 0.5;
  double calibration_fraction = 0.25;
  double holdout_fraction = 0.10;
  bool fold_accents = false;
  // Sampling.
  std::optional<uint64_t> seed;
  int sample_main = 400;
  int sample_double = 100;
  int sample_extension = 100;
  double main_question_share = 0.5;
  std::string annotator_a = "A";
  std::string annotator_b = "B";
  int spot_answered = 40;
  int spot_unanswered = 10;
  // Execution.
  std::string out = "out";
  int threads = 1;
  bool lenient = false;
  int label_batch = 32;
  int teacher_batch = 8;
  int embed_batch = 64;
  int ner_batch = 16;
  int max_in_flight = 4;
  // Annotation server.
  std::string store;
  std::string serve_addr;
  std::string static_dir;

  // Parses and range-checks every value (ConfigError on failure).
  static PipelineConfig Resolve(const ConfigValues &values);

  // The seed, or ConfigError naming `command` when it was not set.
  uint64_t RequireSeed(std::string_view command) const;

  std::string OutPath(const std::string &name) const { return JoinPath(out, name); }
  // Annotation store directory (defaults to <out>/annotation).
  std::string StoreDir() const;
  // Cassette file for one provider role, or "" without a cassette.
  std::string CassetteFor(const std::string &role) const;

  Json ToJson() const;
};

}  // namespace qstance::cli

#endif  // QSTANCE_CLI_CONFIG_H_
