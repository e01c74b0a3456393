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

#include "qstance/cli/config.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "qstance/util/errors.h"
#include "qstance/util/utf8.h"

namespace qstance::cli {

namespace {

#define QS_ASSET(path) QSTANCE_ASSET_DIR "/" path

const std::vector<ConfigKey> kKeys = {
    {"articles", "", "input articles (JSON lines)"},
    {"ontology", QS_ASSET("ontology/outlets.csv"), "outlet ontology CSV"},
    {"meta_topics", "", "topic_id,meta_topic mapping CSV (optional)"},
    {"rules", QS_ASSET("rules/candidates.rules"), "candidate rule file"},
    {"quote_markers", QS_ASSET("quotes/markers.txt"), "direct-speech marker list"},
    {"gold", "", "gold units (JSON lines) or an annotation store directory"},
    {"vectors", "", "precomputed sentence vectors (JSON lines) used instead of the provider"},
    {"spot_check_audited", "", "audited spot-check manifest to summarize"},
    {"teacher_url", "mock:teacher", "teacher label provider"},
    {"student_url", "mock:student", "student label provider"},
    {"binary_url", "", "student binary provider (defaults to student_url)"},
    {"stance_url", "", "student stance provider (defaults to student_url)"},
    {"embed_url", "mock", "embedding provider"},
    {"ner_url", "mock", "named-entity provider"},
    {"cassette", "", "cassette directory: replay provider exchanges (record with record=true)"},
    {"record", "false", "record provider exchanges into the cassette directory"},
    {"teacher_keep", "0.7", "minimum teacher confidence for training rows"},
    {"binary_gate", "0.7", "binary confidence needed to route a sentence to the stance step"},
    {"stance_gate", "0.7", "stance confidence needed to count a sentence as a question"},
    {"similarity", "0.40", "cosine threshold for an answer span"},
    {"horizon", "15", "answer windows must lie within this many sentences"},
    {"window_lengths", "1,2,3,4,5", "answer window lengths in sentences"},
    {"ner_threshold", "0.5", "minimum entity mention score"},
    {"calibration_fraction", "0.25", "non-candidate calibration sample size per candidate"},
    {"holdout_fraction", "0.10", "share of articles held out for validation"},
    {"fold_accents", "false", "fold accents when matching candidate patterns"},
    {"seed", "", "random seed (required by sampling commands)"},
    {"sample_main", "400", "main evaluation articles"},
    {"sample_double", "100", "double-coded articles"},
    {"sample_extension", "100", "extension articles per annotator"},
    {"main_question_share", "0.5", "share of question-containing articles in the main set"},
    {"annotators", "A,B", "the two annotator ids"},
    {"spot_answered", "40", "spot-check groups predicted answered"},
    {"spot_unanswered", "10", "spot-check groups predicted unanswered"},
    {"out", "out", "output directory"},
    {"threads", "1", "worker threads"},
    {"lenient", "false", "skip malformed input lines instead of failing"},
    {"label_batch", "32", "student label batch size"},
    {"teacher_batch", "8", "teacher label batch size"},
    {"embed_batch", "64", "embedding batch size"},
    {"ner_batch", "16", "entity batch size"},
    {"max_in_flight", "4", "concurrent provider requests per client"},
    {"store", "", "annotation store directory (default <out>/annotation)"},
    {"serve_addr", "127.0.0.1:8080", "annotation server address host:port"},
    {"static_dir", "", "static files served next to the annotation API"},
};

#undef QS_ASSET

std::string Trim(std::string_view s) { return std::string(utf8::Trim(s)); }

bool IsKnown(const std::string &key) {
  return std::any_of(kKeys.begin(), kKeys.end(),
                     [&](const ConfigKey &k) { return k.name == key; });
}

double ParseDouble(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && std::isfinite(v)) return v;
  } catch (const std::exception &) {
  }
  throw ConfigError(key + ": expected a number, got \"" + value + "\"");
}

long long ParseInteger(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception &) {
  }
  throw ConfigError(key + ": expected an integer, got \"" + value + "\"");
}

bool ParseBool(const std::string &key, const std::string &value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got \"" + value + "\"");
}

void CheckRange(const std::string &key, double v, double lo, double hi, bool lo_open = false) {
  if ((lo_open ? v <= lo : v < lo) || v > hi) {
    throw ConfigError(key + " = " + FormatFixed(v, 4) + " is outside " + (lo_open ? "(" : "[") +
                      FormatFixed(lo, 2) + ", " + FormatFixed(hi, 2) + "]");
  }
}

int IntInRange(const ConfigValues &values, const std::string &key, long long lo, long long hi) {
  const long long v = ParseInteger(key, values.Get(key));
  if (v < lo || v > hi) {
    throw ConfigError(key + " = " + std::to_string(v) + " is outside [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

}  // namespace

const std::vector<ConfigKey> &ConfigKeys() { return kKeys; }

ConfigValues::ConfigValues() {
  for (const auto &k : kKeys) {
    values_[std::string(k.name)] = {std::string(k.default_value), "default"};
  }
}

void ConfigValues::Set(const std::string &key, const std::string &value,
                       std::string_view origin) {
  if (!IsKnown(key)) throw ConfigError("unknown config key \"" + key + "\"");
  values_[key] = {value, std::string(origin)};
}

void ConfigValues::MergeText(std::string_view text, std::string_view origin) {
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = std::min(text.find('\n', pos), text.size());
    const std::string line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (!IsKnown(key)) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) +
                        ": unknown config key \"" + key + "\"");
    }
    values_[key] = {value, std::string(origin)};
    if (end == text.size()) break;
  }
}

void ConfigValues::MergeFile(const std::string &path) {
  if (!FileExists(path)) throw ConfigError("config file not found: " + path);
  MergeText(ReadFile(path), path);
}

void ConfigValues::MergeEnvironment(const std::function<const char *(const char *)> &getenv) {
  for (const auto &k : kKeys) {
    std::string name = "QS_";
    for (char c : k.name) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (const char *v = getenv(name.c_str()); v != nullptr) {
      values_[std::string(k.name)] = {v, "env"};
    }
  }
}

const std::string &ConfigValues::Get(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key \"" + key + "\"");
  return it->second.first;
}

const std::string &ConfigValues::Origin(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key \"" + key + "\"");
  return it->second.second;
}

PipelineConfig PipelineConfig::Resolve(const ConfigValues &v) {
  PipelineConfig c;
  c.articles = v.Get("articles");
  c.ontology = v.Get("ontology");
  c.meta_topics = v.Get("meta_topics");
  c.rules = v.Get("rules");
  c.quote_markers = v.Get("quote_markers");
  c.gold = v.Get("gold");
  c.vectors = v.Get("vectors");
  c.spot_check_audited = v.Get("spot_check_audited");
  c.teacher_url = v.Get("teacher_url");
  c.student_url = v.Get("student_url");
  c.binary_url = v.Get("binary_url").empty() ? c.student_url : v.Get("binary_url");
  c.stance_url = v.Get("stance_url").empty() ? c.student_url : v.Get("stance_url");
  c.embed_url = v.Get("embed_url");
  c.ner_url = v.Get("ner_url");
  c.cassette = v.Get("cassette");
  c.record = ParseBool("record", v.Get("record"));

  auto unit = [&](const char *key, bool lo_open) {
    const double x = ParseDouble(key, v.Get(key));
    CheckRange(key, x, 0.0, 1.0, lo_open);
    return x;
  };
  c.teacher_keep = unit("teacher_keep", true);
  c.binary_gate = unit("binary_gate", false);
  c.stance_gate = unit("stance_gate", false);
  c.similarity = ParseDouble("similarity", v.Get("similarity"));
  CheckRange("similarity", c.similarity, -1.0, 1.0);
  c.horizon = IntInRange(v, "horizon", 1, 1000);
  c.window_lengths.clear();
  {
    std::string rest = v.Get("window_lengths");
    size_t pos = 0;
    while (pos <= rest.size()) {
      const size_t comma = std::min(rest.find(',', pos), rest.size());
      const std::string item = Trim(std::string_view(rest).substr(pos, comma - pos));
      const long long n = ParseInteger("window_lengths", item);
      if (n < 1 || n > 1000) throw ConfigError("window_lengths entries must be positive");
      c.window_lengths.push_back(static_cast<int>(n));
      pos = comma + 1;
      if (comma == rest.size()) break;
    }
  }
  c.ner_threshold = unit("ner_threshold", false);
  c.calibration_fraction = ParseDouble("calibration_fraction", v.Get("calibration_fraction"));
  CheckRange("calibration_fraction", c.calibration_fraction, 0.0, 10.0);
  c.holdout_fraction = ParseDouble("holdout_fraction", v.Get("holdout_fraction"));
  CheckRange("holdout_fraction", c.holdout_fraction, 0.0, 0.9);
  c.fold_accents = ParseBool("fold_accents", v.Get("fold_accents"));

  if (!v.Get("seed").empty()) {
    const std::string &s = v.Get("seed");
    if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 20) {
      throw ConfigError("seed must be a non-negative integer, got \"" + s + "\"");
    }
    try {
      c.seed = std::stoull(s);
    } catch (const std::exception &) {
      throw ConfigError("seed out of range: " + s);
    }
  }
  c.sample_main = IntInRange(v, "sample_main", 0, 1000000);
  c.sample_double = IntInRange(v, "sample_double", 0, 1000000);
  c.sample_extension = IntInRange(v, "sample_extension", 0, 1000000);
  for (const auto &[key, value] : {std::pair<const char *, int>{"sample_main", c.sample_main},
                                    {"sample_double", c.sample_double},
                                    {"sample_extension", c.sample_extension}}) {
    // Each role is split evenly between the local and national halves.
    if (value % 2 != 0) throw ConfigError(std::string(key) + " must be even");
  }
  c.main_question_share = unit("main_question_share", false);
  {
    const std::string &a = v.Get("annotators");
    const size_t comma = a.find(',');
    if (comma == std::string::npos || a.find(',', comma + 1) != std::string::npos) {
      throw ConfigError("annotators must name exactly two ids, e.g. \"A,B\"");
    }
    c.annotator_a = Trim(std::string_view(a).substr(0, comma));
    c.annotator_b = Trim(std::string_view(a).substr(comma + 1));
    if (c.annotator_a.empty() || c.annotator_b.empty() || c.annotator_a == c.annotator_b) {
      throw ConfigError("annotators must be two distinct non-empty ids");
    }
  }
  c.spot_answered = IntInRange(v, "spot_answered", 0, 1000000);
  c.spot_unanswered = IntInRange(v, "spot_unanswered", 0, 1000000);

  c.out = v.Get("out");
  if (c.out.empty()) throw ConfigError("out must not be empty");
  c.threads = IntInRange(v, "threads", 1, 256);
  c.lenient = ParseBool("lenient", v.Get("lenient"));
  c.label_batch = IntInRange(v, "label_batch", 1, 100000);
  c.teacher_batch = IntInRange(v, "teacher_batch", 1, 100000);
  c.embed_batch = IntInRange(v, "embed_batch", 1, 100000);
  c.ner_batch = IntInRange(v, "ner_batch", 1, 100000);
  c.max_in_flight = IntInRange(v, "max_in_flight", 1, 256);
  c.store = v.Get("store");
  c.serve_addr = v.Get("serve_addr");
  c.static_dir = v.Get("static_dir");
  return c;
}

uint64_t PipelineConfig::RequireSeed(std::string_view command) const {
  if (!seed) {
    throw ConfigError(std::string(command) +
                      " samples at random and needs a seed (--seed, seed = ..., or QS_SEED)");
  }
  return *seed;
}

std::string PipelineConfig::StoreDir() const {
  return store.empty() ? OutPath("annotation") : store;
}

std::string PipelineConfig::CassetteFor(const std::string &role) const {
  return cassette.empty() ? "" : JoinPath(cassette, role + ".jsonl");
}

Json PipelineConfig::ToJson() const {
  Json windows = window_lengths;
  return Json{{"articles", articles},
              {"ontology", ontology},
              {"meta_topics", meta_topics},
              {"rules", rules},
              {"quote_markers", quote_markers},
              {"gold", gold},
              {"vectors", vectors},
              {"spot_check_audited", spot_check_audited},
              {"teacher_url", teacher_url},
              {"student_url", student_url},
              {"binary_url", binary_url},
              {"stance_url", stance_url},
              {"embed_url", embed_url},
              {"ner_url", ner_url},
              {"cassette", cassette},
              {"record", record},
              {"teacher_keep", teacher_keep},
              {"binary_gate", binary_gate},
              {"stance_gate", stance_gate},
              {"similarity", similarity},
              {"horizon", horizon},
              {"window_lengths", windows},
              {"ner_threshold", ner_threshold},
              {"calibration_fraction", calibration_fraction},
              {"holdout_fraction", holdout_fraction},
              {"fold_accents", fold_accents},
              {"seed", seed ? Json(*seed) : Json(nullptr)},
              {"sample_main", sample_main},
              {"sample_double", sample_double},
              {"sample_extension", sample_extension},
              {"main_question_share", main_question_share},
              {"annotators", Json{annotator_a, annotator_b}},
              {"spot_answered", spot_answered},
              {"spot_unanswered", spot_unanswered},
              {"out", out},
              {"threads", threads},
              {"lenient", lenient},
              {"label_batch", label_batch},
              {"teacher_batch", teacher_batch},
              {"embed_batch", embed_batch},
              {"ner_batch", ner_batch},
              {"max_in_flight", max_in_flight},
              {"store", store},
              {"serve_addr", serve_addr},
              {"static_dir", static_dir}};
}

}  // namespace qstance::cli
