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

// Backend of the annotation workflow. Tasks come from the sampling
// manifest (one task per sampled article). Annotators pull their next
// task, read the article with model pre-labels as suggestions, and save
// their units under optimistic versioning. Units of a double-coded task
// stay hidden from the other annotator until both have completed it.
//
// State lives in a store directory holding `units.jsonl` (gold units, the
// same format the evaluation reads) and `sessions.jsonl` (per task and
// annotator: status and version). Every successful save rewrites both
// files atomically.

#ifndef QSTANCE_ANNOTATE_SERVICE_H_
#define QSTANCE_ANNOTATE_SERVICE_H_

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "qstance/corpus/types.h"
#include "qstance/stance/labels.h"
#include "qstance/triangulate/agreement.h"
#include "qstance/triangulate/gold.h"
#include "qstance/triangulate/sample.h"
#include "qstance/util/io.h"

namespace qstance::annotate {

enum class TaskStatus { kPending, kInProgress, kComplete };

std::string_view ToString(TaskStatus status);
std::optional<TaskStatus> ParseTaskStatus(std::string_view text);

// One annotator's progress on one task.
struct Session {
  std::string task_id;
  std::string article_id;
  std::string annotator_id;
  TaskStatus status = TaskStatus::kPending;
  // Version of the saved unit set; 1 before the first save.
  int version = 1;

  Json ToJson() const;
  static Session FromJson(const Json &j);
};

// Article text, sentence offsets and model predictions for display.
struct ArticleView {
  corpus::ArticleRecord article;
  std::vector<corpus::SentenceRecord> sentences;
  std::vector<stance::Prediction> prelabels;
};

// Response of a service call: an HTTP status code and a JSON body.
struct ApiResult {
  int status = 200;
  Json body;
};

inline constexpr char kUnitsFile[] = "units.jsonl";
inline constexpr char kSessionsFile[] = "sessions.jsonl";

std::string TaskId(const triangulate::SampleItem &item);

// Articles of double-coded tasks that every assigned annotator completed.
std::vector<std::string> CompletedDoubleCoded(const std::vector<triangulate::SampleItem> &manifest,
                                              const std::vector<Session> &sessions);

// Annotator ids of the double-coded role, in manifest order; nullopt
// without double-coded tasks.
std::optional<std::pair<std::string, std::string>> DoubleCodingPair(
    const std::vector<triangulate::SampleItem> &manifest);

std::vector<Session> ReadSessions(const std::string &path);

// Agreement payload over the store contents: status "ok" with the report,
// or "insufficient_data" when no double-coded task is complete. `partial`
// is true while double-coded tasks remain open.
Json AgreementPayload(const std::vector<triangulate::SampleItem> &manifest,
                      const std::vector<triangulate::GoldUnit> &units,
                      const std::vector<Session> &sessions);

class AnnotationService {
 public:
  // Loads existing state from `store_dir` (created if missing). Every
  // manifest article needs an entry in `articles` (DataError otherwise).
  AnnotationService(std::vector<triangulate::SampleItem> manifest,
                    std::map<std::string, ArticleView> articles, std::string store_dir);

  // 200 {"status": "assigned", "task": ...} with the lowest-ordinal task of
  // this annotator that is not complete (marked in-progress), or
  // 200 {"status": "done"}. 404 for annotators without any task.
  ApiResult NextTask(const std::string &annotator);

  // 200 with text, sentence offsets, pre-labels, the caller's task state
  // and units. The other annotator's units are included only once every
  // annotator of the task has completed it. 403 when the article is not
  // assigned to the caller, 404 when unknown.
  ApiResult GetArticle(const std::string &article_id, const std::string &annotator) const;

  // Body: {"annotator", "base_version", "units": [...], "complete": bool}.
  // Replaces the annotator's units for the task. 200 {"version"} on success;
  // 409 on a stale base_version or a task that is not in progress;
  // 422 with field errors for invalid units; 403 / 404 as above.
  ApiResult SaveUnits(const std::string &task_id, const Json &body);

  // Units of `owner` on a task as seen by `requester`: 403 while blinded.
  ApiResult GetUnits(const std::string &task_id, const std::string &requester,
                     const std::string &owner) const;

  ApiResult Agreement() const;
  ApiResult Progress() const;

  const std::string &store_dir() const { return store_dir_; }

 private:
  struct Task {
    triangulate::SampleItem item;
    std::string task_id;
    std::map<std::string, Session> sessions;  // by annotator
    TaskStatus status() const;
  };

  Json TaskJson(const Task &task, const std::string &annotator) const;
  std::vector<triangulate::GoldUnit> UnitsOf(const std::string &article_id,
                                             const std::string &annotator) const;
  bool Blinded(const Task &task) const;
  std::vector<Session> AllSessions() const;
  void Persist() const;

  std::vector<Task> tasks_;  // manifest order
  std::map<std::string, size_t> task_by_id_;
  std::map<std::string, size_t> task_by_article_;
  std::map<std::string, ArticleView> articles_;
  std::vector<triangulate::GoldUnit> units_;
  std::string store_dir_;
  mutable std::shared_mutex mutex_;
};

}  // namespace qstance::annotate

#endif  // QSTANCE_ANNOTATE_SERVICE_H_
