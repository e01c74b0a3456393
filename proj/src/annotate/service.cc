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

#include "qstance/annotate/service.h"

#include <algorithm>
#include <mutex>
#include <set>
#include <tuple>

#include "qstance/util/errors.h"
#include "qstance/util/logging.h"
#include "qstance/util/utf8.h"

namespace qstance::annotate {

namespace {

using triangulate::GoldUnit;
using triangulate::SampleItem;
using triangulate::SampleRole;

ApiResult Error(int status, const std::string &code, const std::string &message) {
  return ApiResult{status, Json{{"error", code}, {"message", message}}};
}

bool UnitOrder(const GoldUnit &x, const GoldUnit &y) {
  return std::tie(x.article_id, x.annotator_id, x.start, x.end, x.unit_id) <
         std::tie(y.article_id, y.annotator_id, y.start, y.end, y.unit_id);
}

bool Assigned(const SampleItem &item, const std::string &annotator) {
  return std::find(item.annotators.begin(), item.annotators.end(), annotator) !=
         item.annotators.end();
}

}  // namespace

std::string_view ToString(TaskStatus status) {
  switch (status) {
    case TaskStatus::kPending:
      return "pending";
    case TaskStatus::kInProgress:
      return "in-progress";
    case TaskStatus::kComplete:
      return "complete";
  }
  return "";
}

std::optional<TaskStatus> ParseTaskStatus(std::string_view text) {
  for (TaskStatus s : {TaskStatus::kPending, TaskStatus::kInProgress, TaskStatus::kComplete}) {
    if (text == ToString(s)) return s;
  }
  return std::nullopt;
}

Json Session::ToJson() const {
  return Json{{"task_id", task_id},
              {"article_id", article_id},
              {"annotator_id", annotator_id},
              {"status", std::string(annotate::ToString(status))},
              {"version", version}};
}

Session Session::FromJson(const Json &j) {
  Session s;
  try {
    s.task_id = j.at("task_id").get<std::string>();
    s.article_id = j.at("article_id").get<std::string>();
    s.annotator_id = j.at("annotator_id").get<std::string>();
    s.version = j.at("version").get<int>();
    const auto status = ParseTaskStatus(j.at("status").get<std::string>());
    if (!status) throw DataError("unknown session status " + j.at("status").dump());
    s.status = *status;
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed session record: ") + e.what());
  }
  if (s.version < 1) throw DataError("session version must be positive");
  return s;
}

std::string TaskId(const SampleItem &item) { return "t" + std::to_string(item.ordinal); }

std::vector<std::string> CompletedDoubleCoded(const std::vector<SampleItem> &manifest,
                                              const std::vector<Session> &sessions) {
  std::set<std::pair<std::string, std::string>> complete;
  for (const auto &s : sessions) {
    if (s.status == TaskStatus::kComplete) complete.insert({s.article_id, s.annotator_id});
  }
  std::vector<std::string> out;
  for (const auto &item : manifest) {
    if (item.role != SampleRole::kDouble) continue;
    const bool all = std::all_of(item.annotators.begin(), item.annotators.end(),
                                 [&](const std::string &a) {
                                   return complete.count({item.article_id, a}) > 0;
                                 });
    if (all) out.push_back(item.article_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::pair<std::string, std::string>> DoubleCodingPair(
    const std::vector<SampleItem> &manifest) {
  for (const auto &item : manifest) {
    if (item.role == SampleRole::kDouble && item.annotators.size() == 2) {
      return std::make_pair(item.annotators[0], item.annotators[1]);
    }
  }
  return std::nullopt;
}

std::vector<Session> ReadSessions(const std::string &path) {
  std::vector<Session> sessions;
  for (const Json &row : ReadJsonLines(path)) sessions.push_back(Session::FromJson(row));
  return sessions;
}

Json AgreementPayload(const std::vector<SampleItem> &manifest,
                      const std::vector<GoldUnit> &units, const std::vector<Session> &sessions) {
  const auto pair = DoubleCodingPair(manifest);
  const auto complete = CompletedDoubleCoded(manifest, sessions);
  size_t n_double = 0;
  for (const auto &item : manifest) n_double += item.role == SampleRole::kDouble;
  Json payload{{"double_coded_tasks", n_double},
               {"complete_double_coded_tasks", complete.size()},
               {"partial", complete.size() < n_double}};
  if (!pair || complete.empty()) {
    payload["status"] = "insufficient_data";
    payload["message"] = "no double-coded task has been completed by both annotators";
    return payload;
  }
  payload["status"] = "ok";
  payload["report"] =
      triangulate::ComputeAgreement(units, complete, pair->first, pair->second).ToJson();
  return payload;
}

TaskStatus AnnotationService::Task::status() const {
  bool any_started = false;
  bool all_complete = true;
  for (const auto &[annotator, s] : sessions) {
    any_started |= s.status != TaskStatus::kPending;
    all_complete &= s.status == TaskStatus::kComplete;
  }
  if (all_complete) return TaskStatus::kComplete;
  return any_started ? TaskStatus::kInProgress : TaskStatus::kPending;
}

AnnotationService::AnnotationService(std::vector<SampleItem> manifest,
                                     std::map<std::string, ArticleView> articles,
                                     std::string store_dir)
    : articles_(std::move(articles)), store_dir_(std::move(store_dir)) {
  std::sort(manifest.begin(), manifest.end(),
            [](const SampleItem &a, const SampleItem &b) { return a.ordinal < b.ordinal; });
  for (auto &item : manifest) {
    if (articles_.find(item.article_id) == articles_.end()) {
      throw DataError("manifest article " + item.article_id + " has no article data");
    }
    if (item.role == SampleRole::kDouble && item.annotators.size() != 2) {
      throw DataError("double-coded task " + item.article_id + " needs exactly 2 annotators");
    }
    if (item.annotators.empty() || item.annotators.size() > 2) {
      throw DataError("task " + item.article_id + " needs 1 or 2 annotators");
    }
    Task task;
    task.task_id = TaskId(item);
    for (const auto &a : item.annotators) {
      task.sessions[a] = Session{task.task_id, item.article_id, a, TaskStatus::kPending, 1};
    }
    task.item = std::move(item);
    if (!task_by_id_.emplace(task.task_id, tasks_.size()).second ||
        !task_by_article_.emplace(task.item.article_id, tasks_.size()).second) {
      throw DataError("duplicate task for article " + task.item.article_id);
    }
    tasks_.push_back(std::move(task));
  }

  EnsureDirectory(store_dir_);
  const std::string sessions_path = JoinPath(store_dir_, kSessionsFile);
  if (FileExists(sessions_path)) {
    for (const auto &s : ReadSessions(sessions_path)) {
      auto it = task_by_id_.find(s.task_id);
      if (it == task_by_id_.end() || tasks_[it->second].item.article_id != s.article_id ||
          !tasks_[it->second].sessions.count(s.annotator_id)) {
        throw DataError("stored session " + s.task_id + "/" + s.annotator_id +
                        " does not match the manifest");
      }
      tasks_[it->second].sessions[s.annotator_id] = s;
    }
  }
  const std::string units_path = JoinPath(store_dir_, kUnitsFile);
  if (FileExists(units_path)) {
    units_ = triangulate::ReadGoldUnits(units_path);
    std::sort(units_.begin(), units_.end(), UnitOrder);
  }
}

Json AnnotationService::TaskJson(const Task &task, const std::string &annotator) const {
  Json j{{"task_id", task.task_id},
         {"ordinal", task.item.ordinal},
         {"article_id", task.item.article_id},
         {"role", std::string(triangulate::ToString(task.item.role))},
         {"annotators", task.item.annotators},
         {"status", std::string(ToString(task.status()))}};
  if (auto it = task.sessions.find(annotator); it != task.sessions.end()) {
    j["annotator_status"] = std::string(ToString(it->second.status));
    j["version"] = it->second.version;
  }
  return j;
}

std::vector<GoldUnit> AnnotationService::UnitsOf(const std::string &article_id,
                                                 const std::string &annotator) const {
  std::vector<GoldUnit> out;
  for (const auto &u : units_) {
    if (u.article_id == article_id && u.annotator_id == annotator) out.push_back(u);
  }
  return out;
}

bool AnnotationService::Blinded(const Task &task) const {
  return task.item.annotators.size() > 1 && task.status() != TaskStatus::kComplete;
}

std::vector<Session> AnnotationService::AllSessions() const {
  std::vector<Session> out;
  for (const auto &t : tasks_) {
    for (const auto &[a, s] : t.sessions) out.push_back(s);
  }
  return out;
}

void AnnotationService::Persist() const {
  std::vector<Json> sessions;
  for (const auto &s : AllSessions()) {
    if (s.status != TaskStatus::kPending || s.version != 1) sessions.push_back(s.ToJson());
  }
  triangulate::WriteGoldUnits(JoinPath(store_dir_, kUnitsFile), units_);
  WriteJsonLines(JoinPath(store_dir_, kSessionsFile), sessions);
}

ApiResult AnnotationService::NextTask(const std::string &annotator) {
  std::unique_lock lock(mutex_);
  bool known = false;
  for (auto &task : tasks_) {
    auto it = task.sessions.find(annotator);
    if (it == task.sessions.end()) continue;
    known = true;
    Session &s = it->second;
    if (s.status == TaskStatus::kComplete) continue;
    if (s.status == TaskStatus::kPending) {
      s.status = TaskStatus::kInProgress;
      Persist();
    }
    return ApiResult{200, Json{{"status", "assigned"}, {"task", TaskJson(task, annotator)}}};
  }
  if (!known) return Error(404, "unknown_annotator", "no tasks are assigned to " + annotator);
  return ApiResult{200, Json{{"status", "done"}, {"annotator", annotator}}};
}

ApiResult AnnotationService::GetArticle(const std::string &article_id,
                                        const std::string &annotator) const {
  std::shared_lock lock(mutex_);
  auto it = task_by_article_.find(article_id);
  if (it == task_by_article_.end()) {
    return Error(404, "unknown_article", "article " + article_id + " is not in the sample");
  }
  const Task &task = tasks_[it->second];
  if (!Assigned(task.item, annotator)) {
    return Error(403, "not_assigned", "article " + article_id + " is not assigned to " +
                                          (annotator.empty() ? "(no annotator)" : annotator));
  }
  const ArticleView &view = articles_.at(article_id);
  Json sentences = Json::array();
  for (const auto &s : view.sentences) {
    sentences.push_back(Json{{"sent_id", s.sent_id}, {"start", s.start}, {"end", s.end}});
  }
  Json prelabels = Json::array();
  for (const auto &p : view.prelabels) prelabels.push_back(p.ToJson());
  Json units = Json::array();
  for (const auto &u : UnitsOf(article_id, annotator)) units.push_back(u.ToJson());
  Json body{{"article_id", article_id},
            {"source", view.article.source},
            {"title", view.article.title ? Json(*view.article.title) : Json(nullptr)},
            {"text", view.article.text},
            {"sentences", sentences},
            {"prelabels", prelabels},
            {"task", TaskJson(task, annotator)},
            {"units", units}};
  if (task.item.annotators.size() > 1 && !Blinded(task)) {
    Json others = Json::object();
    for (const auto &a : task.item.annotators) {
      if (a == annotator) continue;
      Json list = Json::array();
      for (const auto &u : UnitsOf(article_id, a)) list.push_back(u.ToJson());
      others[a] = list;
    }
    body["other_units"] = others;
  }
  return ApiResult{200, body};
}

ApiResult AnnotationService::SaveUnits(const std::string &task_id, const Json &body) {
  if (!body.is_object() || !body.contains("annotator") || !body["annotator"].is_string() ||
      !body.contains("base_version") || !body["base_version"].is_number_integer() ||
      !body.contains("units") || !body["units"].is_array() ||
      (body.contains("complete") && !body["complete"].is_boolean())) {
    return Error(400, "bad_request",
                 "body needs annotator (string), base_version (integer), units (list) and an "
                 "optional complete (boolean)");
  }
  const std::string annotator = body["annotator"].get<std::string>();
  const int base_version = body["base_version"].get<int>();
  const bool complete = body.value("complete", false);

  std::unique_lock lock(mutex_);
  auto it = task_by_id_.find(task_id);
  if (it == task_by_id_.end()) return Error(404, "unknown_task", "no task " + task_id);
  Task &task = tasks_[it->second];
  auto session_it = task.sessions.find(annotator);
  if (session_it == task.sessions.end()) {
    return Error(403, "not_assigned", "task " + task_id + " is not assigned to " + annotator);
  }
  Session &session = session_it->second;
  if (session.status != TaskStatus::kInProgress) {
    ApiResult r = Error(409, session.status == TaskStatus::kComplete ? "task_complete"
                                                                     : "task_not_started",
                        "task " + task_id + " is " + std::string(ToString(session.status)) +
                            " for " + annotator);
    r.body["current_version"] = session.version;
    return r;
  }
  if (base_version != session.version) {
    ApiResult r = Error(409, "conflict",
                        "stale base_version " + std::to_string(base_version) +
                            "; current version is " + std::to_string(session.version));
    r.body["current_version"] = session.version;
    return r;
  }

  const std::string &article_id = task.item.article_id;
  const std::string &text = articles_.at(article_id).article.text;
  Json errors = Json::array();
  std::vector<GoldUnit> parsed;
  std::set<std::string> unit_ids;
  const auto &drafts = body["units"];
  for (size_t i = 0; i < drafts.size(); ++i) {
    Json draft = drafts[i];
    std::vector<triangulate::FieldError> field_errors;
    if (draft.is_object()) {
      for (const auto &[field, expected] :
           {std::pair<const char *, const std::string *>{"article_id", &article_id},
            {"annotator_id", &annotator}}) {
        if (!draft.contains(field)) {
          draft[field] = *expected;
        } else if (draft[field] != *expected) {
          field_errors.push_back({field, "must be " + *expected});
        }
      }
      if (!draft.contains("unit_id") ||
          (draft["unit_id"].is_string() && draft["unit_id"].get<std::string>().empty())) {
        draft["unit_id"] = article_id + ":" + annotator + ":" + std::to_string(i + 1);
      }
      // The UI may leave the surface text to the server.
      if (!draft.contains("text") && draft.contains("span") && draft["span"].is_object()) {
        const Json &span = draft["span"];
        if (span.contains("start") && span.contains("end") &&
            span["start"].is_number_integer() && span["end"].is_number_integer()) {
          const long start = span["start"].get<long>(), end = span["end"].get<long>();
          if (start >= 0 && end > start && static_cast<size_t>(end) <= utf8::Length(text)) {
            draft["text"] = utf8::Substr(text, static_cast<size_t>(start),
                                         static_cast<size_t>(end));
          }
        }
      }
    }
    auto unit = triangulate::ParseGoldUnit(draft, field_errors, &text);
    if (unit && !unit_ids.insert(unit->unit_id).second) {
      field_errors.push_back({"unit_id", "duplicate unit_id " + unit->unit_id});
    }
    for (const auto &e : field_errors) {
      errors.push_back(Json{{"index", i}, {"field", e.field}, {"message", e.message}});
    }
    if (field_errors.empty() && unit) parsed.push_back(std::move(*unit));
  }
  if (!errors.empty()) {
    return ApiResult{422, Json{{"error", "invalid_units"},
                               {"message", "units violate the coding schema"},
                               {"errors", errors}}};
  }

  units_.erase(std::remove_if(units_.begin(), units_.end(),
                              [&](const GoldUnit &u) {
                                return u.article_id == article_id && u.annotator_id == annotator;
                              }),
               units_.end());
  units_.insert(units_.end(), parsed.begin(), parsed.end());
  std::sort(units_.begin(), units_.end(), UnitOrder);
  ++session.version;
  if (complete) session.status = TaskStatus::kComplete;
  Persist();
  return ApiResult{200, Json{{"task_id", task_id},
                             {"version", session.version},
                             {"n_units", parsed.size()},
                             {"annotator_status", std::string(ToString(session.status))},
                             {"status", std::string(ToString(task.status()))}}};
}

ApiResult AnnotationService::GetUnits(const std::string &task_id, const std::string &requester,
                                      const std::string &owner) const {
  std::shared_lock lock(mutex_);
  auto it = task_by_id_.find(task_id);
  if (it == task_by_id_.end()) return Error(404, "unknown_task", "no task " + task_id);
  const Task &task = tasks_[it->second];
  if (!Assigned(task.item, requester)) {
    return Error(403, "not_assigned", "task " + task_id + " is not assigned to " + requester);
  }
  if (!Assigned(task.item, owner)) {
    return Error(404, "unknown_annotator", owner + " is not assigned to task " + task_id);
  }
  if (requester != owner && Blinded(task)) {
    return Error(403, "blinded",
                 "units of other annotators stay hidden until the task is complete");
  }
  Json units = Json::array();
  for (const auto &u : UnitsOf(task.item.article_id, owner)) units.push_back(u.ToJson());
  return ApiResult{200, Json{{"task_id", task_id},
                             {"annotator", owner},
                             {"version", task.sessions.at(owner).version},
                             {"units", units}}};
}

ApiResult AnnotationService::Agreement() const {
  std::shared_lock lock(mutex_);
  return ApiResult{200, AgreementPayload([this] {
                     std::vector<SampleItem> manifest;
                     for (const auto &t : tasks_) manifest.push_back(t.item);
                     return manifest;
                   }(),
                                         units_, AllSessions())};
}

ApiResult AnnotationService::Progress() const {
  std::shared_lock lock(mutex_);
  auto counts = [] {
    return Json{{"total", 0}, {"pending", 0}, {"in-progress", 0}, {"complete", 0}};
  };
  auto bump = [](Json &c, TaskStatus s) {
    c["total"] = c["total"].get<int>() + 1;
    const std::string key(ToString(s));
    c[key] = c[key].get<int>() + 1;
  };
  Json tasks = counts();
  Json roles = Json::object();
  Json annotators = Json::object();
  for (const auto &t : tasks_) {
    bump(tasks, t.status());
    const std::string role(triangulate::ToString(t.item.role));
    if (!roles.contains(role)) roles[role] = counts();
    bump(roles[role], t.status());
    for (const auto &[a, s] : t.sessions) {
      if (!annotators.contains(a)) annotators[a] = counts();
      bump(annotators[a], s.status);
    }
  }
  return ApiResult{200, Json{{"tasks", tasks},
                             {"roles", roles},
                             {"annotators", annotators},
                             {"units", units_.size()}}};
}

}  // namespace qstance::annotate
