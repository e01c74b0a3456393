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

// JSON-over-HTTP transport used by every model provider (labels,
// embeddings, entities). Providers speak a small wire protocol:
//
//   POST /v1/label/binary  {"items":[{"context_text":s}]}
//                       -> {"results":[{"is_interrogative":b,"confidence":x}]}
//   POST /v1/label/stance  {"items":[{"context_text":s}]}
//                       -> {"results":[{"label":s,"confidence":x}]}
//   POST /v1/embed         {"texts":[s]} -> {"dim":n,"vectors":[[x]]}
//   POST /v1/ner           {"items":[{"text":s,"labels":[s]}]}
//                       -> {"results":[[{"text","label","score","start","end"}]]}
//
// Transports are shared across worker threads and must be thread-safe.

#ifndef QSTANCE_PROVIDERS_TRANSPORT_H_
#define QSTANCE_PROVIDERS_TRANSPORT_H_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "qstance/util/io.h"

namespace qstance::providers {

inline constexpr char kBinaryEndpoint[] = "/v1/label/binary";
inline constexpr char kStanceEndpoint[] = "/v1/label/stance";
inline constexpr char kEmbedEndpoint[] = "/v1/embed";
inline constexpr char kNerEndpoint[] = "/v1/ner";

class JsonTransport {
 public:
  virtual ~JsonTransport() = default;
  // Throws ProviderError when the provider cannot be reached or answers
  // with something that is not a JSON document.
  virtual Json Post(const std::string &endpoint, const Json &body) = 0;
};

struct RetryPolicy {
  int max_attempts = 4;
  int initial_backoff_ms = 200;
  int max_backoff_ms = 3000;
  int timeout_seconds = 120;
};

// Plain HTTP client. Connection failures, 429 and 5xx are retried with
// exponential backoff; other non-2xx statuses fail immediately.
class HttpTransport : public JsonTransport {
 public:
  explicit HttpTransport(std::string base_url, RetryPolicy policy = {});
  Json Post(const std::string &endpoint, const Json &body) override;

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  RetryPolicy policy_;
};

// Adapter for tests and in-process fakes.
class FunctionTransport : public JsonTransport {
 public:
  using Handler = std::function<Json(const std::string &, const Json &)>;
  explicit FunctionTransport(Handler handler) : handler_(std::move(handler)) {}
  Json Post(const std::string &endpoint, const Json &body) override {
    return handler_(endpoint, body);
  }

 private:
  Handler handler_;
};

// Recorded request/response transcript. One JSON object per line:
//   {"endpoint":s,"request":{...},"response":{...}}
// Replay looks requests up by (endpoint, canonical request body); a miss
// is a ProviderError, so replayed runs never touch the network.
class Cassette {
 public:
  static Cassette Load(const std::string &path);

  const Json *Find(const std::string &endpoint, const Json &request) const;
  void Put(const std::string &endpoint, const Json &request, const Json &response);
  // Entries sorted by key, so the file does not depend on request timing.
  void Save(const std::string &path) const;
  size_t size() const { return entries_.size(); }

 private:
  static std::string Key(const std::string &endpoint, const Json &request);

  struct Entry {
    std::string endpoint;
    Json request;
    Json response;
  };
  std::map<std::string, Entry> entries_;
};

class ReplayTransport : public JsonTransport {
 public:
  explicit ReplayTransport(Cassette cassette) : cassette_(std::move(cassette)) {}
  Json Post(const std::string &endpoint, const Json &body) override;

 private:
  Cassette cassette_;
};

// Forwards to `inner` and records every exchange; writes the cassette on
// Save() or destruction.
class RecordingTransport : public JsonTransport {
 public:
  RecordingTransport(std::shared_ptr<JsonTransport> inner, std::string path);
  ~RecordingTransport() override;
  Json Post(const std::string &endpoint, const Json &body) override;
  void Save();

 private:
  std::shared_ptr<JsonTransport> inner_;
  std::string path_;
  std::mutex mutex_;
  Cassette cassette_;
};

// Builds a transport from a provider address:
//   "mock" / "mock:teacher" / "mock:student"  bundled deterministic mock
//   "http://host:port[/prefix]"               HttpTransport
// With a cassette path: replay from it when `record` is false, otherwise
// record the live exchanges into it.
std::shared_ptr<JsonTransport> MakeTransport(const std::string &address,
                                             const std::string &cassette_path = "",
                                             bool record = false,
                                             RetryPolicy policy = {});

}  // namespace qstance::providers

#endif  // QSTANCE_PROVIDERS_TRANSPORT_H_
