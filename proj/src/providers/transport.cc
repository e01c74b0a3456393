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

#include "qstance/providers/transport.h"

#include <algorithm>
#include <chrono>
#include <thread>

#include "httplib.h"
#include "qstance/providers/mock.h"
#include "qstance/util/errors.h"
#include "qstance/util/logging.h"

namespace qstance::providers {

HttpTransport::HttpTransport(std::string base_url, RetryPolicy policy)
    : policy_(policy) {
  const size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("provider URL needs a scheme: " + base_url);
  }
  const size_t path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = base_url;
  } else {
    scheme_host_port_ = base_url.substr(0, path_start);
    path_prefix_ = base_url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

Json HttpTransport::Post(const std::string &endpoint, const Json &body) {
  const std::string path = path_prefix_ + endpoint;
  const std::string payload = body.dump();
  std::string last_error;
  int backoff = policy_.initial_backoff_ms;
  for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(policy_.timeout_seconds, 0);
    client.set_read_timeout(policy_.timeout_seconds, 0);
    client.set_write_timeout(policy_.timeout_seconds, 0);
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      try {
        return Json::parse(res->body);
      } catch (const Json::parse_error &) {
        throw ProviderError(scheme_host_port_ + path + " returned a non-JSON body");
      }
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      throw ProviderError(scheme_host_port_ + path + " answered HTTP " +
                          std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    if (attempt < policy_.max_attempts) {
      LogWarning(scheme_host_port_ + path + ": " + last_error + ", retrying");
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff = std::min(backoff * 2, policy_.max_backoff_ms);
    }
  }
  throw ProviderError(scheme_host_port_ + path + " unreachable after " +
                      std::to_string(policy_.max_attempts) + " attempts: " + last_error);
}

std::string Cassette::Key(const std::string &endpoint, const Json &request) {
  return endpoint + "\n" + request.dump();
}

Cassette Cassette::Load(const std::string &path) {
  Cassette cassette;
  for (const Json &row : ReadJsonLines(path)) {
    if (!row.contains("endpoint") || !row.contains("request") || !row.contains("response")) {
      throw DataError("cassette entry without endpoint/request/response in " + path);
    }
    cassette.Put(row["endpoint"].get<std::string>(), row["request"], row["response"]);
  }
  return cassette;
}

const Json *Cassette::Find(const std::string &endpoint, const Json &request) const {
  auto it = entries_.find(Key(endpoint, request));
  return it == entries_.end() ? nullptr : &it->second.response;
}

void Cassette::Put(const std::string &endpoint, const Json &request, const Json &response) {
  entries_[Key(endpoint, request)] = Entry{endpoint, request, response};
}

void Cassette::Save(const std::string &path) const {
  std::vector<Json> rows;
  rows.reserve(entries_.size());
  for (const auto &[key, e] : entries_) {
    rows.push_back(Json{{"endpoint", e.endpoint}, {"request", e.request}, {"response", e.response}});
  }
  WriteJsonLines(path, rows);
}

Json ReplayTransport::Post(const std::string &endpoint, const Json &body) {
  if (const Json *response = cassette_.Find(endpoint, body)) return *response;
  throw ProviderError("cassette has no recorded response for " + endpoint + " request (" +
                      std::to_string(body.dump().size()) + " bytes)");
}

RecordingTransport::RecordingTransport(std::shared_ptr<JsonTransport> inner, std::string path)
    : inner_(std::move(inner)), path_(std::move(path)) {
  if (FileExists(path_)) cassette_ = Cassette::Load(path_);
}

RecordingTransport::~RecordingTransport() {
  try {
    Save();
  } catch (const std::exception &e) {
    LogWarning(std::string("failed to save cassette: ") + e.what());
  }
}

Json RecordingTransport::Post(const std::string &endpoint, const Json &body) {
  Json response = inner_->Post(endpoint, body);
  std::lock_guard<std::mutex> lock(mutex_);
  cassette_.Put(endpoint, body, response);
  return response;
}

void RecordingTransport::Save() {
  std::lock_guard<std::mutex> lock(mutex_);
  cassette_.Save(path_);
}

std::shared_ptr<JsonTransport> MakeTransport(const std::string &address,
                                             const std::string &cassette_path, bool record,
                                             RetryPolicy policy) {
  if (!cassette_path.empty() && !record) {
    if (!FileExists(cassette_path)) {
      throw ConfigError("cassette not found: " + cassette_path);
    }
    return std::make_shared<ReplayTransport>(Cassette::Load(cassette_path));
  }
  std::shared_ptr<JsonTransport> live;
  if (address == "mock" || address == "mock:student") {
    live = std::make_shared<MockTransport>(MockFlavor::kStudent);
  } else if (address == "mock:teacher") {
    live = std::make_shared<MockTransport>(MockFlavor::kTeacher);
  } else if (address.rfind("http://", 0) == 0) {
    live = std::make_shared<HttpTransport>(address, policy);
  } else if (address.rfind("https://", 0) == 0) {
    // The HTTP client is built without TLS support.
    throw ConfigError("https provider addresses are not supported (" + address +
                      "); use an http endpoint or a local TLS-terminating proxy");
  } else if (address.empty()) {
    throw ConfigError("no provider address configured");
  } else {
    throw ConfigError("unsupported provider address: " + address);
  }
  if (!cassette_path.empty()) {
    return std::make_shared<RecordingTransport>(std::move(live), cassette_path);
  }
  return live;
}

}  // namespace qstance::providers
