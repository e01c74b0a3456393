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

// HTTP front end of the annotation service:
//   GET  /api/tasks/next?annotator=ID
//   GET  /api/articles/{id}?annotator=ID
//   POST /api/tasks/{id}/units
//   GET  /api/tasks/{id}/units?annotator=ID&owner=ID
//   GET  /api/agreement
//   GET  /api/progress
// plus static files for the browser bundle.

#ifndef QSTANCE_ANNOTATE_SERVER_H_
#define QSTANCE_ANNOTATE_SERVER_H_

#include <memory>
#include <string>
#include <thread>

#include "qstance/annotate/service.h"

namespace httplib {
class Server;
}

namespace qstance::annotate {

inline constexpr char kDefaultServeAddr[] = "127.0.0.1:8080";

struct ServeAddress {
  std::string host;
  int port = 0;
};

// Parses "host:port" (port 0 picks a free port). ConfigError when malformed.
ServeAddress ParseServeAddress(const std::string &text);

class AnnotationServer {
 public:
  // `static_dir` may be empty (API only).
  AnnotationServer(AnnotationService &service, std::string static_dir = "");
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer &) = delete;
  AnnotationServer &operator=(const AnnotationServer &) = delete;

  // Binds and serves on a background thread; returns the bound port.
  // ConfigError when the address cannot be bound.
  int Start(const ServeAddress &address);
  // Binds and serves on the calling thread until Stop().
  void Run(const ServeAddress &address);
  void Stop();

 private:
  AnnotationService &service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace qstance::annotate

#endif  // QSTANCE_ANNOTATE_SERVER_H_
