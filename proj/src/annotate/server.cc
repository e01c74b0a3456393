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

#include "qstance/annotate/server.h"

#include <httplib.h>

#include "qstance/util/errors.h"
#include "qstance/util/logging.h"

namespace qstance::annotate {

namespace {

void Reply(httplib::Response &res, const ApiResult &result) {
  res.status = result.status;
  res.set_content(result.body.dump(), "application/json");
}

void BadRequest(httplib::Response &res, const std::string &message) {
  Reply(res, ApiResult{400, Json{{"error", "bad_request"}, {"message", message}}});
}

}  // namespace

ServeAddress ParseServeAddress(const std::string &text) {
  const size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw ConfigError("serve address must look like host:port, got \"" + text + "\"");
  }
  ServeAddress address;
  address.host = text.substr(0, colon);
  try {
    size_t used = 0;
    address.port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception &) {
    throw ConfigError("bad port in serve address \"" + text + "\"");
  }
  if (address.port < 0 || address.port > 65535) {
    throw ConfigError("port out of range in serve address \"" + text + "\"");
  }
  return address;
}

AnnotationServer::AnnotationServer(AnnotationService &service, std::string static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto &s = *server_;
  s.Get("/api/tasks/next", [this](const httplib::Request &req, httplib::Response &res) {
    if (!req.has_param("annotator")) return BadRequest(res, "missing annotator parameter");
    Reply(res, service_.NextTask(req.get_param_value("annotator")));
  });
  s.Get(R"(/api/articles/([^/]+))", [this](const httplib::Request &req, httplib::Response &res) {
    Reply(res, service_.GetArticle(req.matches[1], req.get_param_value("annotator")));
  });
  s.Post(R"(/api/tasks/([^/]+)/units)",
         [this](const httplib::Request &req, httplib::Response &res) {
           const Json body = Json::parse(req.body, nullptr, /*allow_exceptions=*/false);
           if (body.is_discarded()) return BadRequest(res, "body is not valid JSON");
           Reply(res, service_.SaveUnits(req.matches[1], body));
         });
  s.Get(R"(/api/tasks/([^/]+)/units)", [this](const httplib::Request &req,
                                              httplib::Response &res) {
    if (!req.has_param("annotator")) return BadRequest(res, "missing annotator parameter");
    const std::string requester = req.get_param_value("annotator");
    const std::string owner = req.has_param("owner") ? req.get_param_value("owner") : requester;
    Reply(res, service_.GetUnits(req.matches[1], requester, owner));
  });
  s.Get("/api/agreement", [this](const httplib::Request &, httplib::Response &res) {
    Reply(res, service_.Agreement());
  });
  s.Get("/api/progress", [this](const httplib::Request &, httplib::Response &res) {
    Reply(res, service_.Progress());
  });
  s.set_exception_handler([](const httplib::Request &, httplib::Response &res,
                             std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception &e) {
      message = e.what();
    } catch (...) {
    }
    LogWarning("annotation request failed: " + message);
    Reply(res, ApiResult{500, Json{{"error", "internal"}, {"message", message}}});
  });
  if (!static_dir.empty()) {
    if (!s.set_mount_point("/", static_dir)) {
      throw ConfigError("static directory not found: " + static_dir);
    }
  }
}

AnnotationServer::~AnnotationServer() { Stop(); }

int AnnotationServer::Start(const ServeAddress &address) {
  int port = address.port;
  if (port == 0) {
    port = server_->bind_to_any_port(address.host);
  } else if (!server_->bind_to_port(address.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw ConfigError("cannot bind " + address.host + ":" + std::to_string(address.port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void AnnotationServer::Run(const ServeAddress &address) {
  if (!server_->bind_to_port(address.host, address.port)) {
    throw ConfigError("cannot bind " + address.host + ":" + std::to_string(address.port));
  }
  LogInfo("serving annotation API on http://" + address.host + ":" +
          std::to_string(address.port));
  server_->listen_after_bind();
}

void AnnotationServer::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace qstance::annotate
