// Copyright 2026 The Regionkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "regionkit/transport.h"

#include <fstream>

#include "httplib.h"

namespace regionkit {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl SplitHttpUrl(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw TransportError(TransportError::Kind::kUnavailable,
                         "only http:// endpoints are supported: " + url);
  }
  const std::size_t path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

}  // namespace

nlohmann::ordered_json PostJson(const std::string& url,
                                const nlohmann::json& body,
                                std::chrono::milliseconds timeout) {
  const SplitUrl target = SplitHttpUrl(url);
  httplib::Client client(target.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto res = client.Post(target.path, body.dump(), "application/json");
  if (!res) {
    const httplib::Error err = res.error();
    const std::string what = url + ": " + httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw TransportError(TransportError::Kind::kTimeout, what);
    }
    throw TransportError(TransportError::Kind::kUnavailable, what);
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError(TransportError::Kind::kProtocol,
                         url + ": HTTP status " + std::to_string(res->status));
  }
  try {
    return nlohmann::ordered_json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(TransportError::Kind::kProtocol,
                         url + ": reply is not JSON: " + e.what());
  }
}

HttpModelTransport::HttpModelTransport(std::string url,
                                       std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

ModelResponse HttpModelTransport::Send(const ModelRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  const nlohmann::ordered_json reply =
      PostJson(url_, {{"prompt", request.prompt}, {"image", request.image}},
               timeout_);
  if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string()) {
    throw TransportError(TransportError::Kind::kProtocol,
                         url_ + ": reply has no string field \"text\"");
  }
  ModelResponse out;
  out.text = reply["text"].get<std::string>();
  out.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return out;
}

ScriptedTransport::ScriptedTransport(const nlohmann::json& script) {
  if (!script.is_object()) {
    throw std::invalid_argument("mock script must be a JSON object");
  }
  if (script.contains("rules")) {
    for (const auto& r : script.at("rules")) {
      Rule rule;
      rule.match = r.value("match", "");
      if (r.contains("image")) {
        rule.image = r.at("image").get<std::string>();
        rule.has_image = true;
      }
      rule.response = r.value("response", "");
      rule.fail = r.value("fail", "");
      rule.fail_first = r.value("fail_first", 0);
      if (!rule.fail.empty() && rule.fail != "timeout" && rule.fail != "unavailable") {
        throw std::invalid_argument("unknown mock failure mode: " + rule.fail);
      }
      rules_.push_back(std::move(rule));
    }
  }
  if (script.contains("default")) {
    default_response_ = script.at("default").get<std::string>();
    has_default_ = true;
  }
}

ScriptedTransport ScriptedTransport::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read mock script " + path.string());
  return ScriptedTransport(nlohmann::json::parse(in));
}

std::uint64_t ScriptedTransport::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

ModelResponse ScriptedTransport::Send(const ModelRequest& request) {
  std::lock_guard<std::mutex> lock(mu_);
  ++calls_;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& rule = rules_[i];
    if (request.prompt.find(rule.match) == std::string::npos) continue;
    if (rule.has_image && rule.image != request.image) continue;
    const auto kind = rule.fail == "unavailable"
                          ? TransportError::Kind::kUnavailable
                          : TransportError::Kind::kTimeout;
    if (rule.fail_first > 0) {
      int& seen = failures_[std::to_string(i) + '\x1f' + request.image + '\x1f' +
                            request.prompt];
      if (seen < rule.fail_first) {
        ++seen;
        throw TransportError(kind, "scripted transient failure");
      }
    } else if (!rule.fail.empty()) {
      throw TransportError(kind, "scripted " + rule.fail);
    }
    return ModelResponse{rule.response, std::chrono::milliseconds(0)};
  }
  if (!has_default_) {
    throw TransportError(TransportError::Kind::kProtocol,
                         "mock script has no rule for this request");
  }
  return ModelResponse{default_response_, std::chrono::milliseconds(0)};
}

ModelResponse SendWithRetries(ModelTransport& transport,
                              const ModelRequest& request, int retries,
                              RetryLog* log) {
  RetryLog local;
  RetryLog& out = log != nullptr ? *log : local;
  for (int attempt = 0;; ++attempt) {
    ++out.attempts;
    try {
      ModelResponse response = transport.Send(request);
      out.elapsed += response.elapsed;
      return response;
    } catch (const TransportError& e) {
      out.errors.push_back(e.what());
      if (attempt >= retries) throw;
    }
  }
}

}  // namespace regionkit
