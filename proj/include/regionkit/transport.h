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
#ifndef REGIONKIT_TRANSPORT_H_
#define REGIONKIT_TRANSPORT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace regionkit {

class TransportError : public std::runtime_error {
 public:
  enum class Kind { kTimeout, kUnavailable, kProtocol };

  TransportError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ModelRequest {
  std::string prompt;
  std::string image;
};

struct ModelResponse {
  std::string text;
  // Time the transport spent on the exchange, as it measures it.
  std::chrono::milliseconds elapsed{0};
};

// Synchronous request/response channel to a model. Responses are untrusted
// text. Implementations throw TransportError and must be safe to call from
// several threads.
class ModelTransport {
 public:
  virtual ~ModelTransport() = default;
  virtual ModelResponse Send(const ModelRequest& request) = 0;
};

// POSTs {"prompt", "image"} and reads {"text"} from the reply.
class HttpModelTransport : public ModelTransport {
 public:
  HttpModelTransport(std::string url, std::chrono::milliseconds timeout);
  ModelResponse Send(const ModelRequest& request) override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

// Deterministic stand-in for a model, driven by a JSON script:
//
//   {"rules": [{"match": "substring", "image": "optional exact image",
//               "response": "text", "fail": "timeout"|"unavailable",
//               "fail_first": 2}],
//    "default": "text"}
//
// The first rule whose `match` occurs in the prompt (and whose `image`
// equals the request image, when given) answers. `fail` makes the rule always
// fail; with `fail_first` it instead fails that many attempts for each
// distinct request before answering, `fail` then naming the error kind. Without a matching rule the `default` text is returned,
// or a protocol error if there is none. Reported elapsed time is always zero.
class ScriptedTransport : public ModelTransport {
 public:
  explicit ScriptedTransport(const nlohmann::json& script);
  static ScriptedTransport FromFile(const std::filesystem::path& path);

  ModelResponse Send(const ModelRequest& request) override;

  std::uint64_t calls() const;

 private:
  struct Rule {
    std::string match;
    std::string image;
    bool has_image = false;
    std::string response;
    std::string fail;
    int fail_first = 0;
  };

  std::vector<Rule> rules_;
  std::string default_response_;
  bool has_default_ = false;

  mutable std::mutex mu_;
  std::map<std::string, int> failures_;  // keyed by rule index + request
  std::uint64_t calls_ = 0;
};

struct RetryLog {
  int attempts = 0;
  std::chrono::milliseconds elapsed{0};
  std::vector<std::string> errors;
};

// Sends at most 1 + retries requests. Rethrows the last TransportError when
// every attempt fails.
ModelResponse SendWithRetries(ModelTransport& transport,
                              const ModelRequest& request, int retries,
                              RetryLog* log);

// JSON POST helper shared by the HTTP clients. Connection failures map to
// kUnavailable, timeouts to kTimeout, non-2xx or unparsable replies to
// kProtocol.
nlohmann::ordered_json PostJson(const std::string& url,
                                const nlohmann::json& body,
                                std::chrono::milliseconds timeout);

}  // namespace regionkit

#endif  // REGIONKIT_TRANSPORT_H_
