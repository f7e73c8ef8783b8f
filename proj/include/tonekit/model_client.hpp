// Copyright 2026 The tonekit Authors.
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

#pragma once

// Clients for the external model roles: a chat-completions endpoint (teacher
// style responder, augmentation generator, multimodal comparator) and a
// scripted deterministic stub for offline runs.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tonekit/image.hpp"
#include "tonekit/text.hpp"

namespace tonekit {

struct EndpointConfig {
  std::string url;  // base URL ("https://host/v1") or the full completions URL
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1500;
  double top_p = 1.0;
  double timeout_s = 60.0;
  int retries = 3;  // retries after the first attempt
  std::string api_key;  // never serialized
};

// Dotted config keys: endpoint.url, endpoint.model, endpoint.temperature, ...
Json to_json(const EndpointConfig& config);
// Overlays keys present in `j` (nested {"endpoint": {...}} or dotted).
void merge_endpoint_config(EndpointConfig& config, const Json& j);

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Throws Timeout or ConnectionFailed for transport-level failures.
  virtual HttpResponse post(const std::string& url, const std::string& body,
                            const HttpHeaders& headers, double timeout_s) = 0;
};

std::shared_ptr<HttpTransport> make_http_transport();

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Backoff before retry k (0-based): base * 2^k, i.e. 1s, 2s, 4s by default.
std::chrono::milliseconds backoff_delay(int retry_index,
                                        std::chrono::milliseconds base = std::chrono::seconds(1));

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string complete(std::string_view prompt) = 0;
  // Images are sent as data URLs alongside the text.
  virtual std::string complete_with_images(std::string_view prompt,
                                           std::span<const std::string> image_data_urls) = 0;
};

class ChatCompletionsClient : public ModelClient {
 public:
  explicit ChatCompletionsClient(EndpointConfig config,
                                 std::shared_ptr<HttpTransport> transport = make_http_transport(),
                                 Sleeper sleeper = {});

  // Retries timeouts, connection failures and 5xx with exponential backoff.
  // Throws HttpError for other statuses and ExhaustedRetries when out of
  // attempts.
  std::string complete(std::string_view prompt) override;
  std::string complete_with_images(std::string_view prompt,
                                   std::span<const std::string> image_data_urls) override;

  const EndpointConfig& config() const { return config_; }

  // Byte-stable for identical (config, prompt).
  static std::string request_body(const EndpointConfig& config, std::string_view prompt,
                                  std::span<const std::string> image_data_urls = {});
  static std::string completions_url(const std::string& base);

 private:
  std::string send(const std::string& body);

  EndpointConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

// Scripted responder. Script file: one JSON object per line, either
//   {"contains": "<substring>", "response": "..."}
//   {"regex": "<ECMAScript regex>", "response": "..."}
//   {"fallback": "..."}
// Rules are tried in file order against the prompt; the first match wins.
// Without a match, a fallback is chosen by FNV-1a(prompt) xor seed. Without
// fallbacks, NoStubMatch is thrown. Immutable after construction.
class StubModel : public ModelClient {
 public:
  struct Rule {
    std::string pattern;
    bool is_regex = false;
    std::string response;
  };

  StubModel(std::vector<Rule> rules, std::vector<std::string> fallbacks, std::uint64_t seed = 0);
  static StubModel load(const std::string& path, std::uint64_t seed = 0);

  std::string complete(std::string_view prompt) override;
  std::string complete_with_images(std::string_view prompt,
                                   std::span<const std::string> image_data_urls) override;

 private:
  struct CompiledRule {
    Rule rule;
    std::optional<std::regex> re;
  };
  std::vector<CompiledRule> rules_;
  std::vector<std::string> fallbacks_;
  std::uint64_t seed_;
};

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::string png_data_url(const Image& image);

struct ComparisonLabels {
  std::string first = "B";
  std::string second = "C";
};

struct ComparisonResult {
  std::string winner;      // one of the labels
  std::string transcript;  // full reply, kept for audit
};

// Returns the winning label from the reply's final "Answer" sentence (or the
// last sentence when there is no "Answer"), searching for "(B)"/"(C)"
// case-insensitively. nullopt when no single verdict is found.
std::optional<std::string> parse_verdict(std::string_view reply, const ComparisonLabels& labels = {});

// Sends the comparator prompt with the source image as (A) and the two
// candidates as (B) and (C). Throws UndecidableReply.
ComparisonResult compare_images(ModelClient& client, std::string_view intent, const Image& source,
                                const Image& a, const Image& b, const ComparisonLabels& labels = {});

// Wins per label; both labels are always present.
std::map<std::string, int> tally_wins(std::span<const std::string> winners,
                                      const ComparisonLabels& labels = {});

}  // namespace tonekit
