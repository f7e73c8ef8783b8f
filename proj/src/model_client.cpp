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

#include "tonekit/model_client.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <thread>

#include "tonekit/error.hpp"
#include "tonekit/llm_io.hpp"

namespace tonekit {
namespace {

bool retryable(ErrorKind k) { return k == ErrorKind::kTimeout || k == ErrorKind::kConnectionFailed; }

template <typename T>
void take(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad type for endpoint.") + key, {key});
  }
}

std::string extract_content(const std::string& body) {
  const Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty()) {
    throw Error(ErrorKind::kHttpError, "response has no choices", {"200"});
  }
  const Json& msg = j["choices"][0].value("message", Json::object());
  const Json content = msg.value("content", Json());
  if (content.is_string()) return content.get<std::string>();
  if (content.is_array()) {
    std::string text;
    for (const auto& part : content) {
      if (part.value("type", "") == "text") text += part.value("text", "");
    }
    return text;
  }
  throw Error(ErrorKind::kHttpError, "response message has no content", {"200"});
}

// Text of the sentence that begins at `from` (ends at . ! ? or newline).
std::string_view sentence_at(std::string_view s, std::size_t from) {
  const auto end = s.find_first_of(".!?\n", from);
  return s.substr(from, end == std::string_view::npos ? std::string_view::npos : end - from);
}

std::string_view last_sentence(std::string_view s) {
  s = trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?')) s.remove_suffix(1);
  const auto start = s.find_last_of(".!?\n");
  return start == std::string_view::npos ? s : s.substr(start + 1);
}

}  // namespace

Json to_json(const EndpointConfig& c) {
  Json j = Json::object();
  j["endpoint.url"] = c.url;
  j["endpoint.model"] = c.model;
  j["endpoint.temperature"] = c.temperature;
  j["endpoint.max_tokens"] = c.max_tokens;
  j["endpoint.top_p"] = c.top_p;
  j["endpoint.timeout_s"] = c.timeout_s;
  j["endpoint.retries"] = c.retries;
  return j;
}

void merge_endpoint_config(EndpointConfig& c, const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidInput, "config must be an object");
  Json flat = Json::object();
  if (j.contains("endpoint") && j["endpoint"].is_object()) {
    for (const auto& [k, v] : j["endpoint"].items()) flat[k] = v;
  }
  for (const auto& [k, v] : j.items()) {
    if (k.rfind("endpoint.", 0) == 0) flat[k.substr(9)] = v;
  }
  static const std::vector<std::string> known = {"url",   "model",     "temperature", "max_tokens",
                                                 "top_p", "timeout_s", "retries"};
  for (const auto& [k, v] : flat.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw Error(ErrorKind::kUnknownParameter, "unknown config key endpoint." + k, {"endpoint." + k});
    }
  }
  take(flat, "url", c.url);
  take(flat, "model", c.model);
  take(flat, "temperature", c.temperature);
  take(flat, "max_tokens", c.max_tokens);
  take(flat, "top_p", c.top_p);
  take(flat, "timeout_s", c.timeout_s);
  take(flat, "retries", c.retries);
  if (c.retries < 0) throw Error(ErrorKind::kInvalidInput, "endpoint.retries must be >= 0");
}

std::chrono::milliseconds backoff_delay(int retry_index, std::chrono::milliseconds base) {
  return base * (1LL << std::min(retry_index, 20));
}

ChatCompletionsClient::ChatCompletionsClient(EndpointConfig config,
                                             std::shared_ptr<HttpTransport> transport,
                                             Sleeper sleeper)
    : config_(std::move(config)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string ChatCompletionsClient::completions_url(const std::string& base) {
  constexpr std::string_view kSuffix = "/chat/completions";
  std::string url = base;
  while (!url.empty() && url.back() == '/') url.pop_back();
  if (url.size() >= kSuffix.size() && url.compare(url.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
    return url;
  }
  return url + std::string(kSuffix);
}

std::string ChatCompletionsClient::request_body(const EndpointConfig& config, std::string_view prompt,
                                                std::span<const std::string> image_data_urls) {
  Json message = Json::object();
  message["role"] = "user";
  if (image_data_urls.empty()) {
    message["content"] = std::string(prompt);
  } else {
    Json parts = Json::array();
    parts.push_back({{"type", "text"}, {"text", std::string(prompt)}});
    for (const auto& url : image_data_urls) {
      parts.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
    }
    message["content"] = std::move(parts);
  }
  Json body = Json::object();
  body["model"] = config.model;
  body["messages"] = Json::array({message});
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_tokens;
  body["top_p"] = config.top_p;
  return body.dump();
}

std::string ChatCompletionsClient::send(const std::string& body) {
  const std::string url = completions_url(config_.url);
  HttpHeaders headers = {{"Content-Type", "application/json"}};
  if (!config_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + config_.api_key);
  const std::string request_digest = hex64(fnv1a64(body));

  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    try {
      const HttpResponse resp = transport_->post(url, body, headers, config_.timeout_s);
      if (resp.status >= 200 && resp.status < 300) {
        spdlog::debug("model call ok: request {} response {} (attempt {})", request_digest,
                      hex64(fnv1a64(resp.body)), attempt + 1);
        return extract_content(resp.body);
      }
      if (resp.status < 500) {
        throw Error(ErrorKind::kHttpError, "HTTP " + std::to_string(resp.status) + " from " + url,
                    {std::to_string(resp.status)});
      }
      last_failure = "HTTP " + std::to_string(resp.status);
    } catch (const Error& e) {
      if (!retryable(e.kind())) throw;
      last_failure = e.what();
    }
    spdlog::warn("model call failed: request {} attempt {}/{}: {}", request_digest, attempt + 1,
                 config_.retries + 1, last_failure);
    if (attempt < config_.retries) sleeper_(backoff_delay(attempt));
  }
  throw Error(ErrorKind::kExhaustedRetries,
              "gave up after " + std::to_string(config_.retries + 1) + " attempts: " + last_failure,
              {last_failure});
}

std::string ChatCompletionsClient::complete(std::string_view prompt) {
  return send(request_body(config_, prompt));
}

std::string ChatCompletionsClient::complete_with_images(std::string_view prompt,
                                                        std::span<const std::string> image_data_urls) {
  return send(request_body(config_, prompt, image_data_urls));
}

StubModel::StubModel(std::vector<Rule> rules, std::vector<std::string> fallbacks, std::uint64_t seed)
    : fallbacks_(std::move(fallbacks)), seed_(seed) {
  for (auto& r : rules) {
    CompiledRule c{std::move(r), std::nullopt};
    if (c.rule.is_regex) {
      try {
        c.re.emplace(c.rule.pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw Error(ErrorKind::kInvalidInput, "bad stub regex '" + c.rule.pattern + "': " + e.what());
      }
    }
    rules_.push_back(std::move(c));
  }
}

StubModel StubModel::load(const std::string& path, std::uint64_t seed) {
  std::vector<Rule> rules;
  std::vector<std::string> fallbacks;
  int line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const Json j = Json::parse(line, nullptr, false);
    const std::string where = path + ":" + std::to_string(line_no);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorKind::kInvalidInput, where + ": not a JSON object", {where});
    }
    if (j.contains("fallback") && j["fallback"].is_string()) {
      fallbacks.push_back(j["fallback"].get<std::string>());
      continue;
    }
    if (!j.contains("response") || !j["response"].is_string()) {
      throw Error(ErrorKind::kInvalidInput, where + ": rule needs a string \"response\"", {where});
    }
    Rule r;
    r.response = j["response"].get<std::string>();
    if (j.contains("contains") && j["contains"].is_string()) {
      r.pattern = j["contains"].get<std::string>();
    } else if (j.contains("regex") && j["regex"].is_string()) {
      r.pattern = j["regex"].get<std::string>();
      r.is_regex = true;
    } else {
      throw Error(ErrorKind::kInvalidInput, where + ": rule needs \"contains\" or \"regex\"", {where});
    }
    rules.push_back(std::move(r));
  }
  return StubModel(std::move(rules), std::move(fallbacks), seed);
}

std::string StubModel::complete(std::string_view prompt) {
  for (const auto& c : rules_) {
    const bool hit = c.re ? std::regex_search(prompt.begin(), prompt.end(), *c.re)
                          : prompt.find(c.rule.pattern) != std::string_view::npos;
    if (hit) return c.rule.response;
  }
  if (fallbacks_.empty()) {
    throw Error(ErrorKind::kNoStubMatch, "no stub rule matches prompt " + hex64(fnv1a64(prompt)));
  }
  return fallbacks_[(fnv1a64(prompt) ^ seed_) % fallbacks_.size()];
}

std::string StubModel::complete_with_images(std::string_view prompt, std::span<const std::string>) {
  return complete(prompt);
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string png_data_url(const Image& image) {
  return "data:image/png;base64," + base64_encode(encode_png(image));
}

std::optional<std::string> parse_verdict(std::string_view reply, const ComparisonLabels& labels) {
  const std::string first = "(" + labels.first + ")";
  const std::string second = "(" + labels.second + ")";
  const auto answer = irfind(reply, "answer");
  if (answer != std::string_view::npos) {
    const auto sentence = sentence_at(reply, answer);
    const auto p1 = ifind(sentence, first);
    const auto p2 = ifind(sentence, second);
    if (p1 == std::string_view::npos && p2 == std::string_view::npos) return std::nullopt;
    return p1 < p2 ? labels.first : labels.second;
  }
  const auto sentence = last_sentence(reply);
  const bool has1 = ifind(sentence, first) != std::string_view::npos;
  const bool has2 = ifind(sentence, second) != std::string_view::npos;
  if (has1 == has2) return std::nullopt;
  return has1 ? labels.first : labels.second;
}

ComparisonResult compare_images(ModelClient& client, std::string_view intent, const Image& source,
                                const Image& a, const Image& b, const ComparisonLabels& labels) {
  const std::string prompt = render_prompt(builtin_template(Role::kComparator), intent);
  const std::vector<std::string> images = {png_data_url(source), png_data_url(a), png_data_url(b)};
  ComparisonResult result;
  result.transcript = client.complete_with_images(prompt, images);
  const auto winner = parse_verdict(result.transcript, labels);
  if (!winner) {
    throw Error(ErrorKind::kUndecidableReply, "comparator reply names no winner",
                {result.transcript});
  }
  result.winner = *winner;
  return result;
}

std::map<std::string, int> tally_wins(std::span<const std::string> winners,
                                      const ComparisonLabels& labels) {
  std::map<std::string, int> counts = {{labels.first, 0}, {labels.second, 0}};
  for (const auto& w : winners) ++counts[w];
  return counts;
}

}  // namespace tonekit
