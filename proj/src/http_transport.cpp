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

// cpp-httplib is heavy to compile; keep it confined to this translation unit.
// TLS support comes from the CPPHTTPLIB_OPENSSL_SUPPORT target definition.
#include "httplib.h"

#include <cmath>

#include "tonekit/error.hpp"
#include "tonekit/model_client.hpp"

namespace tonekit {
namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const std::string& url, const std::string& body, const HttpHeaders& headers,
                    double timeout_s) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw Error(ErrorKind::kInvalidInput, "endpoint URL needs a scheme: " + url, {url});
    }
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    const auto secs = static_cast<time_t>(std::floor(timeout_s));
    const auto usecs = static_cast<time_t>((timeout_s - std::floor(timeout_s)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers h;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") content_type = v;
      else h.emplace(k, v);
    }
    auto res = client.Post(path, h, body, content_type);
    if (!res) {
      const auto err = res.error();
      const std::string what = httplib::to_string(err);
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
          err == httplib::Error::Write) {
        throw Error(ErrorKind::kTimeout, "request to " + url + " failed: " + what, {what});
      }
      throw Error(ErrorKind::kConnectionFailed, "request to " + url + " failed: " + what, {what});
    }
    return {res->status, res->body};
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace tonekit
