// Copyright 2026 The OpenPort Authors
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

#pragma once

#include <cctype>
#include <memory>
#include <string>

#include "httplib.h"
#include "openport/conformance.hpp"

namespace openport::tools {

inline std::string percent_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

/// Remote transport over HTTP(S) via cpp-httplib. Paths and query values are
/// re-encoded byte for byte so malformed fuzz inputs reach the server intact.
inline conformance::Transport http_transport(const std::string& base_url) {
  auto client = std::make_shared<httplib::Client>(base_url);
  client->set_connection_timeout(5);
  client->set_read_timeout(30);
  return [client](const HttpRequest& r) {
    httplib::Request req;
    req.method = r.method;
    std::string path;
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      const char c = r.path[i];
      path += c == '/' ? std::string("/") : percent_encode(std::string(1, c));
    }
    std::string sep = "?";
    for (const auto& [k, v] : r.query) {
      path += sep + percent_encode(k) + "=" + percent_encode(v);
      sep = "&";
    }
    req.path = path;
    for (const auto& [k, v] : r.headers) req.set_header(k, v);
    req.body = r.body;
    HttpResponse out;
    auto res = client->send(req);
    if (!res) {
      out.status = 0;
      out.body = "transport error: " + httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    for (const auto& [k, v] : res->headers) out.headers[k] = v;
    return out;
  };
}

}  // namespace openport::tools
