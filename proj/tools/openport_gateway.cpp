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

// Reference runtime over HTTP. All request handling lives in Runtime::handle;
// this file only adapts cpp-httplib requests to it.

#include <cctype>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "openport/gateway.hpp"

namespace {

openport::HttpRequest adapt(const httplib::Request& in) {
  openport::HttpRequest r;
  r.method = in.method;
  r.path = in.path;
  // httplib stores params in a multimap, which keeps duplicates.
  for (const auto& [k, v] : in.params) r.query.emplace_back(k, v);
  for (const auto& [k, v] : in.headers) {
    std::string lower = k;
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    r.headers[lower] = v;
  }
  r.body = in.body;
  r.remote_ip = in.remote_addr;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OpenPort reference gateway"};
  openport::GatewayConfig cfg;
  bool bootstrap = false;
  long window_seconds = 60;
  app.add_option("--host", cfg.listen_host, "Listen address");
  app.add_option("--port", cfg.listen_port, "Listen port")->check(CLI::Range(1, 65535));
  app.add_option("--admin-token", cfg.admin_token, "Static operator token for the admin plane")
      ->envname("OPENPORT_ADMIN_TOKEN");
  app.add_option("--rate-window", window_seconds, "Rate limit window in seconds")->check(CLI::PositiveNumber);
  app.add_option("--rate-limit", cfg.admission.limit, "Requests per window per key and IP");
  app.add_flag("--bootstrap", bootstrap, "Create an org1 demo integration and print its agent token");
  CLI11_PARSE(app, argc, argv);
  cfg.admission.window = std::chrono::seconds(window_seconds);

  if (cfg.admin_token.empty()) {
    std::cerr << "an admin token is required (--admin-token or OPENPORT_ADMIN_TOKEN)\n";
    return 2;
  }

  openport::SystemClock clock;
  openport::Runtime runtime(clock, cfg);

  if (bootstrap) {
    openport::NewApp spec;
    spec.name = "demo";
    spec.tenant_id = "org1";
    spec.scopes = openport::demo::demo_scopes();
    auto created = runtime.credentials().create_app(spec);
    if (!created) {
      std::cerr << "bootstrap failed: " << created.denial().message << "\n";
      return 1;
    }
    auto key = runtime.credentials().issue_key(created->id, std::nullopt);
    if (!key) {
      std::cerr << "bootstrap failed: " << key.denial().message << "\n";
      return 1;
    }
    std::cout << "app " << created->id << "\nagent token " << key->secret << std::endl;
  }

  httplib::Server server;
  // Leave headroom above the runtime cap so oversized bodies get an envelope 413.
  server.set_payload_max_length(cfg.max_body_bytes * 4);
  auto handler = [&runtime](const httplib::Request& in, httplib::Response& out) {
    const auto r = runtime.handle(adapt(in));
    out.status = r.status;
    for (const auto& [k, v] : r.headers) {
      if (k != "Content-Type") out.set_header(k, v);
    }
    out.set_content(r.body, "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Put(".*", handler);
  server.Patch(".*", handler);
  server.Delete(".*", handler);

  std::cout << "listening on " << cfg.listen_host << ":" << cfg.listen_port << std::endl;
  if (!server.listen(cfg.listen_host, cfg.listen_port)) {
    std::cerr << "cannot listen on " << cfg.listen_host << ":" << cfg.listen_port << "\n";
    return 1;
  }
  return 0;
}
