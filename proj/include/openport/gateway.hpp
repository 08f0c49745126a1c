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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "openport/admission.hpp"
#include "openport/audit.hpp"
#include "openport/clock.hpp"
#include "openport/credentials.hpp"
#include "openport/demo.hpp"
#include "openport/envelope.hpp"
#include "openport/pipeline.hpp"
#include "openport/policy.hpp"
#include "openport/tools.hpp"

namespace openport {

struct HttpRequest {
  std::string method;
  std::string path;  // no query string
  std::vector<std::pair<std::string, std::string>> query;  // decoded, in order
  std::map<std::string, std::string> headers;               // lowercase names
  std::string body;
  std::string remote_ip = "127.0.0.1";

  /// Splits and percent-decodes "path?query".
  static HttpRequest make(std::string method, std::string_view target, std::string body = {});
  HttpRequest& header(std::string name, std::string value);
  std::optional<std::string> header_value(std::string_view lower_name) const;
};

struct HttpResponse {
  int status = 200;
  std::map<std::string, std::string> headers;
  std::string body;
};

struct GatewayConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
  AdmissionConfig admission;
  PipelineConfig pipeline;
  // Static operator credential; deliberately minimal and not for production.
  std::string admin_token;
  std::size_t max_body_bytes = 256 * 1024;
  std::size_t max_json_depth = 64;
};

inline constexpr std::string_view kAgentPrefix = "/api/agent/v1";
inline constexpr std::string_view kAdminPrefix = "/api/agent-admin/v1";

/// The reference runtime: stores, registry, demo domain and both HTTP planes.
/// `handle` is the whole request path and never throws; an HTTP server only
/// adapts transport to it.
class Runtime {
 public:
  Runtime(const Clock& clock, GatewayConfig cfg);

  HttpResponse handle(const HttpRequest& req);

  const GatewayConfig& config() const { return cfg_; }
  const Clock& clock() const { return clock_; }
  AuditLog& audit() { return audit_; }
  CredentialStore& credentials() { return credentials_; }
  ToolRegistry& registry() { return registry_; }
  demo::DemoAdapter& adapter() { return adapter_; }
  AdmissionController& admission() { return admission_; }
  WritePipeline& pipeline() { return pipeline_; }

 private:
  struct Call;

  HttpResponse dispatch(const HttpRequest& req);
  HttpResponse agent(const HttpRequest& req, std::string_view route);
  HttpResponse admin(const HttpRequest& req, std::string_view route);

  HttpResponse manifest(Call& call);
  HttpResponse read_tool(Call& call, const ToolDescriptor& tool, json payload);
  HttpResponse preflight(Call& call);
  HttpResponse actions(Call& call);
  HttpResponse get_draft(Call& call, std::string_view id);

  HttpResponse denied(Call& call, const Decision& d);
  HttpResponse failed(Call& call, const Denial& d);
  void audit_call(Call& call, AuditStatus status, std::optional<std::string> code, json details = json::object());

  const Clock& clock_;
  GatewayConfig cfg_;
  AuditLog audit_;
  ToolRegistry registry_;
  demo::DemoAdapter adapter_;
  CredentialStore credentials_;
  AdmissionController admission_;
  WritePipeline pipeline_;
};

/// Envelope response with the status the code (or denial override) implies.
HttpResponse envelope_response(int status, const Envelope& env);
HttpResponse error_response(const Denial& d);

}  // namespace openport
