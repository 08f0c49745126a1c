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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "openport/clock.hpp"
#include "openport/gateway.hpp"

namespace openport::conformance {

/// Sends one request to the server under test. Transport failures are reported
/// as status 0 with the error text in the body.
using Transport = std::function<HttpResponse(const HttpRequest&)>;

struct EndpointSpec {
  std::string method;
  std::string path;  // may contain "{id}"
};

struct ConformanceProfile {
  std::string name;
  bool enabled = true;
  std::vector<EndpointSpec> required_endpoints;
  std::vector<std::string> success_fields;
  std::vector<std::string> error_fields;
  std::vector<std::string> security_minimums;
  std::vector<std::string> checks;
  json fixtures = json::object();

  /// Throws std::invalid_argument on a malformed profile document.
  static ConformanceProfile from_json(const json& j);
  static ConformanceProfile load(const std::string& path);
};

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string observed;
  std::string expected;
};

struct ConformanceReport {
  std::string profile_name;
  std::vector<CheckResult> checks;

  bool pass() const;
  json to_json() const;
  std::string summary() const;
};

/// Security minimums and checks this runner knows how to execute.
const std::vector<std::string>& known_checks();

ConformanceReport run_profile(const ConformanceProfile& profile, const Transport& transport,
                              const std::string& agent_token);

struct FuzzCase {
  std::string op;
  HttpRequest request;
};

/// Seeded corpus cycling through every mutation operator; identical seeds give
/// identical corpora.
std::vector<FuzzCase> fuzz_corpus(std::size_t count, std::uint64_t seed);

struct FuzzReport {
  std::size_t total = 0;
  std::size_t count_5xx = 0;
  std::size_t count_envelope_violations = 0;
  std::vector<int> statuses;
  std::vector<std::string> failures;

  bool pass() const { return count_5xx == 0 && count_envelope_violations == 0; }
  json to_json() const;
};

FuzzReport run_fuzz(const Transport& transport, const std::string& agent_token, std::size_t count, std::uint64_t seed);

/// An in-process reference runtime with one org1 integration holding every demo
/// scope and a freshly issued key.
class LocalTarget {
 public:
  static constexpr const char* kAdminToken = "local-admin-token";

  explicit LocalTarget(std::shared_ptr<const Clock> clock = nullptr, GatewayConfig cfg = {});

  Runtime& runtime() { return *runtime_; }
  const std::string& agent_token() const { return token_; }
  const std::string& app_id() const { return app_id_; }
  Transport transport();

 private:
  std::shared_ptr<const Clock> clock_;
  std::unique_ptr<Runtime> runtime_;
  std::string token_;
  std::string app_id_;
};

/// The three stable denial codes the gate asserts end to end against a fresh
/// local runtime: token_invalid, policy_denied, idempotency_required.
std::vector<CheckResult> run_reason_code_regressions();

}  // namespace openport::conformance
