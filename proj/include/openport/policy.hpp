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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "openport/adapter.hpp"
#include "openport/admission.hpp"
#include "openport/credentials.hpp"
#include "openport/envelope.hpp"
#include "openport/tools.hpp"

namespace openport {

inline constexpr std::string_view kRedactedMarker = "[REDACTED]";

struct RequestContext {
  // Absent when authentication failed; auth_denial then says why.
  std::optional<AuthContext> auth;
  std::optional<Denial> auth_denial;
  std::string ip;
  Timestamp now{};
  // Name the client asked for, kept even when no descriptor matched it.
  std::optional<std::string> tool_name;
  std::optional<json> payload;
  std::optional<std::string> request_id;
  // On the action surface, tools the app cannot see are reported as unknown.
  bool action_surface = false;
};

struct Decision {
  bool allowed = true;
  std::optional<std::string> code;
  int failed_predicate_index = 0;  // 1-based position in the predicate order
  std::string message;
  std::optional<json> details;
  int retry_after_seconds = 0;

  Denial to_denial() const;
};

/// Runs Authn, Net, Rate, Scope, Policy, Boundary in that order and stops at the
/// first failure. Only the rate predicate touches state (its window counter).
/// The policy predicate also rejects payloads that fail the tool schema or carry
/// an inverted date window, since neither can be checked against policy.
///
/// `from` resumes a request whose earlier predicates already passed, so a
/// gateway can parse the body between Rate and Scope without charging the rate
/// budget twice. Authn is always rechecked.
Decision evaluate(const RequestContext& ctx, const ToolDescriptor* tool, AdmissionController& admission,
                  const DomainAdapter& adapter, Predicate from = Predicate::Authn);

bool ip_allowed(const Policy& policy, std::string_view ip);

/// Absent bounds default to end = today, start = end - d_max.
Status check_query_window(std::optional<Date> start, std::optional<Date> end, int d_max, Date today);
Status check_resource(const std::set<std::string>& requested, const Policy& policy);
Status check_tenant_boundary(const AuthContext& auth, std::string_view resource_id, const DomainAdapter& adapter);

struct Presented {
  json value;
  std::set<std::string> redacted_paths;
};

/// When the policy redacts sensitive fields, replaces the values at its redacted
/// paths and at the adapter-declared `sensitive` paths with a fixed marker. Dot
/// paths; arrays along a path apply to every element. Values already carrying
/// the marker are left alone, so presenting twice adds nothing.
Presented present(const json& object, const Policy& policy, const std::set<std::string>& sensitive = {});

}  // namespace openport
