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

#include "openport/policy.hpp"

#include <algorithm>

#include "openport/net.hpp"
#include "openport/schema.hpp"

namespace openport {

namespace {

Decision fail(Predicate p, std::string_view code, std::string message, std::optional<json> details = std::nullopt) {
  Decision d;
  d.allowed = false;
  d.code = std::string(code);
  d.failed_predicate_index = static_cast<int>(p);
  d.message = std::move(message);
  d.details = std::move(details);
  return d;
}

Decision fail(Predicate p, const Denial& denial) { return fail(p, denial.code, denial.message, denial.details); }

std::optional<Date> date_field(const json& payload, const std::string& name) {
  if (!payload.is_object()) return std::nullopt;
  auto it = payload.find(name);
  if (it == payload.end() || !it->is_string()) return std::nullopt;
  return parse_date(it->get_ref<const std::string&>());
}

void redact_path(json& node, const std::vector<std::string>& parts, std::size_t i, const std::string& full,
                 std::set<std::string>& out) {
  if (node.is_array()) {
    for (auto& el : node) redact_path(el, parts, i, full, out);
    return;
  }
  if (!node.is_object()) return;
  auto it = node.find(parts[i]);
  if (it == node.end()) return;
  if (i + 1 < parts.size()) {
    redact_path(*it, parts, i + 1, full, out);
    return;
  }
  if (it->is_string() && it->get_ref<const std::string&>() == kRedactedMarker) return;
  *it = std::string(kRedactedMarker);
  out.insert(full);
}

}  // namespace

Denial Decision::to_denial() const {
  return deny(code.value_or(std::string(codes::kForbidden)), message, details);
}

bool ip_allowed(const Policy& policy, std::string_view ip) {
  if (!policy.ip_allowlist) return true;
  const auto addr = parse_ip(ip);
  if (!addr) return false;
  return std::any_of(policy.ip_allowlist->begin(), policy.ip_allowlist->end(), [&](const std::string& entry) {
    const auto block = parse_cidr(entry);
    return block && block->contains(*addr);
  });
}

Status check_query_window(std::optional<Date> start, std::optional<Date> end, int d_max, Date today) {
  const Date e = end.value_or(today);
  const Date s = start.value_or(Date{std::chrono::sys_days{e} - std::chrono::days{d_max}});
  const int span = days_between(s, e);
  if (span < 0) return deny(codes::kActionInvalid, "start is after end");
  if (span > d_max) {
    return deny(codes::kPolicyDenied, "query window exceeds policy maximum",
                json{{"maxQueryWindowDays", d_max}, {"requestedDays", span}});
  }
  return ok_status();
}

Status check_resource(const std::set<std::string>& requested, const Policy& policy) {
  if (!policy.allowed_resource_ids) return ok_status();
  for (const auto& id : requested) {
    if (!policy.allowed_resource_ids->count(id)) return deny(codes::kPolicyDenied, "resource not allowed by policy");
  }
  return ok_status();
}

Status check_tenant_boundary(const AuthContext& auth, std::string_view resource_id, const DomainAdapter& adapter) {
  const auto owner = adapter.resolve_tenant(resource_id);
  // Unknown and foreign resources are indistinguishable to the caller.
  if (!owner || *owner != auth.app.tenant_id) return deny(codes::kForbidden, "resource is outside this integration");
  return ok_status();
}

Decision evaluate(const RequestContext& ctx, const ToolDescriptor* tool, AdmissionController& admission,
                  const DomainAdapter& adapter, Predicate from) {
  // 1. Authn
  if (!ctx.auth) {
    if (ctx.auth_denial) return fail(Predicate::Authn, *ctx.auth_denial);
    return fail(Predicate::Authn, codes::kTokenInvalid, "missing or invalid token");
  }
  const AuthContext& auth = *ctx.auth;
  const Policy& policy = auth.app.policy;

  // 2. Net
  if (from <= Predicate::Net && !ip_allowed(policy, ctx.ip)) {
    return fail(Predicate::Net, code_for_first_failure(Predicate::Net).id, "client address not allowed by policy");
  }

  // 3. Rate
  if (from <= Predicate::Rate) {
    if (auto adm = admission.admit(auth.key.id, ctx.ip, ctx.now); !adm.admitted) {
      auto d = fail(Predicate::Rate, codes::kRateLimited, "Rate limit exceeded");
      d.retry_after_seconds = adm.retry_after_seconds;
      return d;
    }
  }

  // 4. Scope
  if (!tool && ctx.tool_name) return fail(Predicate::Scope, codes::kActionUnknown, "unknown action");
  if (!tool) return Decision{};
  const bool scoped = std::includes(auth.app.scopes.begin(), auth.app.scopes.end(), tool->required_scopes.begin(),
                                    tool->required_scopes.end());
  const bool exposed = policy_allows(auth.app, *tool);
  if (ctx.action_surface && (!scoped || !exposed)) {
    return fail(Predicate::Scope, codes::kActionUnknown, "unknown action");
  }
  if (!scoped) {
    std::vector<std::string> missing;
    std::set_difference(tool->required_scopes.begin(), tool->required_scopes.end(), auth.app.scopes.begin(),
                        auth.app.scopes.end(), std::back_inserter(missing));
    return fail(Predicate::Scope, codes::kScopeDenied, "missing scope", json{{"required", missing}});
  }

  // 5. Policy
  if (!exposed) return fail(Predicate::Policy, codes::kPolicyDenied, "tool disabled by policy");
  std::vector<std::string> resources;
  if (ctx.payload) {
    if (auto err = validate_schema(tool->input_schema, *ctx.payload)) {
      return fail(Predicate::Policy, codes::kActionInvalid, "payload does not match input schema",
                  json{{"error", *err}});
    }
    if (tool->query_window) {
      auto st = check_query_window(date_field(*ctx.payload, tool->query_window->start),
                                   date_field(*ctx.payload, tool->query_window->end), policy.max_query_window_days,
                                   date_of(ctx.now));
      if (!st) return fail(Predicate::Policy, st.denial());
    }
    if (tool->resources_fn) resources = tool->resources_fn(*ctx.payload);
    auto st = check_resource(std::set<std::string>(resources.begin(), resources.end()), policy);
    if (!st) return fail(Predicate::Policy, st.denial());
  }

  // 6. Boundary
  for (const auto& id : resources) {
    if (auto st = check_tenant_boundary(auth, id, adapter); !st) return fail(Predicate::Boundary, st.denial());
  }
  return Decision{};
}

Presented present(const json& object, const Policy& policy, const std::set<std::string>& sensitive) {
  Presented out{object, {}};
  if (!policy.redact_sensitive_fields) return out;
  std::set<std::string> paths = policy.redacted_field_paths;
  paths.insert(sensitive.begin(), sensitive.end());
  for (const auto& path : paths) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      auto dot = path.find('.', pos);
      parts.push_back(path.substr(pos, dot - pos));
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    if (std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); })) continue;
    redact_path(out.value, parts, 0, path, out.redacted_paths);
  }
  return out;
}

}  // namespace openport
