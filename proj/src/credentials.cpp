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

#include "openport/credentials.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "openport/canonical.hpp"
#include "openport/ids.hpp"
#include "openport/net.hpp"
#include "openport/secrets.hpp"

namespace openport {

namespace {

constexpr std::size_t kSecretLength = 4 + 43;

Denial not_found(std::string_view what) {
  auto d = deny(codes::kActionInvalid, "unknown " + std::string(what));
  d.http_status = 404;
  return d;
}

Denial invalid(std::string message) { return deny(codes::kActionInvalid, std::move(message)); }

json opt_ts(const std::optional<Timestamp>& t) {
  if (t) return format_timestamp(*t);
  return nullptr;
}

std::set<std::string> string_set(const json& j, const char* field) {
  if (!j.is_array()) throw std::invalid_argument(std::string(field) + " must be an array of strings");
  std::set<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw std::invalid_argument(std::string(field) + " must be an array of strings");
    out.insert(e.get<std::string>());
  }
  return out;
}

bool well_formed_token(std::string_view t) {
  if (t.size() != kSecretLength || t.substr(0, kTokenPrefix.size()) != kTokenPrefix) return false;
  return std::all_of(t.begin() + 4, t.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

}  // namespace

std::string_view to_string(AppStatus s) {
  switch (s) {
    case AppStatus::Active: return "active";
    case AppStatus::Revoked: return "revoked";
    case AppStatus::Disabled: return "disabled";
  }
  return "active";
}

std::string_view to_string(KeyStatus s) { return s == KeyStatus::Active ? "active" : "revoked"; }

json Policy::to_json() const {
  json j;
  j["ipAllowlist"] = ip_allowlist ? json(*ip_allowlist) : json(nullptr);
  j["allowedResourceIds"] = allowed_resource_ids ? json(*allowed_resource_ids) : json(nullptr);
  j["maxQueryWindowDays"] = max_query_window_days;
  j["redactSensitiveFields"] = redact_sensitive_fields;
  j["redactedFieldPaths"] = redacted_field_paths;
  j["disabledTools"] = disabled_tools;
  return j;
}

Policy Policy::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("policy must be an object");
  Policy p;
  if (auto it = j.find("ipAllowlist"); it != j.end() && !it->is_null()) {
    auto s = string_set(*it, "ipAllowlist");
    p.ip_allowlist = std::vector<std::string>(s.begin(), s.end());
  }
  if (auto it = j.find("allowedResourceIds"); it != j.end() && !it->is_null()) {
    p.allowed_resource_ids = string_set(*it, "allowedResourceIds");
  }
  if (auto it = j.find("maxQueryWindowDays"); it != j.end()) {
    if (!it->is_number_integer()) throw std::invalid_argument("maxQueryWindowDays must be an integer");
    const auto v = it->get<std::int64_t>();
    if (v < 1 || v > 36500) throw std::invalid_argument("maxQueryWindowDays must be between 1 and 36500");
    p.max_query_window_days = static_cast<int>(v);
  }
  if (auto it = j.find("redactSensitiveFields"); it != j.end()) {
    if (!it->is_boolean()) throw std::invalid_argument("redactSensitiveFields must be a boolean");
    p.redact_sensitive_fields = it->get<bool>();
  }
  if (auto it = j.find("redactedFieldPaths"); it != j.end()) p.redacted_field_paths = string_set(*it, "redactedFieldPaths");
  if (auto it = j.find("disabledTools"); it != j.end()) p.disabled_tools = string_set(*it, "disabledTools");
  if (auto err = p.validate()) throw std::invalid_argument(*err);
  return p;
}

std::optional<std::string> Policy::validate() const {
  if (max_query_window_days < 1) return "maxQueryWindowDays must be >= 1";
  if (ip_allowlist) {
    for (const auto& entry : *ip_allowlist) {
      if (!parse_cidr(entry)) return "ipAllowlist entry is not an IP or CIDR block: " + entry;
    }
  }
  for (const auto& path : redacted_field_paths) {
    if (path.empty() || path.front() == '.' || path.back() == '.' || path.find("..") != std::string::npos) {
      return "redactedFieldPaths entry is not a dot path: " + path;
    }
  }
  return std::nullopt;
}

json AutoExecConfig::to_json() const {
  return json{{"enabled", enabled},
              {"expiresAt", opt_ts(expires_at)},
              {"allowList", allow_list},
              {"requirePreflightHighRisk", require_preflight_high_risk},
              {"requireIdempotencyHighRisk", require_idempotency_high_risk}};
}

AutoExecConfig AutoExecConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("auto-execute config must be an object");
  AutoExecConfig c;
  auto boolean = [&](const char* field, bool& out) {
    if (auto it = j.find(field); it != j.end()) {
      if (!it->is_boolean()) throw std::invalid_argument(std::string(field) + " must be a boolean");
      out = it->get<bool>();
    }
  };
  boolean("enabled", c.enabled);
  boolean("requirePreflightHighRisk", c.require_preflight_high_risk);
  boolean("requireIdempotencyHighRisk", c.require_idempotency_high_risk);
  if (auto it = j.find("expiresAt"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw std::invalid_argument("expiresAt must be an RFC 3339 UTC timestamp");
    auto t = parse_timestamp(it->get<std::string>());
    if (!t) throw std::invalid_argument("expiresAt must be an RFC 3339 UTC timestamp");
    c.expires_at = *t;
  }
  if (auto it = j.find("allowList"); it != j.end()) c.allow_list = string_set(*it, "allowList");
  return c;
}

json IntegrationApp::to_json() const {
  return json{{"id", id},
              {"name", name},
              {"status", to_string(status)},
              {"scopes", scopes},
              {"policy", policy.to_json()},
              {"autoExecute", auto_exec.to_json()},
              {"tenantId", tenant_id},
              {"serviceActorUserId", service_actor_user_id},
              {"createdAt", format_timestamp(created_at)}};
}

json AgentKey::to_json() const {
  return json{{"id", id},
              {"appId", app_id},
              {"tokenPrefix", token_prefix},
              {"status", to_string(status)},
              {"createdAt", format_timestamp(created_at)},
              {"expiresAt", opt_ts(expires_at)},
              {"lastUsedAt", opt_ts(last_used_at)}};
}

CredentialStore::CredentialStore(const Clock& clock, AuditLog& audit, std::set<std::string> known_scopes)
    : clock_(clock), audit_(audit), known_scopes_(std::move(known_scopes)) {}

void CredentialStore::audit_admin(std::string_view action, const IntegrationApp* app, const AgentKey* key,
                                  const AuditOrigin& origin, json details) {
  AuditEvent e;
  e.action = std::string(action);
  e.status = AuditStatus::Success;
  if (app) {
    e.app_id = app->id;
    e.actor_user_id = app->service_actor_user_id;
  }
  if (key) {
    e.key_id = key->id;
    e.app_id = key->app_id;
  }
  e.performed_by_user_id = origin.performed_by_user_id;
  e.request_id = origin.request_id;
  e.ip = origin.ip;
  e.user_agent = origin.user_agent;
  e.details = std::move(details);
  audit_.emit(std::move(e));
}

Result<IntegrationApp> CredentialStore::create_app(const NewApp& spec, const AuditOrigin& origin) {
  if (spec.name.empty()) return invalid("app name is required");
  if (spec.tenant_id.empty()) return invalid("tenantId is required");
  for (const auto& s : spec.scopes) {
    if (!known_scopes_.contains(s)) return invalid("unknown scope: " + s);
  }
  if (auto err = spec.policy.validate()) return invalid(*err);

  IntegrationApp app;
  app.id = new_id("app_");
  app.name = spec.name;
  app.scopes = spec.scopes;
  app.policy = spec.policy;
  app.auto_exec = spec.auto_exec;
  app.tenant_id = spec.tenant_id;
  app.service_actor_user_id = spec.service_actor_user_id.empty() ? "svc_" + app.id.substr(4) : spec.service_actor_user_id;
  app.created_at = clock_.now();
  {
    std::unique_lock lock(mu_);
    apps_.emplace(app.id, app);
  }
  audit_admin("agent_app.create", &app, nullptr, origin,
              json{{"name", app.name}, {"scopes", app.scopes}, {"tenantId", app.tenant_id}});
  return app;
}

Result<IssuedKey> CredentialStore::issue_key(std::string_view app_id, std::optional<Timestamp> expires_at,
                                             const AuditOrigin& origin) {
  IssuedKey issued;
  {
    std::unique_lock lock(mu_);
    auto it = apps_.find(app_id);
    if (it == apps_.end()) return not_found("app");
    if (it->second.status != AppStatus::Active) return invalid("app is not active");

    issued.secret = new_agent_secret();
    AgentKey& key = issued.key;
    key.id = new_id("key_");
    key.app_id = it->second.id;
    key.secret_hash = sha256(issued.secret).hex();
    key.token_prefix = issued.secret.substr(0, 8);
    key.created_at = clock_.now();
    key.expires_at = expires_at;
    keys_.emplace(key.id, key);
    key_by_hash_.emplace(key.secret_hash, key.id);
  }
  audit_admin("agent_key.create", nullptr, &issued.key, origin);
  return issued;
}

Result<AuthContext> CredentialStore::authenticate(std::string_view bearer_token, Timestamp now) {
  const auto invalid_token = [] { return deny(codes::kTokenInvalid, "invalid or revoked token"); };
  if (!well_formed_token(bearer_token)) return invalid_token();
  const auto hash = sha256(bearer_token).hex();

  std::unique_lock lock(mu_);
  auto kit = key_by_hash_.find(hash);
  if (kit == key_by_hash_.end()) return invalid_token();
  AgentKey& key = keys_.at(kit->second);
  if (key.status != KeyStatus::Active) return invalid_token();
  const IntegrationApp& app = apps_.at(key.app_id);
  if (app.status != AppStatus::Active) return invalid_token();
  if (key.expires_at && now >= *key.expires_at) return deny(codes::kTokenExpired, "token expired");
  key.last_used_at = now;
  return AuthContext{app, key, app.service_actor_user_id};
}

Status CredentialStore::revoke_key(std::string_view key_id, const AuditOrigin& origin) {
  AgentKey snapshot;
  {
    std::unique_lock lock(mu_);
    auto it = keys_.find(key_id);
    if (it == keys_.end()) return not_found("key");
    it->second.status = KeyStatus::Revoked;
    snapshot = it->second;
  }
  audit_admin("agent_key.revoke", nullptr, &snapshot, origin);
  return ok_status();
}

Status CredentialStore::set_app_status(std::string_view app_id, AppStatus to, std::string_view action,
                                       const AuditOrigin& origin) {
  IntegrationApp snapshot;
  {
    std::unique_lock lock(mu_);
    auto it = apps_.find(app_id);
    if (it == apps_.end()) return not_found("app");
    // Revocation is terminal.
    if (it->second.status == AppStatus::Revoked && to != AppStatus::Revoked) return invalid("app is revoked");
    it->second.status = to;
    snapshot = it->second;
  }
  audit_admin(action, &snapshot, nullptr, origin, json{{"status", to_string(to)}});
  return ok_status();
}

Status CredentialStore::revoke_app(std::string_view app_id, const AuditOrigin& origin) {
  return set_app_status(app_id, AppStatus::Revoked, "agent_app.revoke", origin);
}

Status CredentialStore::disable_app(std::string_view app_id, const AuditOrigin& origin) {
  return set_app_status(app_id, AppStatus::Disabled, "agent_app.disable", origin);
}

Status CredentialStore::enable_app(std::string_view app_id, const AuditOrigin& origin) {
  return set_app_status(app_id, AppStatus::Active, "agent_app.enable", origin);
}

Result<IntegrationApp> CredentialStore::update_policy(std::string_view app_id, const Policy& policy,
                                                      const AuditOrigin& origin) {
  if (auto err = policy.validate()) return invalid(*err);
  IntegrationApp snapshot;
  {
    std::unique_lock lock(mu_);
    auto it = apps_.find(app_id);
    if (it == apps_.end()) return not_found("app");
    it->second.policy = policy;
    snapshot = it->second;
  }
  audit_admin("agent_app.policy.update", &snapshot, nullptr, origin, json{{"policy", policy.to_json()}});
  return snapshot;
}

Result<IntegrationApp> CredentialStore::update_auto_exec(std::string_view app_id, const AutoExecConfig& cfg,
                                                         const AuditOrigin& origin) {
  IntegrationApp snapshot;
  {
    std::unique_lock lock(mu_);
    auto it = apps_.find(app_id);
    if (it == apps_.end()) return not_found("app");
    it->second.auto_exec = cfg;
    snapshot = it->second;
  }
  audit_admin("agent_app.auto_execute.update", &snapshot, nullptr, origin, json{{"autoExecute", cfg.to_json()}});
  return snapshot;
}

std::optional<IntegrationApp> CredentialStore::find_app(std::string_view app_id) const {
  std::shared_lock lock(mu_);
  auto it = apps_.find(app_id);
  if (it == apps_.end()) return std::nullopt;
  return it->second;
}

std::optional<AgentKey> CredentialStore::find_key(std::string_view key_id) const {
  std::shared_lock lock(mu_);
  auto it = keys_.find(key_id);
  if (it == keys_.end()) return std::nullopt;
  return it->second;
}

std::vector<IntegrationApp> CredentialStore::list_apps() const {
  std::shared_lock lock(mu_);
  std::vector<IntegrationApp> out;
  for (const auto& [_, app] : apps_) out.push_back(app);
  return out;
}

std::vector<AgentKey> CredentialStore::list_keys(std::string_view app_id) const {
  std::shared_lock lock(mu_);
  std::vector<AgentKey> out;
  for (const auto& [_, key] : keys_) {
    if (key.app_id == app_id) out.push_back(key);
  }
  return out;
}

bool CredentialStore::credential_active(std::string_view app_id, std::string_view key_id) const {
  std::shared_lock lock(mu_);
  auto a = apps_.find(app_id);
  auto k = keys_.find(key_id);
  return a != apps_.end() && k != keys_.end() && a->second.status == AppStatus::Active &&
         k->second.status == KeyStatus::Active;
}

json CredentialStore::export_snapshot() const {
  std::shared_lock lock(mu_);
  json apps = json::array();
  for (const auto& [_, app] : apps_) apps.push_back(app.to_json());
  json keys = json::array();
  for (const auto& [_, key] : keys_) {
    auto k = key.to_json();
    k["secretHash"] = key.secret_hash;
    keys.push_back(std::move(k));
  }
  return json{{"apps", apps}, {"keys", keys}};
}

}  // namespace openport
