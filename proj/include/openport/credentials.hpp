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

#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "openport/audit.hpp"
#include "openport/clock.hpp"
#include "openport/envelope.hpp"

namespace openport {

enum class AppStatus { Active, Revoked, Disabled };
enum class KeyStatus { Active, Revoked };

std::string_view to_string(AppStatus s);
std::string_view to_string(KeyStatus s);

/// ABAC constraints attached to an app.
struct Policy {
  // Absent: no network restriction. Present but empty: every address denied.
  std::optional<std::vector<std::string>> ip_allowlist;
  // Absent: unrestricted. Present: requested resource ids must be a subset.
  std::optional<std::set<std::string>> allowed_resource_ids;
  int max_query_window_days = 90;
  bool redact_sensitive_fields = false;
  std::set<std::string> redacted_field_paths;
  // Tools hidden from this app regardless of scopes.
  std::set<std::string> disabled_tools;

  json to_json() const;
  /// Throws std::invalid_argument on malformed fields.
  static Policy from_json(const json& j);
  /// Empty when valid, else a human-readable reason.
  std::optional<std::string> validate() const;
};

struct AutoExecConfig {
  bool enabled = false;
  std::optional<Timestamp> expires_at;
  std::set<std::string> allow_list;  // empty: every tool eligible
  bool require_preflight_high_risk = true;
  bool require_idempotency_high_risk = true;

  json to_json() const;
  static AutoExecConfig from_json(const json& j);
};

struct IntegrationApp {
  std::string id;
  std::string name;
  AppStatus status = AppStatus::Active;
  std::set<std::string> scopes;
  Policy policy;
  AutoExecConfig auto_exec;
  std::string tenant_id;
  std::string service_actor_user_id;
  Timestamp created_at{};

  json to_json() const;
};

struct AgentKey {
  std::string id;
  std::string app_id;
  std::string secret_hash;
  std::string token_prefix;
  KeyStatus status = KeyStatus::Active;
  Timestamp created_at{};
  std::optional<Timestamp> expires_at;
  std::optional<Timestamp> last_used_at;

  /// Operator view: exposes the token prefix, never the hash.
  json to_json() const;
};

/// Returned exactly once by issue_key; the secret is not retained anywhere.
struct IssuedKey {
  AgentKey key;
  std::string secret;
};

/// Immutable snapshot of the resolved credential taken when a request is admitted.
struct AuthContext {
  IntegrationApp app;
  AgentKey key;
  std::string actor_user_id;
};

struct NewApp {
  std::string name;
  std::set<std::string> scopes;
  Policy policy;
  AutoExecConfig auto_exec;
  std::string tenant_id;
  std::string service_actor_user_id;  // defaults to "svc_<appId>"
};

/// App and key lifecycle plus bearer authentication. All operations are
/// linearizable: a revocation that has returned is observed by every later
/// authentication.
class CredentialStore {
 public:
  CredentialStore(const Clock& clock, AuditLog& audit, std::set<std::string> known_scopes);

  Result<IntegrationApp> create_app(const NewApp& spec, const AuditOrigin& origin = {});
  Result<IssuedKey> issue_key(std::string_view app_id, std::optional<Timestamp> expires_at,
                              const AuditOrigin& origin = {});

  /// Resolves a bearer secret. Missing, malformed, unknown, revoked, or belonging
  /// to an inactive app: agent.token_invalid. Past expiry: agent.token_expired.
  Result<AuthContext> authenticate(std::string_view bearer_token, Timestamp now);

  Status revoke_key(std::string_view key_id, const AuditOrigin& origin = {});
  Status revoke_app(std::string_view app_id, const AuditOrigin& origin = {});
  Status disable_app(std::string_view app_id, const AuditOrigin& origin = {});
  Status enable_app(std::string_view app_id, const AuditOrigin& origin = {});
  Result<IntegrationApp> update_policy(std::string_view app_id, const Policy& policy, const AuditOrigin& origin = {});
  Result<IntegrationApp> update_auto_exec(std::string_view app_id, const AutoExecConfig& cfg,
                                          const AuditOrigin& origin = {});

  std::optional<IntegrationApp> find_app(std::string_view app_id) const;
  std::optional<AgentKey> find_key(std::string_view key_id) const;
  std::vector<IntegrationApp> list_apps() const;
  std::vector<AgentKey> list_keys(std::string_view app_id) const;

  /// True when both the app and the key are still active (used before approval).
  bool credential_active(std::string_view app_id, std::string_view key_id) const;

  const std::set<std::string>& known_scopes() const { return known_scopes_; }

  /// Serialized store state (apps, keys with hashes). Contains no secrets.
  json export_snapshot() const;

 private:
  Status set_app_status(std::string_view app_id, AppStatus to, std::string_view action, const AuditOrigin& origin);
  void audit_admin(std::string_view action, const IntegrationApp* app, const AgentKey* key, const AuditOrigin& origin,
                   json details = json::object());

  const Clock& clock_;
  AuditLog& audit_;
  std::set<std::string> known_scopes_;

  mutable std::shared_mutex mu_;
  std::map<std::string, IntegrationApp, std::less<>> apps_;
  std::map<std::string, AgentKey, std::less<>> keys_;
  std::map<std::string, std::string, std::less<>> key_by_hash_;
};

}  // namespace openport
