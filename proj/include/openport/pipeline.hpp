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

#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "openport/audit.hpp"
#include "openport/clock.hpp"
#include "openport/credentials.hpp"
#include "openport/envelope.hpp"
#include "openport/tools.hpp"

namespace openport {

enum class DraftStatus { Draft, Confirmed, Canceled, Failed };
enum class ExecutionStatus { Succeeded, Failed };

std::string_view to_string(DraftStatus s);
std::optional<DraftStatus> parse_draft_status(std::string_view s);
std::string_view to_string(ExecutionStatus s);

/// Draft lifecycle: draft->confirmed, draft->canceled, confirmed->failed.
bool legal_transition(DraftStatus from, DraftStatus to);

/// Governance inputs frozen when the draft is created.
struct PolicySnapshot {
  std::set<std::string> required_scopes;
  Risk risk = Risk::Low;
  AutoExecConfig auto_exec;

  json to_json() const;
};

struct Draft {
  std::string id;
  std::string app_id;
  std::string key_id;
  std::string actor_user_id;
  std::string action_type;
  json payload;
  json impact;
  Risk risk = Risk::Low;
  bool auto_execute_requested = false;
  std::optional<std::string> justification;
  std::optional<std::string> preflight_hash;
  std::optional<std::string> state_witness_hash;
  std::optional<std::string> idempotency_key;
  PolicySnapshot policy_snapshot;
  DraftStatus status = DraftStatus::Draft;
  std::optional<std::string> denial_code;
  Timestamp created_at{};
  std::optional<Timestamp> decided_at;
  std::optional<std::string> decided_by_user_id;

  json to_json() const;
};

struct Execution {
  std::string id;
  std::string draft_id;
  ExecutionStatus status = ExecutionStatus::Succeeded;
  std::optional<json> result;
  std::optional<std::string> error_message;
  bool replayed = false;
  Timestamp executed_at{};

  json to_json() const;
};

struct ActionRequest {
  std::string action;
  std::optional<json> payload;
  std::optional<std::string> preflight_id;
  bool execute = false;
  bool force_draft = false;
  std::optional<std::string> request_id;
  std::optional<std::string> idempotency_key;
  std::optional<std::string> justification;
  std::optional<std::string> preflight_hash;
  std::optional<std::string> state_witness_hash;

  /// Wire form. Unknown fields, wrong types or malformed digests: agent.action_invalid.
  static Result<ActionRequest> from_json(const json& body);
};

struct PreflightRecord {
  std::string id;
  std::string app_id;
  std::string key_id;
  std::string actor_user_id;
  std::string action;
  json payload;
  json impact;
  std::string impact_hash;
  std::optional<std::string> state_witness_hash;
  Timestamp expires_at{};
};

struct PreflightResult {
  json impact;
  std::string impact_hash;
  std::string preflight_id;
  std::optional<std::string> state_witness_hash;
  Timestamp expires_at{};

  json to_json() const;
};

struct Outcome {
  enum class Kind { Draft, Executed };
  Kind kind = Kind::Draft;
  Draft draft;
  std::optional<Execution> execution;
  std::optional<std::string> denial_code;
  bool replayed = false;

  /// Envelope code for this outcome: agent.idempotency_replay for replays.
  std::string_view code() const;
  json to_json() const;
};

/// Server-side inputs to the auto-execute eligibility check.
struct EligibilityFacts {
  // Hash the client bound (directly or via a resolved preflight record).
  std::optional<std::string> bound_hash;
  // Hash recomputed now from (action, payload, impact).
  std::string expected_hash;
  std::optional<std::string> bound_witness;
  std::optional<std::string> current_witness;
};

/// Auto-execute eligibility, term by term. Returns the first failing term's code.
Status auto_exec_allowed(const ActionRequest& req, const ToolDescriptor& tool, const AutoExecConfig& cfg,
                         Timestamp now, const EligibilityFacts& facts);

struct PipelineConfig {
  std::chrono::seconds preflight_ttl{600};
};

class WritePipeline {
 public:
  WritePipeline(CredentialStore& credentials, AuditLog& audit, const Clock& clock, PipelineConfig cfg = {});

  Result<PreflightResult> run_preflight(const AuthContext& ctx, const ToolDescriptor& tool, const json& payload,
                                        const AuditOrigin& origin);

  /// Cached payload of a live preflight owned by this credential context.
  std::optional<json> preflight_payload(const AuthContext& ctx, std::string_view preflight_id) const;

  /// Expects the request to have passed authorization already. Emits the audit
  /// events for its own outcome.
  Result<Outcome> submit_action(const AuthContext& ctx, const ToolDescriptor& tool, const ActionRequest& req,
                                const AuditOrigin& origin);

  /// Operator approval; re-checks that the originating credential is still active
  /// and revalidates the state witness before executing.
  Result<Outcome> approve_draft(std::string_view draft_id, const std::string& operator_user_id,
                                const ToolRegistry& registry, const AuditOrigin& origin);
  Result<Draft> reject_draft(std::string_view draft_id, const std::string& operator_user_id,
                             const AuditOrigin& origin);

  /// Drafts of other apps are reported as not found.
  Result<Outcome> get_draft(std::string_view draft_id, const AuthContext& ctx) const;
  std::vector<Draft> list_drafts(std::optional<DraftStatus> status) const;

  /// Raw state-machine step, exposed for operators and tests.
  Status transition(std::string_view draft_id, DraftStatus to, std::optional<std::string> decided_by = std::nullopt);

  std::size_t draft_count() const;
  std::size_t execution_count() const;
  std::vector<Draft> drafts() const;
  std::vector<Execution> executions() const;
  LinkReport verify_links() const;

 private:
  struct IdemEntry {
    bool done = false;
    std::string execution_id;
  };
  using IdemKey = std::pair<std::string, std::string>;

  // Returns the finished execution id if the key already completed; otherwise
  // reserves the key (waiting out any in-flight holder) and returns nullopt.
  std::optional<std::string> reserve_idempotency(const IdemKey& key);
  void settle_idempotency(const IdemKey& key, const std::optional<std::string>& execution_id);

  Outcome replay_outcome(const std::string& execution_id) const;
  Execution run_tool(const ToolDescriptor& tool, const Draft& draft, const AuthContext* ctx);
  Status transition_locked(Draft& d, DraftStatus to, std::optional<std::string> decided_by);

  void audit_event(std::string action, AuditStatus status, std::optional<std::string> code, const Draft* draft,
                   const Execution* exec, const AuditOrigin& origin, json details = json::object(),
                   const AuthContext* ctx = nullptr);

  CredentialStore& credentials_;
  AuditLog& audit_;
  const Clock& clock_;
  PipelineConfig cfg_;

  mutable std::mutex mu_;
  std::condition_variable idem_cv_;
  std::map<std::string, Draft, std::less<>> drafts_;
  std::vector<std::string> draft_order_;
  std::map<std::string, Execution, std::less<>> executions_;
  std::vector<std::string> execution_order_;
  std::map<std::string, std::string, std::less<>> latest_execution_;  // draftId -> executionId
  std::map<std::string, PreflightRecord, std::less<>> preflights_;
  std::map<IdemKey, IdemEntry> idempotency_;
};

}  // namespace openport
