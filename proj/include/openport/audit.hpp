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
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "openport/clock.hpp"

namespace openport {

using json = nlohmann::json;

enum class AuditStatus { Success, Denied, Failed };

std::string_view to_string(AuditStatus s);
std::optional<AuditStatus> parse_audit_status(std::string_view s);

using OptString = std::optional<std::string>;

/// One structured allow/deny/fail record. `id` and `created_at` are assigned by
/// the log on append.
struct AuditEvent {
  std::string id;
  Timestamp created_at{};
  std::string action;
  AuditStatus status = AuditStatus::Success;
  OptString code;
  OptString app_id;
  OptString key_id;
  OptString actor_user_id;
  OptString performed_by_user_id;
  OptString request_id;
  OptString draft_id;
  OptString execution_id;
  std::string ip;
  OptString user_agent;
  json details = json::object();

  /// Every schema field is present; unresolved ones are null. Field order follows
  /// the documented example event.
  nlohmann::ordered_json to_json() const;
};

/// Request metadata carried into audit events by whoever triggers them.
struct AuditOrigin {
  OptString performed_by_user_id;
  OptString request_id;
  std::string ip;
  OptString user_agent;
};

struct AuditFilter {
  OptString action;
  OptString app_id;
  std::optional<AuditStatus> status;
  OptString code;
  std::optional<Timestamp> since;
  std::size_t limit = 100;
};

/// In-memory append-only sink. There is no update or delete operation.
class AuditLog {
 public:
  explicit AuditLog(const Clock& clock) : clock_(clock) {}

  /// Appends and returns the stored copy. Throws std::invalid_argument for actions
  /// outside the agent., agent_app. and agent_key. namespaces.
  AuditEvent emit(AuditEvent event);

  /// Newest first, conjunctive filters, at most `limit` events.
  std::vector<AuditEvent> list(const AuditFilter& filter) const;

  /// Consistent snapshot in append order.
  std::vector<AuditEvent> snapshot() const;
  std::size_t size() const;

  /// Number of events whose details were replaced because they looked like secrets.
  std::size_t scrub_count() const;

  /// JSON Lines, append order, one event per line.
  void export_jsonl(std::ostream& out) const;
  std::string export_jsonl() const;

 private:
  const Clock& clock_;
  mutable std::mutex mu_;
  std::vector<AuditEvent> events_;
  std::size_t next_seq_ = 1;
  std::size_t scrubbed_ = 0;
};

/// Result of checking that every execution references exactly one recorded draft.
struct LinkReport {
  bool ok = true;
  std::vector<std::string> violations;
};

struct ExecutionLink {
  std::string execution_id;
  std::string draft_id;
};

LinkReport verify_draft_execution_links(const std::vector<std::string>& draft_ids,
                                        const std::vector<ExecutionLink>& executions);

}  // namespace openport
