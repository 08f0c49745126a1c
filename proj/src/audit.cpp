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

#include "openport/audit.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "openport/envelope.hpp"
#include "openport/secrets.hpp"

namespace openport {

namespace {

bool registered_namespace(std::string_view action) {
  for (std::string_view ns : {"agent.", "agent_app.", "agent_key."}) {
    if (action.size() > ns.size() && action.substr(0, ns.size()) == ns) return true;
  }
  return false;
}

nlohmann::ordered_json opt(const OptString& s) {
  if (s) return *s;
  return nullptr;
}

bool details_leak(const json& v) {
  if (v.is_string()) return looks_like_secret(v.get_ref<const std::string&>());
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) {
      if (looks_like_secret(k) || details_leak(child)) return true;
    }
  }
  if (v.is_array()) {
    for (const auto& child : v) {
      if (details_leak(child)) return true;
    }
  }
  return false;
}

}  // namespace

std::string_view to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::Success: return "success";
    case AuditStatus::Denied: return "denied";
    case AuditStatus::Failed: return "failed";
  }
  return "success";
}

std::optional<AuditStatus> parse_audit_status(std::string_view s) {
  if (s == "success") return AuditStatus::Success;
  if (s == "denied") return AuditStatus::Denied;
  if (s == "failed") return AuditStatus::Failed;
  return std::nullopt;
}

nlohmann::ordered_json AuditEvent::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["created_at"] = format_timestamp(created_at);
  j["action"] = action;
  j["status"] = to_string(status);
  j["code"] = opt(code);
  j["app_id"] = opt(app_id);
  j["key_id"] = opt(key_id);
  j["actor_user_id"] = opt(actor_user_id);
  j["performed_by_user_id"] = opt(performed_by_user_id);
  j["request_id"] = opt(request_id);
  j["draft_id"] = opt(draft_id);
  j["execution_id"] = opt(execution_id);
  j["ip"] = ip;
  j["user_agent"] = opt(user_agent);
  j["details"] = nlohmann::ordered_json::parse(details.dump(-1, ' ', false, json::error_handler_t::replace));
  return j;
}

AuditEvent AuditLog::emit(AuditEvent event) {
  if (!registered_namespace(event.action)) throw std::invalid_argument("unregistered audit action: " + event.action);
  if (event.code && !is_registered(*event.code)) throw std::invalid_argument("unregistered reason code: " + *event.code);

  bool scrubbed = false;
  if (!event.details.is_object()) event.details = json{{"value", event.details}};
  if (details_leak(event.details)) {
    event.details = json{{"redacted", true}};
    scrubbed = true;
  }
  event.details = bound_details(std::move(event.details));
  // Free-form metadata fields get the same treatment.
  for (OptString* f : {&event.request_id, &event.user_agent}) {
    if (*f && looks_like_secret(**f)) {
      *f = scrub_secrets(**f);
      scrubbed = true;
    }
  }

  std::lock_guard lock(mu_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "aud_%012zu", next_seq_++);
  event.id = buf;
  event.created_at = clock_.now();
  if (scrubbed) ++scrubbed_;
  events_.push_back(event);
  return event;
}

std::vector<AuditEvent> AuditLog::list(const AuditFilter& f) const {
  std::lock_guard lock(mu_);
  std::vector<AuditEvent> out;
  for (auto it = events_.rbegin(); it != events_.rend() && out.size() < f.limit; ++it) {
    const auto& e = *it;
    if (f.action && e.action != *f.action) continue;
    if (f.app_id && e.app_id != f.app_id) continue;
    if (f.status && e.status != *f.status) continue;
    if (f.code && e.code != f.code) continue;
    if (f.since && e.created_at < *f.since) continue;
    out.push_back(e);
  }
  return out;
}

std::vector<AuditEvent> AuditLog::snapshot() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::size_t AuditLog::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::size_t AuditLog::scrub_count() const {
  std::lock_guard lock(mu_);
  return scrubbed_;
}

void AuditLog::export_jsonl(std::ostream& out) const {
  for (const auto& e : snapshot()) out << e.to_json().dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
}

std::string AuditLog::export_jsonl() const {
  std::ostringstream os;
  export_jsonl(os);
  return os.str();
}

LinkReport verify_draft_execution_links(const std::vector<std::string>& draft_ids,
                                        const std::vector<ExecutionLink>& executions) {
  std::map<std::string, int> multiplicity;
  for (const auto& id : draft_ids) ++multiplicity[id];
  LinkReport report;
  for (const auto& e : executions) {
    auto it = multiplicity.find(e.draft_id);
    const int n = it == multiplicity.end() ? 0 : it->second;
    if (n == 1) continue;
    report.ok = false;
    report.violations.push_back(e.execution_id + (n == 0 ? ": no draft " : ": ambiguous draft ") + e.draft_id);
  }
  return report;
}

}  // namespace openport
