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

#include "openport/pipeline.hpp"

#include <algorithm>
#include <cctype>

#include "openport/canonical.hpp"
#include "openport/ids.hpp"

namespace openport {

namespace {

json opt(const std::optional<std::string>& v) { return v ? json(*v) : json(); }
json opt(const std::optional<Timestamp>& v) { return v ? json(format_timestamp(*v)) : json(); }

bool blank(const std::optional<std::string>& s) {
  return !s || std::all_of(s->begin(), s->end(), [](unsigned char c) { return std::isspace(c); });
}

constexpr std::size_t kMaxKeyLength = 256;
constexpr std::size_t kMaxJustificationLength = 2048;

}  // namespace

std::string_view to_string(DraftStatus s) {
  switch (s) {
    case DraftStatus::Draft: return "draft";
    case DraftStatus::Confirmed: return "confirmed";
    case DraftStatus::Canceled: return "canceled";
    case DraftStatus::Failed: return "failed";
  }
  return "draft";
}

std::optional<DraftStatus> parse_draft_status(std::string_view s) {
  for (auto st : {DraftStatus::Draft, DraftStatus::Confirmed, DraftStatus::Canceled, DraftStatus::Failed}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::string_view to_string(ExecutionStatus s) { return s == ExecutionStatus::Succeeded ? "succeeded" : "failed"; }

bool legal_transition(DraftStatus from, DraftStatus to) {
  return (from == DraftStatus::Draft && (to == DraftStatus::Confirmed || to == DraftStatus::Canceled)) ||
         (from == DraftStatus::Confirmed && to == DraftStatus::Failed);
}

json PolicySnapshot::to_json() const {
  return json{{"requiredScopes", required_scopes}, {"risk", to_string(risk)}, {"autoExecute", auto_exec.to_json()}};
}

json Draft::to_json() const {
  return json{{"id", id},
              {"appId", app_id},
              {"keyId", key_id},
              {"actorUserId", actor_user_id},
              {"actionType", action_type},
              {"payload", payload},
              {"impact", impact},
              {"risk", to_string(risk)},
              {"autoExecuteRequested", auto_execute_requested},
              {"justification", opt(justification)},
              {"preflightHash", opt(preflight_hash)},
              {"stateWitnessHash", opt(state_witness_hash)},
              {"idempotencyKey", opt(idempotency_key)},
              {"policySnapshot", policy_snapshot.to_json()},
              {"status", to_string(status)},
              {"denialCode", opt(denial_code)},
              {"createdAt", format_timestamp(created_at)},
              {"decidedAt", opt(decided_at)},
              {"decidedByUserId", opt(decided_by_user_id)}};
}

json Execution::to_json() const {
  json j{{"id", id},
         {"draftId", draft_id},
         {"status", to_string(status)},
         {"replayed", replayed},
         {"executedAt", format_timestamp(executed_at)}};
  if (result) j["result"] = *result;
  if (error_message) j["errorMessage"] = *error_message;
  return j;
}

Result<ActionRequest> ActionRequest::from_json(const json& body) {
  auto bad = [](std::string msg) { return deny(codes::kActionInvalid, std::move(msg)); };
  if (!body.is_object()) return bad("request body must be a JSON object");
  static const std::set<std::string> known{"action",         "payload",       "preflightId",   "execute",
                                           "forceDraft",     "requestId",     "idempotencyKey", "justification",
                                           "preflightHash",  "stateWitnessHash"};
  for (const auto& [k, v] : body.items()) {
    if (!known.count(k)) return bad("unknown field: " + k);
  }
  ActionRequest r;
  auto it = body.find("action");
  if (it == body.end() || !it->is_string() || it->get_ref<const std::string&>().empty() ||
      it->get_ref<const std::string&>().size() > 128) {
    return bad("action must be a non-empty string");
  }
  r.action = it->get<std::string>();

  if (auto p = body.find("payload"); p != body.end() && !p->is_null()) {
    if (!p->is_object()) return bad("payload must be an object");
    r.payload = *p;
  }
  for (auto [field, out] : {std::pair{"execute", &r.execute}, std::pair{"forceDraft", &r.force_draft}}) {
    if (auto b = body.find(field); b != body.end() && !b->is_null()) {
      if (!b->is_boolean()) return bad(std::string(field) + " must be a boolean");
      *out = b->get<bool>();
    }
  }
  struct Field {
    const char* name;
    std::optional<std::string>* out;
    std::size_t max;
    bool digest;
  };
  for (const Field& f : {Field{"preflightId", &r.preflight_id, kMaxKeyLength, false},
                         Field{"requestId", &r.request_id, kMaxKeyLength, false},
                         Field{"idempotencyKey", &r.idempotency_key, kMaxKeyLength, false},
                         Field{"justification", &r.justification, kMaxJustificationLength, false},
                         Field{"preflightHash", &r.preflight_hash, 64, true},
                         Field{"stateWitnessHash", &r.state_witness_hash, 64, true}}) {
    auto v = body.find(f.name);
    if (v == body.end() || v->is_null()) continue;
    if (!v->is_string()) return bad(std::string(f.name) + " must be a string");
    const auto& s = v->get_ref<const std::string&>();
    if (s.empty() || s.size() > f.max) return bad(std::string(f.name) + " has invalid length");
    if (f.digest && !Digest::is_valid_hex(s)) return bad(std::string(f.name) + " must be 64 lowercase hex characters");
    *f.out = s;
  }
  if (!r.payload && !r.preflight_id) return bad("payload is required unless preflightId is given");
  return r;
}

json PreflightResult::to_json() const {
  return json{{"impact", impact},
              {"impactHash", impact_hash},
              {"preflightId", preflight_id},
              {"stateWitnessHash", opt(state_witness_hash)},
              {"expiresAt", format_timestamp(expires_at)}};
}

std::string_view Outcome::code() const { return replayed ? codes::kIdempotencyReplay : codes::kOk; }

json Outcome::to_json() const {
  json j{{"kind", kind == Kind::Draft ? "draft" : "executed"}, {"draft", draft.to_json()}};
  if (execution) j["execution"] = execution->to_json();
  if (denial_code) j["denialCode"] = *denial_code;
  j["replayed"] = replayed;
  return j;
}

Status auto_exec_allowed(const ActionRequest& req, const ToolDescriptor& tool, const AutoExecConfig& cfg,
                         Timestamp now, const EligibilityFacts& facts) {
  if (!req.execute || req.force_draft) return deny(codes::kAutoExecuteDenied, "execution not requested");
  if (!cfg.enabled) return deny(codes::kAutoExecuteDisabled, "auto-execute is disabled for this integration");
  if (cfg.expires_at && now >= *cfg.expires_at) return deny(codes::kAutoExecuteExpired, "auto-execute window expired");
  const bool listed = cfg.allow_list.count(tool.name) > 0;
  if (!cfg.allow_list.empty() && !listed) return deny(codes::kAutoExecuteDenied, "tool not in auto-execute allowlist");
  if (tool.requires_confirmation && !listed) return deny(codes::kAutoExecuteDenied, "tool requires confirmation");

  const bool high = tool.risk == Risk::High;
  if (high && blank(req.justification)) return deny(codes::kActionInvalid, "justification is required for high-risk actions");
  if (high && cfg.require_idempotency_high_risk && !req.idempotency_key) {
    return deny(codes::kIdempotencyRequired, "idempotencyKey is required for high-risk actions");
  }
  if (high && cfg.require_preflight_high_risk && !facts.bound_hash) {
    return deny(codes::kPreflightRequired, "preflight is required for high-risk actions");
  }
  if (facts.bound_hash && *facts.bound_hash != facts.expected_hash) {
    return deny(codes::kPreflightMismatch, "preflight hash does not match the current request");
  }
  if (facts.bound_witness && facts.current_witness && *facts.bound_witness != *facts.current_witness) {
    return deny(codes::kPreconditionFailed, "resource state changed since preflight");
  }
  return ok_status();
}

WritePipeline::WritePipeline(CredentialStore& credentials, AuditLog& audit, const Clock& clock, PipelineConfig cfg)
    : credentials_(credentials), audit_(audit), clock_(clock), cfg_(cfg) {}

void WritePipeline::audit_event(std::string action, AuditStatus status, std::optional<std::string> code,
                                const Draft* draft, const Execution* exec, const AuditOrigin& origin, json details,
                                const AuthContext* ctx) {
  AuditEvent e;
  e.action = std::move(action);
  e.status = status;
  e.code = std::move(code);
  if (ctx) {
    e.app_id = ctx->app.id;
    e.key_id = ctx->key.id;
    e.actor_user_id = ctx->actor_user_id;
  }
  if (draft) {
    e.app_id = draft->app_id;
    e.key_id = draft->key_id;
    e.actor_user_id = draft->actor_user_id;
    e.draft_id = draft->id;
  }
  if (exec) e.execution_id = exec->id;
  e.performed_by_user_id = origin.performed_by_user_id;
  e.request_id = origin.request_id;
  e.ip = origin.ip;
  e.user_agent = origin.user_agent;
  e.details = std::move(details);
  audit_.emit(std::move(e));
}

Result<PreflightResult> WritePipeline::run_preflight(const AuthContext& ctx, const ToolDescriptor& tool,
                                                     const json& payload, const AuditOrigin& origin) {
  const Timestamp now = clock_.now();
  PreflightRecord rec;
  rec.id = new_id("pfl_");
  rec.app_id = ctx.app.id;
  rec.key_id = ctx.key.id;
  rec.actor_user_id = ctx.actor_user_id;
  rec.action = tool.name;
  rec.payload = payload;
  try {
    rec.impact = tool.impact_fn ? tool.impact_fn(payload) : json::object();
    rec.impact_hash = preflight_hash(tool.name, payload, rec.impact).hex();
    if (tool.witness_fn) rec.state_witness_hash = witness_hash(tool.witness_fn(payload)).hex();
  } catch (const CanonicalizationError& e) {
    return deny(codes::kActionInvalid, "payload cannot be canonicalized");
  }
  rec.expires_at = now + std::chrono::duration_cast<std::chrono::milliseconds>(cfg_.preflight_ttl);

  PreflightResult out{rec.impact, rec.impact_hash, rec.id, rec.state_witness_hash, rec.expires_at};
  {
    std::lock_guard lock(mu_);
    std::erase_if(preflights_, [&](const auto& kv) { return kv.second.expires_at <= now; });
    preflights_.emplace(rec.id, std::move(rec));
  }
  audit_event("agent.action.preflight", AuditStatus::Success, std::nullopt, nullptr, nullptr, origin,
              json{{"action", tool.name}, {"preflightId", out.preflight_id}, {"impactHash", out.impact_hash}}, &ctx);
  return out;
}

std::optional<json> WritePipeline::preflight_payload(const AuthContext& ctx, std::string_view preflight_id) const {
  const Timestamp now = clock_.now();
  std::lock_guard lock(mu_);
  auto it = preflights_.find(preflight_id);
  if (it == preflights_.end()) return std::nullopt;
  const auto& r = it->second;
  if (r.expires_at <= now || r.app_id != ctx.app.id || r.key_id != ctx.key.id || r.actor_user_id != ctx.actor_user_id) {
    return std::nullopt;
  }
  return r.payload;
}

std::optional<std::string> WritePipeline::reserve_idempotency(const IdemKey& key) {
  std::unique_lock lock(mu_);
  while (true) {
    auto it = idempotency_.find(key);
    if (it == idempotency_.end()) {
      idempotency_.emplace(key, IdemEntry{});
      return std::nullopt;
    }
    if (it->second.done) return it->second.execution_id;
    idem_cv_.wait(lock);
  }
}

void WritePipeline::settle_idempotency(const IdemKey& key, const std::optional<std::string>& execution_id) {
  {
    std::lock_guard lock(mu_);
    if (execution_id) {
      idempotency_[key] = IdemEntry{true, *execution_id};
    } else {
      idempotency_.erase(key);
    }
  }
  idem_cv_.notify_all();
}

Outcome WritePipeline::replay_outcome(const std::string& execution_id) const {
  std::lock_guard lock(mu_);
  Outcome out;
  out.kind = Outcome::Kind::Executed;
  out.execution = executions_.at(execution_id);
  out.execution->replayed = true;
  out.draft = drafts_.at(out.execution->draft_id);
  out.replayed = true;
  return out;
}

Execution WritePipeline::run_tool(const ToolDescriptor& tool, const Draft& draft, const AuthContext* ctx) {
  Execution ex;
  ex.id = new_id("exe_");
  ex.draft_id = draft.id;
  ExecutionContext ec;
  ec.actor_user_id = draft.actor_user_id;
  ec.now = clock_.now();
  if (ctx) {
    ec.tenant_id = ctx->app.tenant_id;
  } else if (auto app = credentials_.find_app(draft.app_id)) {
    ec.tenant_id = app->tenant_id;
  }
  try {
    ex.result = tool.execute_fn(ec, draft.payload);
  } catch (const ToolError& e) {
    ex.status = ExecutionStatus::Failed;
    ex.error_message = e.what();
  } catch (const std::exception&) {
    ex.status = ExecutionStatus::Failed;
    ex.error_message = "execution failed";
  }
  ex.executed_at = clock_.now();
  return ex;
}

Status WritePipeline::transition_locked(Draft& d, DraftStatus to, std::optional<std::string> decided_by) {
  if (!legal_transition(d.status, to)) {
    const bool final = d.status != DraftStatus::Draft;
    return deny(final ? codes::kDraftAlreadyFinal : codes::kActionInvalid,
                "illegal draft transition " + std::string(to_string(d.status)) + " -> " + std::string(to_string(to)));
  }
  d.status = to;
  if (to != DraftStatus::Failed) {
    d.decided_at = clock_.now();
    if (decided_by) d.decided_by_user_id = std::move(decided_by);
  }
  return ok_status();
}

Status WritePipeline::transition(std::string_view draft_id, DraftStatus to, std::optional<std::string> decided_by) {
  std::lock_guard lock(mu_);
  auto it = drafts_.find(draft_id);
  if (it == drafts_.end()) return deny(codes::kDraftNotFound, "draft not found");
  return transition_locked(it->second, to, std::move(decided_by));
}

Result<Outcome> WritePipeline::submit_action(const AuthContext& ctx, const ToolDescriptor& tool,
                                             const ActionRequest& req, const AuditOrigin& origin) {
  if (tool.read_only) return deny(codes::kActionInvalid, "read-only tools are not actions");
  const Timestamp now = clock_.now();

  // 1. Idempotent replay, or claim the key for this attempt.
  std::optional<IdemKey> claimed;
  if (req.execute && !req.force_draft && req.idempotency_key) {
    IdemKey key{ctx.app.id, *req.idempotency_key};
    if (auto done = reserve_idempotency(key)) {
      Outcome out = replay_outcome(*done);
      audit_event("agent.action.idempotency_replay", AuditStatus::Success, std::string(codes::kIdempotencyReplay),
                  &out.draft, &*out.execution, origin, json{{"action", tool.name}});
      return out;
    }
    claimed = key;
  }
  auto release = [&] {
    if (claimed) settle_idempotency(*claimed, std::nullopt);
  };

  // 2. Resolve the preflight handle; an unresolvable one fails closed.
  std::optional<PreflightRecord> pre;
  if (req.preflight_id) {
    std::lock_guard lock(mu_);
    auto it = preflights_.find(*req.preflight_id);
    if (it != preflights_.end() && it->second.expires_at > now && it->second.app_id == ctx.app.id &&
        it->second.key_id == ctx.key.id && it->second.actor_user_id == ctx.actor_user_id) {
      pre = it->second;
    }
  }
  if (req.preflight_id && !pre) {
    release();
    audit_event("agent.action.submit", AuditStatus::Denied, std::string(codes::kPreflightNotFound), nullptr, nullptr,
                origin, json{{"action", tool.name}}, &ctx);
    return deny(codes::kPreflightNotFound, "preflight not found or expired");
  }
  if (pre && pre->action != tool.name) {
    release();
    audit_event("agent.action.submit", AuditStatus::Denied, std::string(codes::kPreflightMismatch), nullptr, nullptr,
                origin, json{{"action", tool.name}}, &ctx);
    return deny(codes::kPreflightMismatch, "preflight was issued for a different action");
  }
  const json payload = req.payload ? *req.payload : pre->payload;

  // 3. Server-side impact, hash and witness for the payload as it stands now.
  Draft d;
  EligibilityFacts facts;
  try {
    d.impact = tool.impact_fn ? tool.impact_fn(payload) : json::object();
    facts.expected_hash = preflight_hash(tool.name, payload, d.impact).hex();
    if (tool.witness_fn) facts.current_witness = witness_hash(tool.witness_fn(payload)).hex();
  } catch (const CanonicalizationError&) {
    release();
    return deny(codes::kActionInvalid, "payload cannot be canonicalized");
  }
  facts.bound_hash = req.preflight_hash ? req.preflight_hash : (pre ? std::optional(pre->impact_hash) : std::nullopt);
  facts.bound_witness = req.state_witness_hash ? req.state_witness_hash : (pre ? pre->state_witness_hash : std::nullopt);

  // 4. Eligibility.
  const Status eligible = auto_exec_allowed(req, tool, ctx.app.auto_exec, now, facts);

  // 5. Persist the draft with its policy snapshot.
  d.id = new_id("drf_");
  d.app_id = ctx.app.id;
  d.key_id = ctx.key.id;
  d.actor_user_id = ctx.actor_user_id;
  d.action_type = tool.name;
  d.payload = payload;
  d.risk = tool.risk;
  d.auto_execute_requested = req.execute && !req.force_draft;
  d.justification = req.justification;
  d.preflight_hash = facts.bound_hash;
  // With no client binding, the witness observed now is what an approver reviews.
  d.state_witness_hash = facts.bound_witness ? facts.bound_witness : facts.current_witness;
  d.idempotency_key = req.idempotency_key;
  d.policy_snapshot = PolicySnapshot{tool.required_scopes, tool.risk, ctx.app.auto_exec};
  d.created_at = now;
  if (eligible) {
    d.status = DraftStatus::Confirmed;
    d.decided_at = now;
    d.decided_by_user_id = ctx.actor_user_id;
  } else if (d.auto_execute_requested) {
    d.denial_code = eligible.denial().code;
  }
  {
    std::lock_guard lock(mu_);
    drafts_.emplace(d.id, d);
    draft_order_.push_back(d.id);
  }

  // 6-7. Audit; a denied draft is the fail-closed answer.
  if (!eligible) {
    release();
    audit_event("agent.action.draft.created", d.denial_code ? AuditStatus::Denied : AuditStatus::Success,
                d.denial_code, &d, nullptr, origin, json{{"action", tool.name}, {"risk", to_string(tool.risk)}});
    Outcome out;
    out.draft = d;
    out.denial_code = d.denial_code;
    return out;
  }
  audit_event("agent.action.draft.created", AuditStatus::Success, std::nullopt, &d, nullptr, origin,
              json{{"action", tool.name}, {"risk", to_string(tool.risk)}});

  // 8. Execute outside the lock.
  Execution ex = run_tool(tool, d, &ctx);
  {
    std::lock_guard lock(mu_);
    Draft& stored = drafts_.at(d.id);
    if (ex.status == ExecutionStatus::Failed) transition_locked(stored, DraftStatus::Failed, std::nullopt);
    executions_.emplace(ex.id, ex);
    execution_order_.push_back(ex.id);
    latest_execution_[d.id] = ex.id;
    d = stored;
  }
  if (claimed) settle_idempotency(*claimed, ex.id);
  audit_event("agent.action.execute", ex.status == ExecutionStatus::Succeeded ? AuditStatus::Success : AuditStatus::Failed,
              std::nullopt, &d, &ex, origin, json{{"action", tool.name}});

  Outcome out;
  out.kind = Outcome::Kind::Executed;
  out.draft = d;
  out.execution = ex;
  return out;
}

Result<Outcome> WritePipeline::approve_draft(std::string_view draft_id, const std::string& operator_user_id,
                                             const ToolRegistry& registry, const AuditOrigin& origin) {
  Draft d;
  {
    std::lock_guard lock(mu_);
    auto it = drafts_.find(draft_id);
    if (it == drafts_.end()) return deny(codes::kDraftNotFound, "draft not found");
    d = it->second;
  }
  if (d.status != DraftStatus::Draft) {
    audit_event("agent.draft.approve", AuditStatus::Denied, std::string(codes::kDraftAlreadyFinal), &d, nullptr, origin);
    return deny(codes::kDraftAlreadyFinal, "draft is already final");
  }
  if (!credentials_.credential_active(d.app_id, d.key_id)) {
    audit_event("agent.draft.approve", AuditStatus::Denied, std::string(codes::kForbidden), &d, nullptr, origin);
    return deny(codes::kForbidden, "originating credential is no longer active");
  }
  const ToolDescriptor* tool = registry.find(d.action_type);
  if (!tool) return deny(codes::kActionUnknown, "unknown action");

  std::optional<IdemKey> claimed;
  if (d.idempotency_key) {
    IdemKey key{d.app_id, *d.idempotency_key};
    if (auto done = reserve_idempotency(key)) {
      Outcome out = replay_outcome(*done);
      audit_event("agent.action.idempotency_replay", AuditStatus::Success, std::string(codes::kIdempotencyReplay),
                  &out.draft, &*out.execution, origin);
      return out;
    }
    claimed = key;
  }

  Status confirmed = ok_status();
  {
    std::lock_guard lock(mu_);
    Draft& stored = drafts_.at(d.id);
    confirmed = transition_locked(stored, DraftStatus::Confirmed, operator_user_id);
    d = stored;
  }
  if (!confirmed) {
    // Lost a race with another decision on the same draft.
    if (claimed) settle_idempotency(*claimed, std::nullopt);
    return confirmed.denial();
  }

  // Revalidate the witness against current state before any side effect.
  if (d.state_witness_hash && tool->witness_fn) {
    std::string now_hash;
    try {
      now_hash = witness_hash(tool->witness_fn(d.payload)).hex();
    } catch (const std::exception&) {
      now_hash.clear();
    }
    if (now_hash != *d.state_witness_hash) {
      {
        std::lock_guard lock(mu_);
        Draft& stored = drafts_.at(d.id);
        transition_locked(stored, DraftStatus::Failed, std::nullopt);
        d = stored;
      }
      if (claimed) settle_idempotency(*claimed, std::nullopt);
      audit_event("agent.draft.approve", AuditStatus::Failed, std::string(codes::kPreconditionFailed), &d, nullptr,
                  origin);
      return deny(codes::kPreconditionFailed, "resource state changed since the draft was bound");
    }
  }

  Execution ex = run_tool(*tool, d, nullptr);
  {
    std::lock_guard lock(mu_);
    Draft& stored = drafts_.at(d.id);
    if (ex.status == ExecutionStatus::Failed) transition_locked(stored, DraftStatus::Failed, std::nullopt);
    executions_.emplace(ex.id, ex);
    execution_order_.push_back(ex.id);
    latest_execution_[d.id] = ex.id;
    d = stored;
  }
  if (claimed) settle_idempotency(*claimed, ex.id);
  audit_event("agent.draft.approve", ex.status == ExecutionStatus::Succeeded ? AuditStatus::Success : AuditStatus::Failed,
              std::nullopt, &d, &ex, origin, json{{"action", d.action_type}});

  Outcome out;
  out.kind = Outcome::Kind::Executed;
  out.draft = d;
  out.execution = ex;
  return out;
}

Result<Draft> WritePipeline::reject_draft(std::string_view draft_id, const std::string& operator_user_id,
                                          const AuditOrigin& origin) {
  Draft d;
  Status st = ok_status();
  {
    std::lock_guard lock(mu_);
    auto it = drafts_.find(draft_id);
    if (it == drafts_.end()) return deny(codes::kDraftNotFound, "draft not found");
    st = transition_locked(it->second, DraftStatus::Canceled, operator_user_id);
    d = it->second;
  }
  if (!st) {
    audit_event("agent.draft.reject", AuditStatus::Denied, st.denial().code, &d, nullptr, origin);
    return st.denial();
  }
  audit_event("agent.draft.reject", AuditStatus::Success, std::nullopt, &d, nullptr, origin,
              json{{"action", d.action_type}});
  return d;
}

Result<Outcome> WritePipeline::get_draft(std::string_view draft_id, const AuthContext& ctx) const {
  std::lock_guard lock(mu_);
  auto it = drafts_.find(draft_id);
  if (it == drafts_.end() || it->second.app_id != ctx.app.id) return deny(codes::kDraftNotFound, "draft not found");
  Outcome out;
  out.draft = it->second;
  out.denial_code = it->second.denial_code;
  if (auto e = latest_execution_.find(it->first); e != latest_execution_.end()) {
    out.kind = Outcome::Kind::Executed;
    out.execution = executions_.at(e->second);
  }
  return out;
}

std::vector<Draft> WritePipeline::list_drafts(std::optional<DraftStatus> status) const {
  std::lock_guard lock(mu_);
  std::vector<Draft> out;
  for (auto it = draft_order_.rbegin(); it != draft_order_.rend(); ++it) {
    const Draft& d = drafts_.at(*it);
    if (!status || d.status == *status) out.push_back(d);
  }
  return out;
}

std::size_t WritePipeline::draft_count() const {
  std::lock_guard lock(mu_);
  return drafts_.size();
}

std::size_t WritePipeline::execution_count() const {
  std::lock_guard lock(mu_);
  return executions_.size();
}

std::vector<Draft> WritePipeline::drafts() const {
  std::lock_guard lock(mu_);
  std::vector<Draft> out;
  for (const auto& id : draft_order_) out.push_back(drafts_.at(id));
  return out;
}

std::vector<Execution> WritePipeline::executions() const {
  std::lock_guard lock(mu_);
  std::vector<Execution> out;
  for (const auto& id : execution_order_) out.push_back(executions_.at(id));
  return out;
}

LinkReport WritePipeline::verify_links() const {
  std::vector<std::string> ids;
  std::vector<ExecutionLink> links;
  {
    std::lock_guard lock(mu_);
    ids = draft_order_;
    for (const auto& id : execution_order_) links.push_back({id, executions_.at(id).draft_id});
  }
  return verify_draft_execution_links(ids, links);
}

}  // namespace openport
