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

#include "openport/gateway.hpp"

#include <openssl/crypto.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <stdexcept>

#include "openport/ids.hpp"

namespace openport {

namespace {

constexpr std::string_view kJson = "application/json";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view in, bool plus_is_space) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char c = in[i];
    if (c == '%' && i + 2 < in.size() && hex_value(in[i + 1]) >= 0 && hex_value(in[i + 2]) >= 0) {
      out += static_cast<char>(hex_value(in[i + 1]) * 16 + hex_value(in[i + 2]));
      i += 2;
    } else if (c == '+' && plus_is_space) {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::vector<std::string_view> split_path(std::string_view route) {
  std::vector<std::string_view> parts;
  while (!route.empty()) {
    if (route.front() == '/') {
      route.remove_prefix(1);
      continue;
    }
    auto slash = route.find('/');
    parts.push_back(route.substr(0, slash));
    if (slash == std::string_view::npos) break;
    route.remove_prefix(slash);
  }
  return parts;
}

struct BodyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Depth-limited parse; every failure is a client error.
Result<json> parse_body(const std::string& body, std::size_t max_bytes, std::size_t max_depth) {
  if (body.size() > max_bytes) {
    Denial d = deny(codes::kActionInvalid, "request body too large",
                    json{{"maxBytes", max_bytes}, {"receivedBytes", body.size()}});
    d.http_status = 413;
    return d;
  }
  try {
    json::parser_callback_t cb = [max_depth](int depth, json::parse_event_t, json&) {
      if (static_cast<std::size_t>(depth) > max_depth) throw BodyError("nesting too deep");
      return true;
    };
    return json::parse(body, cb);
  } catch (const BodyError& e) {
    Denial d = deny(codes::kActionInvalid, "malformed JSON body", json{{"error", e.what()}});
    d.http_status = 400;
    return d;
  } catch (const json::exception&) {
    Denial d = deny(codes::kActionInvalid, "malformed JSON body");
    d.http_status = 400;
    return d;
  }
}

Denial route_unknown() {
  return deny(codes::kActionUnknown, "unknown route");
}

bool constant_time_equal(std::string_view a, std::string_view b) {
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

std::optional<std::string> bearer(const HttpRequest& req) {
  auto h = req.header_value("authorization");
  if (!h || h->size() < 8 || lower(h->substr(0, 7)) != "bearer ") return std::nullopt;
  std::string tok = h->substr(7);
  while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
  while (!tok.empty() && tok.back() == ' ') tok.pop_back();
  if (tok.empty()) return std::nullopt;
  return tok;
}

Denial invalid(std::string msg) { return deny(codes::kActionInvalid, std::move(msg)); }

}  // namespace

HttpRequest HttpRequest::make(std::string method, std::string_view target, std::string body) {
  HttpRequest r;
  r.method = std::move(method);
  r.body = std::move(body);
  const auto q = target.find('?');
  r.path = percent_decode(target.substr(0, q), false);
  if (q != std::string_view::npos) {
    std::string_view rest = target.substr(q + 1);
    while (!rest.empty()) {
      auto amp = rest.find('&');
      std::string_view pair = rest.substr(0, amp);
      if (!pair.empty()) {
        auto eq = pair.find('=');
        r.query.emplace_back(percent_decode(pair.substr(0, eq), true),
                             eq == std::string_view::npos ? std::string() : percent_decode(pair.substr(eq + 1), true));
      }
      if (amp == std::string_view::npos) break;
      rest.remove_prefix(amp + 1);
    }
  }
  return r;
}

HttpRequest& HttpRequest::header(std::string name, std::string value) {
  headers[lower(std::move(name))] = std::move(value);
  return *this;
}

std::optional<std::string> HttpRequest::header_value(std::string_view lower_name) const {
  auto it = headers.find(std::string(lower_name));
  if (it == headers.end()) return std::nullopt;
  return it->second;
}

HttpResponse envelope_response(int status, const Envelope& env) {
  HttpResponse r;
  r.status = status;
  r.headers["Content-Type"] = std::string(kJson);
  r.body = env.dump();
  return r;
}

HttpResponse error_response(const Denial& d) { return envelope_response(d.status(), wrap_error(d)); }

struct Runtime::Call {
  const HttpRequest& req;
  std::string audit_action;
  RequestContext ctx;
  AuditOrigin origin;
};

Runtime::Runtime(const Clock& clock, GatewayConfig cfg)
    : clock_(clock),
      cfg_(std::move(cfg)),
      audit_(clock),
      adapter_(date_of(clock.now())),
      credentials_(clock, audit_, demo::demo_scopes()),
      admission_(cfg_.admission),
      pipeline_(credentials_, audit_, clock, cfg_.pipeline) {
  demo::register_demo_tools(registry_, adapter_);
}

HttpResponse Runtime::handle(const HttpRequest& req) {
  try {
    return dispatch(req);
  } catch (const std::exception&) {
    // A defect, not a client error; still answered with a well-formed envelope.
    return envelope_response(500, wrap_error(codes::kActionInvalid, "internal error"));
  }
}

HttpResponse Runtime::dispatch(const HttpRequest& req) {
  std::string_view path = req.path;
  if (starts_with(path, kAgentPrefix) && (path.size() == kAgentPrefix.size() || path[kAgentPrefix.size()] == '/')) {
    return agent(req, path.substr(kAgentPrefix.size()));
  }
  if (starts_with(path, kAdminPrefix) && (path.size() == kAdminPrefix.size() || path[kAdminPrefix.size()] == '/')) {
    return admin(req, path.substr(kAdminPrefix.size()));
  }
  return error_response(route_unknown());
}

// ---------------------------------------------------------------------------
// Agent plane

void Runtime::audit_call(Call& call, AuditStatus status, std::optional<std::string> code, json details) {
  AuditEvent e;
  e.action = call.audit_action;
  e.status = status;
  e.code = std::move(code);
  if (call.ctx.auth) {
    e.app_id = call.ctx.auth->app.id;
    e.key_id = call.ctx.auth->key.id;
    e.actor_user_id = call.ctx.auth->actor_user_id;
  }
  e.request_id = call.origin.request_id;
  e.ip = call.origin.ip;
  e.user_agent = call.origin.user_agent;
  e.details = std::move(details);
  audit_.emit(std::move(e));
}

HttpResponse Runtime::denied(Call& call, const Decision& d) {
  audit_call(call, AuditStatus::Denied, d.code, json{{"predicate", d.failed_predicate_index}});
  HttpResponse r = error_response(d.to_denial());
  if (d.code == codes::kRateLimited && d.retry_after_seconds > 0) {
    r.headers["Retry-After"] = std::to_string(d.retry_after_seconds);
  }
  return r;
}

HttpResponse Runtime::failed(Call& call, const Denial& d) {
  audit_call(call, AuditStatus::Denied, d.code);
  return error_response(d);
}

HttpResponse Runtime::agent(const HttpRequest& req, std::string_view route) {
  const auto parts = split_path(route);
  std::string action;
  std::string draft_id;
  if (parts.size() == 1 && parts[0] == "manifest" && req.method == "GET") {
    action = "agent.manifest.get";
  } else if (parts.size() == 1 && parts[0] == "ledgers" && req.method == "GET") {
    action = "agent.ledger.list";
  } else if (parts.size() == 1 && parts[0] == "transactions" && req.method == "GET") {
    action = "agent.transaction.list";
  } else if (parts.size() == 1 && parts[0] == "preflight" && req.method == "POST") {
    action = "agent.action.preflight";
  } else if (parts.size() == 1 && parts[0] == "actions" && req.method == "POST") {
    action = "agent.action.submit";
  } else if (parts.size() == 2 && parts[0] == "drafts" && req.method == "GET") {
    action = "agent.draft.get";
    draft_id = std::string(parts[1]);
  } else {
    // Still authenticated and audited, so unknown paths cannot be probed anonymously.
    action = "agent.request.unknown";
  }

  Call call{req, action, {}, {}};
  call.ctx.ip = req.remote_ip;
  call.ctx.now = clock_.now();
  call.origin.ip = req.remote_ip;
  call.origin.user_agent = req.header_value("user-agent");
  call.origin.request_id = req.header_value("x-request-id");
  if (call.origin.request_id && call.origin.request_id->size() > 256) call.origin.request_id->resize(256);
  if (!call.origin.request_id) call.origin.request_id = new_id("req_");
  call.ctx.request_id = call.origin.request_id;

  if (auto tok = bearer(req)) {
    auto auth = credentials_.authenticate(*tok, call.ctx.now);
    if (auth) {
      call.ctx.auth = auth.value();
    } else {
      call.ctx.auth_denial = auth.denial();
    }
  }

  // Authn, Net and Rate run before anything reads the request body.
  if (auto d = evaluate(call.ctx, nullptr, admission_, adapter_); !d.allowed) return denied(call, d);

  if (action == "agent.request.unknown") return failed(call, route_unknown());
  if (action == "agent.manifest.get") return manifest(call);
  if (action == "agent.draft.get") return get_draft(call, draft_id);
  if (action == "agent.action.preflight") return preflight(call);
  if (action == "agent.action.submit") return actions(call);

  // Read surfaces map onto their registered tools; query parameters are the payload.
  const ToolDescriptor* tool = registry_.find(action == "agent.ledger.list" ? "ledger.list" : "transaction.list");
  json payload = json::object();
  for (const auto& [k, v] : req.query) {
    if (payload.contains(k)) return failed(call, invalid("duplicate query parameter: " + k));
    payload[k] = v;
  }
  return read_tool(call, *tool, std::move(payload));
}

HttpResponse Runtime::manifest(Call& call) {
  json m = registry_.build_manifest(call.ctx.auth->app);
  audit_call(call, AuditStatus::Success, std::nullopt, json{{"toolCount", m["tools"].size()}});
  return envelope_response(200, wrap_success(std::move(m)));
}

HttpResponse Runtime::read_tool(Call& call, const ToolDescriptor& tool, json payload) {
  call.ctx.tool_name = tool.name;
  call.ctx.payload = payload;
  if (auto d = evaluate(call.ctx, &tool, admission_, adapter_, Predicate::Scope); !d.allowed) return denied(call, d);

  const AuthContext& auth = *call.ctx.auth;
  if (tool.query_window) {
    // Materialize the bounds the policy check defaulted.
    const Date today = date_of(call.ctx.now);
    const auto& f = *tool.query_window;
    if (!payload.contains(f.end)) payload[f.end] = format_date(today);
    if (!payload.contains(f.start)) {
      const Date end = *parse_date(payload[f.end].get<std::string>());
      payload[f.start] =
          format_date(Date{std::chrono::sys_days{end} - std::chrono::days{auth.app.policy.max_query_window_days}});
    }
  }

  ExecutionContext ec{auth.actor_user_id, auth.app.tenant_id, call.ctx.now};
  json result;
  try {
    result = tool.execute_fn(ec, payload);
  } catch (const ToolError& e) {
    audit_call(call, AuditStatus::Failed, std::string(codes::kActionInvalid));
    return error_response(invalid(e.what()));
  }

  std::set<std::string> redacted;
  std::size_t count = 0;
  if (tool.record_collection && result.contains(*tool.record_collection)) {
    json& records = result[*tool.record_collection];
    count = records.size();
    for (auto& rec : records) {
      auto p = present(rec, auth.app.policy, tool.sensitive_paths);
      rec = std::move(p.value);
      redacted.insert(p.redacted_paths.begin(), p.redacted_paths.end());
    }
  } else {
    auto p = present(result, auth.app.policy, tool.sensitive_paths);
    result = std::move(p.value);
    redacted = std::move(p.redacted_paths);
    for (const auto& [k, v] : result.items()) {
      if (v.is_array()) count += v.size();
    }
  }
  result["redactedPaths"] = redacted;
  audit_call(call, AuditStatus::Success, std::nullopt, json{{"resultCount", count}, {"redactedPaths", redacted}});
  return envelope_response(200, wrap_success(std::move(result)));
}

HttpResponse Runtime::preflight(Call& call) {
  auto body = parse_body(call.req.body, cfg_.max_body_bytes, cfg_.max_json_depth);
  if (!body) return failed(call, body.denial());
  const json& b = body.value();
  if (!b.is_object()) return failed(call, invalid("request body must be a JSON object"));
  for (const auto& [k, v] : b.items()) {
    if (k != "action" && k != "payload") return failed(call, invalid("unknown field: " + k));
  }
  auto a = b.find("action");
  auto p = b.find("payload");
  if (a == b.end() || !a->is_string() || a->get_ref<const std::string&>().empty()) {
    return failed(call, invalid("action must be a non-empty string"));
  }
  if (p == b.end() || !p->is_object()) return failed(call, invalid("payload must be an object"));

  const std::string name = a->get<std::string>();
  const ToolDescriptor* tool = registry_.find(name);
  call.ctx.tool_name = name;
  call.ctx.payload = *p;
  call.ctx.action_surface = true;
  if (auto d = evaluate(call.ctx, tool, admission_, adapter_, Predicate::Scope); !d.allowed) return denied(call, d);
  if (tool->read_only) return failed(call, invalid("read-only tools have no preflight"));

  auto res = pipeline_.run_preflight(*call.ctx.auth, *tool, *p, call.origin);
  if (!res) return failed(call, res.denial());
  return envelope_response(200, wrap_success(res->to_json()));
}

HttpResponse Runtime::actions(Call& call) {
  auto body = parse_body(call.req.body, cfg_.max_body_bytes, cfg_.max_json_depth);
  if (!body) return failed(call, body.denial());
  auto parsed = ActionRequest::from_json(body.value());
  if (!parsed) return failed(call, parsed.denial());
  ActionRequest& req = parsed.value();
  if (req.request_id) {
    call.origin.request_id = req.request_id;
    call.ctx.request_id = req.request_id;
  }

  const ToolDescriptor* tool = registry_.find(req.action);
  call.ctx.tool_name = req.action;
  call.ctx.action_surface = true;
  call.ctx.payload = req.payload;
  if (!req.payload && req.preflight_id) call.ctx.payload = pipeline_.preflight_payload(*call.ctx.auth, *req.preflight_id);
  if (auto d = evaluate(call.ctx, tool, admission_, adapter_, Predicate::Scope); !d.allowed) return denied(call, d);
  if (tool->read_only) return failed(call, invalid("read-only tools are not actions"));
  if (!call.ctx.payload && !req.preflight_id) return failed(call, invalid("payload is required"));

  auto out = pipeline_.submit_action(*call.ctx.auth, *tool, req, call.origin);
  if (!out) return error_response(out.denial());  // the pipeline audited it
  return envelope_response(200, wrap_success(out->code(), out->to_json()));
}

HttpResponse Runtime::get_draft(Call& call, std::string_view id) {
  auto out = pipeline_.get_draft(id, *call.ctx.auth);
  if (!out) return failed(call, out.denial());
  audit_call(call, AuditStatus::Success, std::nullopt, json{{"draftId", out->draft.id}});
  return envelope_response(200, wrap_success(out->to_json()));
}

// ---------------------------------------------------------------------------
// Admin plane

HttpResponse Runtime::admin(const HttpRequest& req, std::string_view route) {
  const auto parts = split_path(route);
  const std::string& m = req.method;
  auto is = [&](std::initializer_list<std::string_view> want, std::string_view method) {
    if (parts.size() != want.size() || m != method) return false;
    std::size_t i = 0;
    for (auto w : want) {
      if (w != "*" && parts[i] != w) return false;
      ++i;
    }
    return true;
  };

  enum class R {
    None, CreateApp, ListApps, IssueKey, ListKeys, RevokeKey, RevokeApp, DisableApp, EnableApp,
    Policy, AutoExec, ListDrafts, Approve, Reject, Audit
  };
  R r = R::None;
  if (is({"apps"}, "POST")) r = R::CreateApp;
  else if (is({"apps"}, "GET")) r = R::ListApps;
  else if (is({"apps", "*", "keys"}, "POST")) r = R::IssueKey;
  else if (is({"apps", "*", "keys"}, "GET")) r = R::ListKeys;
  else if (is({"keys", "*", "revoke"}, "POST")) r = R::RevokeKey;
  else if (is({"apps", "*", "revoke"}, "POST")) r = R::RevokeApp;
  else if (is({"apps", "*", "disable"}, "POST")) r = R::DisableApp;
  else if (is({"apps", "*", "enable"}, "POST")) r = R::EnableApp;
  else if (is({"apps", "*", "policy"}, "PATCH")) r = R::Policy;
  else if (is({"apps", "*", "auto-execute"}, "PATCH")) r = R::AutoExec;
  else if (is({"drafts"}, "GET")) r = R::ListDrafts;
  else if (is({"drafts", "*", "approve"}, "POST")) r = R::Approve;
  else if (is({"drafts", "*", "reject"}, "POST")) r = R::Reject;
  else if (is({"audit"}, "GET")) r = R::Audit;
  if (r == R::None) return error_response(route_unknown());

  // Agent bearer tokens never satisfy this check: only the configured operator token does.
  const auto tok = bearer(req);
  if (cfg_.admin_token.empty() || !tok || !constant_time_equal(*tok, cfg_.admin_token)) {
    return error_response(deny(codes::kTokenInvalid, "admin authentication required"));
  }

  AuditOrigin origin;
  origin.performed_by_user_id = req.header_value("x-operator-id").value_or("operator");
  if (origin.performed_by_user_id->empty() || origin.performed_by_user_id->size() > 128) {
    return error_response(invalid("X-Operator-Id must be 1..128 characters"));
  }
  origin.ip = req.remote_ip;
  origin.user_agent = req.header_value("user-agent");
  origin.request_id = req.header_value("x-request-id").value_or(new_id("req_"));
  const std::string id = parts.size() > 1 ? std::string(parts[1]) : std::string();

  auto body_object = [&]() -> Result<json> {
    if (req.body.empty()) return json::object();
    auto b = parse_body(req.body, cfg_.max_body_bytes, cfg_.max_json_depth);
    if (!b) return b;
    if (!b.value().is_object()) return invalid("request body must be a JSON object");
    return b;
  };
  auto ok = [](json data) { return envelope_response(200, wrap_success(std::move(data))); };
  auto status_out = [&](const Status& st, json data) { return st ? ok(std::move(data)) : error_response(st.denial()); };

  try {
    switch (r) {
      case R::CreateApp: {
        auto b = body_object();
        if (!b) return error_response(b.denial());
        const json& j = b.value();
        NewApp spec;
        if (!j.contains("name") || !j["name"].is_string()) return error_response(invalid("name is required"));
        if (!j.contains("tenantId") || !j["tenantId"].is_string()) return error_response(invalid("tenantId is required"));
        spec.name = j["name"].get<std::string>();
        spec.tenant_id = j["tenantId"].get<std::string>();
        if (auto s = j.find("scopes"); s != j.end()) {
          if (!s->is_array()) return error_response(invalid("scopes must be an array"));
          for (const auto& v : *s) {
            if (!v.is_string()) return error_response(invalid("scopes must be strings"));
            spec.scopes.insert(v.get<std::string>());
          }
        }
        if (auto p = j.find("policy"); p != j.end()) spec.policy = Policy::from_json(*p);
        if (auto a = j.find("autoExecute"); a != j.end()) spec.auto_exec = AutoExecConfig::from_json(*a);
        if (auto s = j.find("serviceActorUserId"); s != j.end() && s->is_string()) {
          spec.service_actor_user_id = s->get<std::string>();
        }
        auto app = credentials_.create_app(spec, origin);
        return app ? ok(app->to_json()) : error_response(app.denial());
      }
      case R::ListApps: {
        json apps = json::array();
        for (const auto& a : credentials_.list_apps()) apps.push_back(a.to_json());
        return ok(json{{"apps", apps}});
      }
      case R::IssueKey: {
        auto b = body_object();
        if (!b) return error_response(b.denial());
        std::optional<Timestamp> exp;
        if (auto e = b.value().find("expiresAt"); e != b.value().end() && !e->is_null()) {
          if (!e->is_string() || !parse_timestamp(e->get<std::string>())) {
            return error_response(invalid("expiresAt must be an RFC 3339 UTC timestamp"));
          }
          exp = parse_timestamp(e->get<std::string>());
        }
        auto issued = credentials_.issue_key(id, exp, origin);
        if (!issued) return error_response(issued.denial());
        // The only response that ever carries a secret; it is not retained.
        return ok(json{{"key", issued->key.to_json()}, {"secret", issued->secret}});
      }
      case R::ListKeys: {
        if (!credentials_.find_app(id)) {
          Denial d = deny(codes::kActionInvalid, "app not found");
          d.http_status = 404;
          return error_response(d);
        }
        json keys = json::array();
        for (const auto& k : credentials_.list_keys(id)) keys.push_back(k.to_json());
        return ok(json{{"keys", keys}});
      }
      case R::RevokeKey: return status_out(credentials_.revoke_key(id, origin), json{{"keyId", id}, {"status", "revoked"}});
      case R::RevokeApp: return status_out(credentials_.revoke_app(id, origin), json{{"appId", id}, {"status", "revoked"}});
      case R::DisableApp:
        return status_out(credentials_.disable_app(id, origin), json{{"appId", id}, {"status", "disabled"}});
      case R::EnableApp: return status_out(credentials_.enable_app(id, origin), json{{"appId", id}, {"status", "active"}});
      case R::Policy: {
        auto b = body_object();
        if (!b) return error_response(b.denial());
        auto app = credentials_.update_policy(id, Policy::from_json(b.value()), origin);
        return app ? ok(app->to_json()) : error_response(app.denial());
      }
      case R::AutoExec: {
        auto b = body_object();
        if (!b) return error_response(b.denial());
        auto app = credentials_.update_auto_exec(id, AutoExecConfig::from_json(b.value()), origin);
        return app ? ok(app->to_json()) : error_response(app.denial());
      }
      case R::ListDrafts: {
        std::optional<DraftStatus> status;
        for (const auto& [k, v] : req.query) {
          if (k != "status") return error_response(invalid("unknown query parameter: " + k));
          status = parse_draft_status(v);
          if (!status) return error_response(invalid("unknown draft status"));
        }
        json drafts = json::array();
        for (const auto& d : pipeline_.list_drafts(status)) drafts.push_back(d.to_json());
        return ok(json{{"drafts", drafts}});
      }
      case R::Approve: {
        auto out = pipeline_.approve_draft(id, *origin.performed_by_user_id, registry_, origin);
        if (!out) return error_response(out.denial());
        return envelope_response(200, wrap_success(out->code(), out->to_json()));
      }
      case R::Reject: {
        auto d = pipeline_.reject_draft(id, *origin.performed_by_user_id, origin);
        return d ? ok(json{{"draft", d->to_json()}}) : error_response(d.denial());
      }
      case R::Audit: {
        AuditFilter f;
        bool jsonl = false;
        for (const auto& [k, v] : req.query) {
          if (k == "action") f.action = v;
          else if (k == "appId") f.app_id = v;
          else if (k == "code") f.code = v;
          else if (k == "status") {
            f.status = parse_audit_status(v);
            if (!f.status) return error_response(invalid("unknown audit status"));
          } else if (k == "since") {
            f.since = parse_timestamp(v);
            if (!f.since) return error_response(invalid("since must be an RFC 3339 UTC timestamp"));
          } else if (k == "limit") {
            std::size_t n = 0;
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
            if (ec != std::errc() || p != v.data() + v.size() || n < 1 || n > 10000) {
              return error_response(invalid("limit must be an integer in 1..10000"));
            }
            f.limit = n;
          } else if (k == "format") {
            if (v != "jsonl" && v != "json") return error_response(invalid("format must be json or jsonl"));
            jsonl = v == "jsonl";
          } else {
            return error_response(invalid("unknown query parameter: " + k));
          }
        }
        if (jsonl) return ok(json{{"format", "jsonl"}, {"jsonl", audit_.export_jsonl()}});
        json events = json::array();
        for (const auto& e : audit_.list(f)) {
          events.push_back(json::parse(e.to_json().dump(-1, ' ', false, json::error_handler_t::replace)));
        }
        return ok(json{{"events", events}});
      }
      case R::None: break;
    }
  } catch (const std::invalid_argument& e) {
    return error_response(invalid(e.what()));
  }
  return error_response(route_unknown());
}

}  // namespace openport
