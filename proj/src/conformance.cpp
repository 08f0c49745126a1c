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

#include "openport/conformance.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "openport/canonical.hpp"

namespace openport::conformance {

namespace {

constexpr const char* kUserAgent = "openport-conform/0.1";

HttpRequest request(const std::string& method, const std::string& target, const std::string& token,
                    std::string body = {}) {
  HttpRequest r = HttpRequest::make(method, target, std::move(body));
  if (!token.empty()) r.header("Authorization", "Bearer " + token);
  r.header("User-Agent", kUserAgent);
  if (method != "GET") r.header("Content-Type", "application/json");
  return r;
}

// Lenient read of any JSON body, used to report what a non-conforming server sent.
json loose(const HttpResponse& r) {
  auto j = json::parse(r.body, nullptr, false);
  return j.is_discarded() ? json() : j;
}

std::string code_of(const HttpResponse& r) {
  const json j = loose(r);
  return j.is_object() && j.contains("code") && j["code"].is_string() ? j["code"].get<std::string>() : "";
}

std::string observe(const HttpResponse& r) {
  std::string s = "HTTP " + std::to_string(r.status);
  if (auto c = code_of(r); !c.empty()) s += " " + c;
  return s;
}

std::vector<std::string> string_list(const json& j, const char* field) {
  std::vector<std::string> out;
  if (!j.is_array()) throw std::invalid_argument(std::string(field) + " must be an array of strings");
  for (const auto& v : j) {
    if (!v.is_string()) throw std::invalid_argument(std::string(field) + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
  return s;
}

json fixture(const ConformanceProfile& p, const char* name, json fallback) {
  auto it = p.fixtures.find(name);
  return it == p.fixtures.end() ? fallback : *it;
}

const json kDefaultPreflight = {{"action", "transaction.hard_delete"}, {"payload", {{"transactionId", "txn_org1_a_01"}}}};

class Runner {
 public:
  Runner(const ConformanceProfile& p, const Transport& t, const std::string& token)
      : profile_(p), transport_(t), token_(token) {}

  ConformanceReport run() {
    report_.profile_name = profile_.name;
    std::string draft_id = "drf_0000000000000000";
    // The draft round trip runs first so {id} endpoints have a real id to probe.
    const bool wants_draft = has_check("draft-roundtrip") || needs_id();
    std::optional<std::string> created;
    if (wants_draft) created = draft_roundtrip(has_check("draft-roundtrip"));
    if (created) draft_id = *created;

    for (const auto& ep : profile_.required_endpoints) endpoint(ep, draft_id);
    envelope_success();
    envelope_error();
    for (const auto& m : profile_.security_minimums) security(m);
    for (const auto& c : profile_.checks) {
      if (c == "draft-roundtrip") continue;
      if (c == "preflight-high-risk") preflight_high_risk();
      else if (c == "unknown-action-hidden") unknown_action_hidden();
      else if (c == "query-window-denied") query_window_denied();
      else if (c == "execute-fails-closed") execute_fails_closed();
      else if (c == "fuzz-no-5xx") fuzz();
      else if (c == "rate-limit-retry-after") continue;  // last: it spends the budget
      else add("check:" + c, false, "not implemented by this runner", "known check");
    }
    if (has_check("rate-limit-retry-after")) rate_limit();
    return std::move(report_);
  }

 private:
  bool has_check(const std::string& id) const {
    return std::find(profile_.checks.begin(), profile_.checks.end(), id) != profile_.checks.end();
  }
  bool needs_id() const {
    for (const auto& ep : profile_.required_endpoints) {
      if (ep.path.find("{id}") != std::string::npos) return true;
    }
    return false;
  }

  HttpResponse send(const HttpRequest& r) { return transport_(r); }

  void add(std::string id, bool pass, std::string observed, std::string expected) {
    report_.checks.push_back({std::move(id), pass, std::move(observed), std::move(expected)});
  }

  std::string draft_body(bool execute) {
    json b = fixture(profile_, "draft", kDefaultPreflight);
    if (execute) {
      // Without these a high-risk tool can never pass the eligibility check.
      for (const char* f : {"justification", "idempotencyKey", "preflightHash", "preflightId", "forceDraft"}) b.erase(f);
      b["execute"] = true;
    } else {
      b["forceDraft"] = true;
    }
    return b.dump();
  }

  std::optional<std::string> draft_roundtrip(bool record) {
    const auto r = send(request("POST", "/api/agent/v1/actions", token_, draft_body(false)));
    const auto env = Envelope::parse(r.body);
    std::optional<std::string> id;
    bool created = r.status == 200 && env && env->ok && env->data.value("kind", "") == "draft" &&
                   env->data.contains("draft") && env->data["draft"].value("status", "") == "draft" &&
                   !env->data.contains("execution");
    if (created) id = env->data["draft"].value("id", "");
    if (!record) return id;
    if (!created || !id || id->empty()) {
      add("check:draft-roundtrip", false, observe(r), "200 agent.ok kind=draft status=draft, no execution");
      return id;
    }
    const auto g = send(request("GET", "/api/agent/v1/drafts/" + *id, token_));
    const auto genv = Envelope::parse(g.body);
    const bool same = g.status == 200 && genv && genv->ok && genv->data.contains("draft") &&
                      genv->data["draft"].value("id", "") == *id && genv->data["draft"].value("status", "") == "draft";
    add("check:draft-roundtrip", same, observe(g), "GET /drafts/{id} returns the same pending draft");
    return id;
  }

  void endpoint(const EndpointSpec& ep, const std::string& draft_id) {
    std::string target = replace_all(ep.path, "{id}", draft_id);
    const json queries = fixture(profile_, "endpointQueries", json::object());
    if (queries.contains(ep.path) && queries[ep.path].is_string()) target += queries[ep.path].get<std::string>();
    std::string body;
    if (ep.method != "GET") {
      if (ep.path == "/api/agent/v1/preflight") {
        body = fixture(profile_, "preflight", kDefaultPreflight).dump();
      } else if (ep.path == "/api/agent/v1/actions") {
        body = draft_body(false);
      } else {
        body = "{}";
      }
    }
    const auto r = send(request(ep.method, target, token_, body));
    const auto env = Envelope::parse(r.body);
    const bool present = r.status != 0 && r.status < 500 && env && !(r.status == 404 && env->code == codes::kActionUnknown);
    add("endpoint:" + ep.method + " " + ep.path, present, observe(r), "envelope response, route recognized");
  }

  void fields(const std::string& id, const HttpResponse& r, const std::vector<std::string>& required, bool ok_value) {
    const json j = loose(r);
    std::string missing;
    if (!j.is_object()) missing = "<not a JSON object>";
    for (const auto& f : required) {
      if (j.is_object() && !j.contains(f)) missing += (missing.empty() ? "" : ",") + f;
    }
    const bool strict = Envelope::parse(r.body).has_value();
    const bool okv = j.is_object() && j.contains("ok") && j["ok"] == ok_value;
    std::string obs = observe(r);
    if (!missing.empty()) obs += " missing " + missing;
    if (!strict) obs += " (not a strict envelope)";
    std::string exp = "fields";
    for (const auto& f : required) exp += " " + f;
    add(id, missing.empty() && strict && okv, obs, exp);
  }

  void envelope_success() {
    fields("envelope:success", send(request("GET", "/api/agent/v1/manifest", token_)), profile_.success_fields, true);
  }
  void envelope_error() {
    fields("envelope:error", send(request("GET", "/api/agent/v1/manifest", "")), profile_.error_fields, false);
  }

  void security(const std::string& id) {
    if (id == "unauthenticated-manifest-denied") {
      const auto r = send(request("GET", "/api/agent/v1/manifest", ""));
      add("security:" + id, r.status == 401 && code_of(r) == codes::kTokenInvalid, observe(r),
          "HTTP 401 agent.token_invalid");
    } else if (id == "invalid-token-manifest-denied") {
      const auto r = send(request("GET", "/api/agent/v1/manifest", "opk_conformanceProbeNotARealToken000000000000"));
      add("security:" + id, r.status == 401 && code_of(r) == codes::kTokenInvalid, observe(r),
          "HTTP 401 agent.token_invalid");
    } else if (id == "admin-rejects-agent-token") {
      const auto r = send(request("GET", "/api/agent-admin/v1/drafts?status=draft", token_));
      add("security:" + id, r.status == 401, observe(r), "HTTP 401 on the admin plane");
    } else {
      add("security:" + id, false, "not implemented by this runner", "known security minimum");
    }
  }

  void preflight_high_risk() {
    const std::string body = fixture(profile_, "preflight", kDefaultPreflight).dump();
    const auto a = send(request("POST", "/api/agent/v1/preflight", token_, body));
    const auto b = send(request("POST", "/api/agent/v1/preflight", token_, body));
    const auto ea = Envelope::parse(a.body);
    const auto eb = Envelope::parse(b.body);
    const auto hash = [](const std::optional<Envelope>& e) {
      return e && e->ok && e->data.contains("impactHash") && e->data["impactHash"].is_string()
                 ? e->data["impactHash"].get<std::string>()
                 : std::string();
    };
    const bool shape = a.status == 200 && Digest::is_valid_hex(hash(ea)) && ea->data.contains("preflightId") &&
                       ea->data["preflightId"].is_string() && !ea->data["preflightId"].get<std::string>().empty();
    add("check:preflight-high-risk", shape && hash(ea) == hash(eb), observe(a) + " impactHash=" + hash(ea),
        "64-hex impactHash, preflightId, deterministic across calls");
  }

  void unknown_action_hidden() {
    const auto r = send(request("POST", "/api/agent/v1/actions", token_,
                                json{{"action", "conformance.no_such_tool"}, {"payload", json::object()}}.dump()));
    add("check:unknown-action-hidden", r.status == 404 && code_of(r) == codes::kActionUnknown, observe(r),
        "HTTP 404 agent.action_unknown");
  }

  void query_window_denied() {
    const std::string q = fixture(profile_, "windowViolationQuery", "?ledgerId=led_org1_a&start=1970-01-01").get<std::string>();
    const auto r = send(request("GET", "/api/agent/v1/transactions" + q, token_));
    add("check:query-window-denied", r.status == 403 && code_of(r) == codes::kPolicyDenied, observe(r),
        "HTTP 403 agent.policy_denied");
  }

  void execute_fails_closed() {
    const auto r = send(request("POST", "/api/agent/v1/actions", token_, draft_body(true)));
    const auto env = Envelope::parse(r.body);
    const bool ok = r.status == 200 && env && env->ok && env->data.value("kind", "") == "draft" &&
                    env->data.contains("denialCode") && !env->data.contains("execution");
    add("check:execute-fails-closed", ok, observe(r), "draft with denialCode, no execution");
  }

  void fuzz() {
    const auto seed = fixture(profile_, "fuzzSeed", 1).get<std::uint64_t>();
    const auto rep = run_fuzz(transport_, token_, 80, seed);
    add("check:fuzz-no-5xx", rep.pass(),
        std::to_string(rep.count_5xx) + " 5xx, " + std::to_string(rep.count_envelope_violations) + " envelope violations",
        "0 5xx, 0 envelope violations over 80 requests");
  }

  void rate_limit() {
    HttpResponse last;
    int sent = 0;
    for (; sent < 2000; ++sent) {
      last = send(request("GET", "/api/agent/v1/manifest", token_));
      if (last.status == 429 || last.status == 0) break;
    }
    const bool limited = last.status == 429 && code_of(last) == codes::kRateLimited && last.headers.count("Retry-After");
    const auto w = send(request("POST", "/api/agent/v1/actions", token_, draft_body(false)));
    const auto env = Envelope::parse(w.body);
    const bool no_draft = w.status == 429 && env && !env->ok;
    add("check:rate-limit-retry-after", limited && no_draft,
        observe(last) + " after " + std::to_string(sent) + " requests; write during limit " + observe(w),
        "429 agent.rate_limited with Retry-After; denied write allocates no draft");
  }

  const ConformanceProfile& profile_;
  const Transport& transport_;
  std::string token_;
  ConformanceReport report_;
};

}  // namespace

ConformanceProfile ConformanceProfile::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("profile must be a JSON object");
  ConformanceProfile p;
  if (!j.contains("name") || !j["name"].is_string()) throw std::invalid_argument("profile name is required");
  p.name = j["name"].get<std::string>();
  if (auto e = j.find("enabled"); e != j.end()) {
    if (!e->is_boolean()) throw std::invalid_argument("enabled must be a boolean");
    p.enabled = e->get<bool>();
  }
  if (auto eps = j.find("requiredEndpoints"); eps != j.end()) {
    if (!eps->is_array()) throw std::invalid_argument("requiredEndpoints must be an array");
    for (const auto& ep : *eps) {
      if (!ep.is_object() || !ep.contains("method") || !ep.contains("path") || !ep["method"].is_string() ||
          !ep["path"].is_string()) {
        throw std::invalid_argument("requiredEndpoints entries need method and path strings");
      }
      p.required_endpoints.push_back({ep["method"].get<std::string>(), ep["path"].get<std::string>()});
    }
  }
  const json env = j.value("envelope", json::object());
  p.success_fields = string_list(env.value("success", json::object()).value("requiredFields", json::array({"ok", "code", "data"})),
                                 "envelope.success.requiredFields");
  p.error_fields = string_list(env.value("error", json::object()).value("requiredFields", json::array({"ok", "code", "message"})),
                               "envelope.error.requiredFields");
  if (auto s = j.find("securityMinimums"); s != j.end()) p.security_minimums = string_list(*s, "securityMinimums");
  if (auto c = j.find("checks"); c != j.end()) p.checks = string_list(*c, "checks");
  if (auto f = j.find("fixtures"); f != j.end()) {
    if (!f->is_object()) throw std::invalid_argument("fixtures must be an object");
    p.fixtures = *f;
  }
  return p;
}

ConformanceProfile ConformanceProfile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("profile is not valid JSON: " + path);
  return from_json(j);
}

bool ConformanceReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

json ConformanceReport::to_json() const {
  json cs = json::array();
  for (const auto& c : checks) {
    cs.push_back({{"id", c.id}, {"pass", c.pass}, {"observed", c.observed}, {"expected", c.expected}});
  }
  return json{{"profileName", profile_name}, {"pass", pass()}, {"checks", cs}};
}

std::string ConformanceReport::summary() const {
  std::ostringstream out;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.pass;
    out << (c.pass ? "PASS " : "FAIL ") << c.id << "  observed: " << c.observed;
    if (!c.pass) out << "  expected: " << c.expected;
    out << '\n';
  }
  out << profile_name << ": " << passed << "/" << checks.size() << " checks passed, " << (pass() ? "PASS" : "FAIL")
      << '\n';
  return out.str();
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> ids{"unauthenticated-manifest-denied", "invalid-token-manifest-denied",
                                            "admin-rejects-agent-token",       "preflight-high-risk",
                                            "draft-roundtrip",                 "unknown-action-hidden",
                                            "query-window-denied",             "execute-fails-closed",
                                            "fuzz-no-5xx",                     "rate-limit-retry-after"};
  return ids;
}

ConformanceReport run_profile(const ConformanceProfile& profile, const Transport& transport,
                              const std::string& agent_token) {
  return Runner(profile, transport, agent_token).run();
}

// ---------------------------------------------------------------------------
// Fuzzing

namespace {

const std::vector<std::string>& fuzz_ops() {
  static const std::vector<std::string> ops{
      "truncated-body", "wrong-type",     "missing-field",     "deep-nesting",      "oversized-string",
      "invalid-date",   "invalid-utf8",   "unknown-field",     "random-bytes",      "duplicate-query",
      "bad-digest",     "nested-garbage", "non-object-body",   "extreme-number",    "bad-draft-id",
      "bad-preflight-id"};
  return ops;
}

json base_action() {
  return json{{"action", "transaction.create"},
              {"payload", {{"ledgerId", "led_org1_a"}, {"date", "2026-01-01"}, {"amountMinor", 100}, {"memo", "fuzz"}}},
              {"forceDraft", true}};
}

FuzzCase make_case(const std::string& op, std::mt19937_64& rng, const std::string& token) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const std::string actions = "/api/agent/v1/actions";
  const std::string pre = "/api/agent/v1/preflight";
  FuzzCase c{op, {}};
  auto post = [&](const std::string& path, std::string body) { c.request = request("POST", path, token, std::move(body)); };
  auto get = [&](const std::string& target) { c.request = request("GET", target, token); };

  if (op == "truncated-body") {
    const std::string full = pick(2) ? base_action().dump() : kDefaultPreflight.dump();
    post(pick(2) ? actions : pre, full.substr(0, 1 + pick(full.size() - 1)));
  } else if (op == "wrong-type") {
    json b = base_action();
    const char* fields[] = {"action", "payload", "forceDraft", "execute", "idempotencyKey", "justification", "preflightHash"};
    const json wrong[] = {123, json::array({1, 2}), json{{"x", 1}}, "text", true, 1.5};
    const std::string f = fields[pick(7)];
    json v = wrong[pick(6)];
    const bool is_string_field = f == "action" || f == "idempotencyKey" || f == "justification" || f == "preflightHash";
    if (is_string_field && v.is_string()) v = 42;
    if ((f == "forceDraft" || f == "execute") && v.is_boolean()) v = "yes";
    if (f == "payload" && v.is_object()) v = "not-an-object";
    b[f] = v;
    post(actions, b.dump());
  } else if (op == "missing-field") {
    switch (pick(3)) {
      case 0: {
        json b = base_action();
        b.erase("action");
        post(actions, b.dump());
        break;
      }
      case 1: post(pre, json{{"action", "transaction.hard_delete"}}.dump()); break;
      default: get("/api/agent/v1/transactions"); break;
    }
  } else if (op == "deep-nesting") {
    const std::size_t depth = 65 + pick(3000);
    post(pick(2) ? actions : pre,
         R"({"action":"transaction.create","payload":{"memo":)" + std::string(depth, '[') + std::string(depth, ']') + "}}");
  } else if (op == "oversized-string") {
    json b = base_action();
    if (pick(2)) {
      b["payload"]["memo"] = std::string(300 * 1024, 'm');
    } else {
      b["justification"] = std::string(10000 + pick(100000), 'j');
    }
    post(actions, b.dump());
  } else if (op == "invalid-date") {
    const char* bad[] = {"2026-13-01", "2026-02-30", "yesterday", "", "2026-1-1", "99999-01-01",
                         "2026-01-01T00:00:00Z", "0000-00-00"};
    const std::string d = bad[pick(8)];
    if (pick(2)) {
      get("/api/agent/v1/transactions?ledgerId=led_org1_a&" + std::string(pick(2) ? "start=" : "end=") + d);
    } else {
      json b = base_action();
      b["payload"]["date"] = d;
      post(actions, b.dump());
    }
  } else if (op == "invalid-utf8") {
    if (pick(2)) {
      post(actions, R"({"action":"transaction.create\xff\xfe","payload":{}})");
    } else {
      get("/api/agent/v1/transactions?ledgerId=%FF%FE%80");
    }
  } else if (op == "unknown-field") {
    json b = base_action();
    if (pick(2)) {
      b["tenantId"] = "org2";
    } else {
      b["payload"]["tenantId"] = "org2";
    }
    post(actions, b.dump());
  } else if (op == "random-bytes") {
    std::string body(1 + pick(512), '\0');
    for (auto& ch : body) ch = static_cast<char>(rng() & 0xff);
    post(pick(2) ? actions : pre, body);
  } else if (op == "duplicate-query") {
    if (pick(2)) {
      get("/api/agent/v1/transactions?ledgerId=led_org1_a&ledgerId=led_org2_a");
    } else {
      get("/api/agent/v1/ledgers?tenantId=org2");
    }
  } else if (op == "bad-digest") {
    json b = base_action();
    const char* bad[] = {"XYZ", "ABCDEF0123456789ABCDEF0123456789ABCDEF0123456789ABCDEF0123456789",
                         "0123456789abcdef0123456789abcdef0123456789abcdef0123456789abcde", ""};
    b[pick(2) ? "preflightHash" : "stateWitnessHash"] = bad[pick(4)];
    post(actions, b.dump());
  } else if (op == "nested-garbage") {
    const char* atoms[] = {"{\"a\":", "[", "{", "\"x\",", "1e999,", "nul", "]", "}", ",,", ":"};
    std::string body;
    while (body.size() < 64 * 1024) body += atoms[pick(10)];
    post(pick(2) ? actions : pre, body);
  } else if (op == "non-object-body") {
    const char* bodies[] = {"[]", "\"text\"", "123", "null", "true", "", "   "};
    post(pick(2) ? actions : pre, bodies[pick(7)]);
  } else if (op == "extreme-number") {
    const char* nums[] = {"1e400", "-1e400", "1.5", "1e308", "NaN", "123456789012345678901234567890"};
    post(actions, R"({"action":"transaction.create","forceDraft":true,"payload":{"ledgerId":"led_org1_a","date":"2026-01-01","amountMinor":)" +
                      std::string(nums[pick(6)]) + "}}");
  } else if (op == "bad-draft-id") {
    const char* ids[] = {"%00", "..%2F..%2Fetc", "drf_%FF", "%20"};
    std::string id = pick(2) ? ids[pick(4)] : std::string(5000 + pick(5000), 'd');
    get("/api/agent/v1/drafts/" + id);
  } else {  // bad-preflight-id
    post(actions, json{{"action", "transaction.hard_delete"}, {"preflightId", "pfl_" + std::to_string(rng())},
                       {"execute", true}}
                      .dump());
  }
  c.request.remote_ip = "127.0.0.1";
  return c;
}

}  // namespace

std::vector<FuzzCase> fuzz_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FuzzCase> out;
  const auto& ops = fuzz_ops();
  for (std::size_t i = 0; i < count; ++i) out.push_back(make_case(ops[i % ops.size()], rng, ""));
  return out;
}

json FuzzReport::to_json() const {
  return json{{"total", total},
              {"count5xx", count_5xx},
              {"countEnvelopeViolations", count_envelope_violations},
              {"statuses", statuses},
              {"failures", failures},
              {"pass", pass()}};
}

FuzzReport run_fuzz(const Transport& transport, const std::string& agent_token, std::size_t count, std::uint64_t seed) {
  FuzzReport rep;
  for (auto& c : fuzz_corpus(count, seed)) {
    c.request.header("Authorization", "Bearer " + agent_token);
    const auto r = transport(c.request);
    ++rep.total;
    rep.statuses.push_back(r.status);
    const bool five = r.status >= 500 || r.status == 0;
    const bool bad_env = !Envelope::parse(r.body);
    rep.count_5xx += five;
    rep.count_envelope_violations += bad_env;
    if (five || bad_env) rep.failures.push_back(c.op + ": " + observe(r));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Local target and regressions

LocalTarget::LocalTarget(std::shared_ptr<const Clock> clock, GatewayConfig cfg) : clock_(std::move(clock)) {
  if (!clock_) clock_ = std::make_shared<SystemClock>();
  if (cfg.admin_token.empty()) cfg.admin_token = kAdminToken;
  runtime_ = std::make_unique<Runtime>(*clock_, std::move(cfg));
  NewApp spec;
  spec.name = "conformance";
  spec.tenant_id = "org1";
  spec.scopes = demo::demo_scopes();
  auto app = runtime_->credentials().create_app(spec);
  if (!app) throw std::runtime_error("local target: " + app.denial().message);
  app_id_ = app->id;
  auto key = runtime_->credentials().issue_key(app_id_, std::nullopt);
  if (!key) throw std::runtime_error("local target: " + key.denial().message);
  token_ = key->secret;
}

Transport LocalTarget::transport() {
  Runtime* rt = runtime_.get();
  return [rt](const HttpRequest& r) { return rt->handle(r); };
}

std::vector<CheckResult> run_reason_code_regressions() {
  std::vector<CheckResult> out;
  const std::string admin = std::string("Bearer ") + LocalTarget::kAdminToken;
  auto admin_req = [&](const std::string& method, const std::string& target, const json& body) {
    HttpRequest r = HttpRequest::make(method, target, body.is_null() ? "" : body.dump());
    r.header("Authorization", admin).header("X-Operator-Id", "gate");
    return r;
  };

  {
    LocalTarget t;
    auto key = t.runtime().credentials().list_keys(t.app_id()).front();
    t.runtime().handle(admin_req("POST", "/api/agent-admin/v1/keys/" + key.id + "/revoke", nullptr));
    const auto r = t.runtime().handle(request("GET", "/api/agent/v1/manifest", t.agent_token()));
    out.push_back({"agent.token_invalid: revoked key on /manifest", r.status == 401 && code_of(r) == codes::kTokenInvalid,
                   observe(r), "HTTP 401 agent.token_invalid"});
  }
  {
    LocalTarget t;
    t.runtime().handle(admin_req("PATCH", "/api/agent-admin/v1/apps/" + t.app_id() + "/policy",
                                 json{{"ipAllowlist", {"203.0.113.0/24"}}}));
    HttpRequest req = request("GET", "/api/agent/v1/manifest", t.agent_token());
    req.remote_ip = "198.51.100.1";
    const auto r = t.runtime().handle(req);
    out.push_back({"agent.policy_denied: client IP outside allowlist",
                   r.status == 403 && code_of(r) == codes::kPolicyDenied, observe(r), "HTTP 403 agent.policy_denied"});
  }
  {
    LocalTarget t;
    t.runtime().handle(admin_req("PATCH", "/api/agent-admin/v1/apps/" + t.app_id() + "/policy",
                                 json{{"maxQueryWindowDays", 30}}));
    const Date today = date_of(t.runtime().clock().now());
    const std::string start = format_date(Date{std::chrono::sys_days{today} - std::chrono::days{40}});
    const auto r = t.runtime().handle(request(
        "GET", "/api/agent/v1/transactions?ledgerId=led_org1_a&start=" + start + "&end=" + format_date(today),
        t.agent_token()));
    out.push_back({"agent.policy_denied: 40-day window with maxQueryWindowDays=30",
                   r.status == 403 && code_of(r) == codes::kPolicyDenied, observe(r), "HTTP 403 agent.policy_denied"});
  }
  {
    LocalTarget t;
    t.runtime().handle(admin_req("PATCH", "/api/agent-admin/v1/apps/" + t.app_id() + "/auto-execute",
                                 json{{"enabled", true}, {"allowList", {"transaction.hard_delete"}}}));
    const auto p = t.runtime().handle(request("POST", "/api/agent/v1/preflight", t.agent_token(), kDefaultPreflight.dump()));
    const auto pe = Envelope::parse(p.body);
    json body = kDefaultPreflight;
    body["execute"] = true;
    body["justification"] = "duplicate entry";
    if (pe && pe->ok) body["preflightHash"] = pe->data.value("impactHash", "");
    const auto r = t.runtime().handle(request("POST", "/api/agent/v1/actions", t.agent_token(), body.dump()));
    const auto env = Envelope::parse(r.body);
    const bool hit = r.status == 200 && env && env->data.value("denialCode", "") == codes::kIdempotencyRequired &&
                     !env->data.contains("execution") && t.runtime().pipeline().execution_count() == 0;
    out.push_back({"agent.idempotency_required: high-risk execute without idempotencyKey", hit,
                   observe(r) + (env && env->data.contains("denialCode") ? " denialCode=" + env->data["denialCode"].get<std::string>() : ""),
                   "draft with denialCode agent.idempotency_required and no execution"});
  }
  return out;
}

}  // namespace openport::conformance
