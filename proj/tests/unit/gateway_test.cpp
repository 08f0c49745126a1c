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

#include <random>

#include "doctest.h"
#include "harness.hpp"
#include "openport/canonical.hpp"

using namespace openport;
using namespace openport::testing;

namespace {
const std::string A = "/api/agent/v1";
const json kDelete{{"action", "transaction.hard_delete"}, {"payload", {{"transactionId", "txn_org1_a_01"}}}};
}  // namespace

TEST_CASE("HttpRequest::make splits and decodes the target") {
  const auto r = HttpRequest::make("GET", "/api/agent/v1/transactions?ledgerId=led%5Forg1_a&start=2026-01-01&x=a+b");
  CHECK(r.path == "/api/agent/v1/transactions");
  REQUIRE(r.query.size() == 3);
  CHECK(r.query[0] == std::pair<std::string, std::string>{"ledgerId", "led_org1_a"});
  CHECK(r.query[2].second == "a b");
}

TEST_CASE("discovery requires a credential") {
  Harness h;
  const auto r = h.call("GET", A + "/manifest", "");
  CHECK(r.status == 401);
  CHECK(code_of(r) == "agent.token_invalid");
  REQUIRE(Envelope::parse(r.body));
  CHECK(h.call("GET", A + "/manifest", "opk_bogus").status == 401);
  const auto ev = h.rt.audit().snapshot().back();
  CHECK(ev.action == "agent.manifest.get");
  CHECK(ev.status == AuditStatus::Denied);
  CHECK_FALSE(ev.app_id);
}

TEST_CASE("manifest reflects scopes") {
  Harness h;
  const auto low = h.agent({"ledger.read"});
  const auto r = h.call("GET", A + "/manifest", low.token);
  REQUIRE(r.status == 200);
  CHECK(code_of(r) == "agent.ok");
  const auto d = data_of(r);
  CHECK(d["integration"]["appId"] == low.app_id);
  CHECK(d["tools"].size() == 1);
  CHECK(r.body.find("hard_delete") == std::string::npos);

  const auto full = h.agent();
  CHECK(data_of(h.call("GET", A + "/manifest", full.token))["tools"].size() == 5);
}

TEST_CASE("reads") {
  Harness h;
  const auto ag = h.agent();
  auto r = h.call("GET", A + "/ledgers", ag.token);
  REQUIRE(r.status == 200);
  CHECK(data_of(r)["ledgers"].size() == 2);
  const auto ev = h.rt.audit().snapshot().back();
  CHECK(ev.action == "agent.ledger.list");
  CHECK(ev.details["resultCount"] == 2);

  r = h.call("GET", A + "/transactions?ledgerId=led_org1_a", ag.token);
  REQUIRE(r.status == 200);
  CHECK(data_of(r)["transactions"].size() == 8);  // the default window is the last 90 days
  CHECK(data_of(r)["redactedPaths"] == json::array());

  r = h.call("GET", A + "/transactions?ledgerId=led_org1_a&start=2025-11-01&end=2026-03-15", ag.token);
  CHECK(r.status == 403);
  CHECK(code_of(r) == "agent.policy_denied");

  r = h.call("GET", A + "/transactions?ledgerId=led_org2_a", ag.token);
  CHECK(r.status == 403);
  CHECK(code_of(r) == "agent.forbidden");
  CHECK(code_of(h.call("GET", A + "/transactions?ledgerId=led_nope", ag.token)) == "agent.forbidden");

  CHECK(code_of(h.call("GET", A + "/transactions?ledgerId=led_org1_a&ledgerId=led_org1_b", ag.token)) == "agent.action_invalid");
  CHECK(code_of(h.call("GET", A + "/transactions?ledgerId=led_org1_a&start=2026-02-30", ag.token)) == "agent.action_invalid");
  CHECK(code_of(h.call("GET", A + "/transactions", ag.token)) == "agent.action_invalid");
  CHECK(code_of(h.call("GET", A + "/ledgers?tenantId=org2", ag.token)) == "agent.action_invalid");

  const auto scoped = h.agent({"ledger.read"});
  r = h.call("GET", A + "/transactions?ledgerId=led_org1_a", scoped.token);
  CHECK(r.status == 403);
  CHECK(code_of(r) == "agent.scope_denied");
}

TEST_CASE("redaction on the read path") {
  Harness h;
  Policy p;
  p.redact_sensitive_fields = true;
  const auto ag = h.agent(demo::demo_scopes(), "org1", p);
  const auto r = h.call("GET", A + "/transactions?ledgerId=led_org1_a", ag.token);
  REQUIRE(r.status == 200);
  const auto d = data_of(r);
  CHECK(d["redactedPaths"] == json::array({"memo"}));
  for (const auto& t : d["transactions"]) CHECK(t["memo"] == "[REDACTED]");
}

TEST_CASE("actions") {
  Harness h;
  const auto ag = h.agent();
  SUBCASE("execute with auto-execute disabled falls back to a draft") {
    json b = kDelete;
    b["execute"] = true;
    const auto r = h.call("POST", A + "/actions", ag.token, b);
    CHECK(r.status == 200);
    const auto d = data_of(r);
    CHECK(d["kind"] == "draft");
    CHECK(d["denialCode"] == "agent.auto_execute_disabled");
    CHECK(d["draft"]["status"] == "draft");
    CHECK_FALSE(d.contains("execution"));
    CHECK(h.rt.adapter().mutation_count() == 0);

    const auto got = h.call("GET", A + "/drafts/" + d["draft"]["id"].get<std::string>(), ag.token);
    CHECK(got.status == 200);
    CHECK(data_of(got)["draft"]["id"] == d["draft"]["id"]);
  }
  SUBCASE("invalid requests") {
    CHECK(code_of(h.call("POST", A + "/actions", ag.token, json{{"payload", json::object()}})) == "agent.action_invalid");
    CHECK(code_of(h.call("POST", A + "/actions", ag.token,
                         json{{"action", "transaction.create"}, {"payload", {{"ledgerId", "led_org1_a"}}}})) ==
          "agent.action_invalid");
    CHECK(code_of(h.call("POST", A + "/actions", ag.token, json{{"action", "nonexistent.tool"}, {"payload", json::object()}})) ==
          "agent.action_unknown");
    CHECK(h.call("POST", A + "/actions", ag.token, std::string("{\"action\":")).status == 400);
    CHECK(code_of(h.call("POST", A + "/actions", ag.token, std::string("[1,2]"))) == "agent.action_invalid");
    CHECK(h.call("POST", A + "/actions", ag.token, std::string(100, '[') + std::string(100, ']')).status == 400);
    CHECK(h.call("POST", A + "/actions", ag.token, std::string(300 * 1024, ' ')).status == 413);
    CHECK(h.rt.pipeline().draft_count() == 0);
  }
  SUBCASE("a hidden tool is unknown on the action surface") {
    const auto ro = h.agent({"transaction.read"});
    const auto r = h.call("POST", A + "/actions", ro.token, kDelete);
    CHECK(r.status == 404);
    CHECK(code_of(r) == "agent.action_unknown");
  }
  SUBCASE("cross-tenant write intents are forbidden and allocate nothing") {
    json b{{"action", "transaction.hard_delete"}, {"payload", {{"transactionId", "txn_org2_a_01"}}}};
    CHECK(code_of(h.call("POST", A + "/actions", ag.token, b)) == "agent.forbidden");
    CHECK(code_of(h.call("POST", A + "/preflight", ag.token, b)) == "agent.forbidden");
    CHECK(h.rt.pipeline().draft_count() == 0);
  }
  SUBCASE("preflight") {
    const auto r = h.call("POST", A + "/preflight", ag.token, kDelete);
    REQUIRE(r.status == 200);
    const auto d = data_of(r);
    CHECK(Digest::is_valid_hex(d["impactHash"].get<std::string>()));
    CHECK(d.contains("preflightId"));
    CHECK(d.contains("stateWitnessHash"));
    CHECK(d.contains("expiresAt"));
  }
  SUBCASE("drafts of another app are invisible") {
    const auto other = h.agent(demo::demo_scopes(), "org2");
    const auto id = data_of(h.call("POST", A + "/actions", ag.token, kDelete))["draft"]["id"].get<std::string>();
    const auto r = h.call("GET", A + "/drafts/" + id, other.token);
    CHECK(r.status == 404);
    CHECK(code_of(r) == "agent.draft_not_found");
  }
}

TEST_CASE("unknown routes and methods") {
  Harness h;
  const auto ag = h.agent();
  CHECK(code_of(h.call("GET", A + "/nope", ag.token)) == "agent.action_unknown");
  CHECK(h.call("DELETE", A + "/manifest", ag.token).status == 404);
  CHECK(h.call("GET", "/", ag.token).status == 404);
  // Agent paths are authenticated before routing.
  CHECK(h.call("GET", A + "/nope", "").status == 401);
  CHECK(h.rt.audit().snapshot().back().action == "agent.request.unknown");
  CHECK(Envelope::parse(h.call("GET", "/favicon.ico", "").body));
}

TEST_CASE("rate limiting denies with Retry-After and allocates nothing") {
  Harness h;
  const auto ag = h.agent();
  for (int i = 0; i < 240; ++i) REQUIRE(h.call("GET", A + "/manifest", ag.token).status == 200);
  const auto drafts = h.rt.pipeline().draft_count();
  const auto r = h.call("POST", A + "/actions", ag.token, kDelete);
  CHECK(r.status == 429);
  CHECK(code_of(r) == "agent.rate_limited");
  REQUIRE(r.headers.count("Retry-After"));
  CHECK(std::stoi(r.headers.at("Retry-After")) == 60);
  CHECK(h.rt.pipeline().draft_count() == drafts);
  CHECK(h.rt.audit().snapshot().back().code == std::string("agent.rate_limited"));

  // Another IP has its own budget; a new window restores this one.
  CHECK(h.call("GET", A + "/manifest", ag.token, "", "10.9.9.9").status == 200);
  h.clock.advance(std::chrono::seconds(60));
  CHECK(h.call("GET", A + "/manifest", ag.token).status == 200);
}

TEST_CASE("revocation takes effect on every endpoint immediately") {
  Harness h;
  const auto ag = h.agent();
  const auto id = data_of(h.call("POST", A + "/actions", ag.token, kDelete))["draft"]["id"].get<std::string>();
  REQUIRE(h.admin("POST", "/keys/" + ag.key_id + "/revoke").status == 200);
  const std::vector<std::pair<std::string, std::string>> calls{
      {"GET", A + "/manifest"},
      {"GET", A + "/ledgers"},
      {"GET", A + "/transactions?ledgerId=led_org1_a"},
      {"POST", A + "/preflight"},
      {"POST", A + "/actions"},
      {"GET", A + "/drafts/" + id}};
  for (const auto& [method, t] : calls) {
    const auto r = h.call(method, t, ag.token, method == "POST" ? kDelete.dump() : "");
    CHECK_MESSAGE(r.status == 401, t);
    CHECK(code_of(r) == "agent.token_invalid");
  }
}

TEST_CASE("admin plane rejects agent tokens on every route") {
  Harness h;
  const auto ag = h.agent();
  const std::vector<std::pair<std::string, std::string>> routes{
      {"POST", "/apps"},
      {"GET", "/apps"},
      {"POST", "/apps/" + ag.app_id + "/keys"},
      {"GET", "/apps/" + ag.app_id + "/keys"},
      {"POST", "/keys/" + ag.key_id + "/revoke"},
      {"POST", "/apps/" + ag.app_id + "/revoke"},
      {"POST", "/apps/" + ag.app_id + "/disable"},
      {"POST", "/apps/" + ag.app_id + "/enable"},
      {"PATCH", "/apps/" + ag.app_id + "/policy"},
      {"PATCH", "/apps/" + ag.app_id + "/auto-execute"},
      {"GET", "/drafts"},
      {"POST", "/drafts/drf_x/approve"},
      {"POST", "/drafts/drf_x/reject"},
      {"GET", "/audit"}};
  const auto before = h.rt.audit().size();
  for (const auto& [method, t] : routes) {
    for (const std::string& tok : {ag.token, std::string(), std::string("wrong-admin-token")}) {
      const auto r = h.call(method, "/api/agent-admin/v1" + t, tok, std::string("{}"));
      CHECK_MESSAGE(r.status == 401, (method + " " + t));
      CHECK(code_of(r) == "agent.token_invalid");
    }
  }
  CHECK(h.rt.audit().size() == before);
  CHECK(h.rt.credentials().credential_active(ag.app_id, ag.key_id));
}

TEST_CASE("admin lifecycle over HTTP") {
  Harness h;
  auto r = h.admin("POST", "/apps", json{{"name", "bookkeeper"}, {"tenantId", "org1"}, {"scopes", {"ledger.read"}}});
  REQUIRE(r.status == 200);
  const std::string app = data_of(r)["id"];

  r = h.admin("POST", "/apps/" + app + "/keys");
  REQUIRE(r.status == 200);
  const std::string secret = data_of(r)["secret"];
  const std::string key = data_of(r)["key"]["id"];
  CHECK(h.call("GET", A + "/ledgers", secret).status == 200);

  r = h.admin("GET", "/apps/" + app + "/keys");
  CHECK(r.body.find(secret) == std::string::npos);
  CHECK(data_of(r)["keys"][0]["tokenPrefix"] == secret.substr(0, 8));
  CHECK(h.admin("GET", "/apps/app_missing/keys").status == 404);

  CHECK(h.admin("POST", "/apps/" + app + "/disable").status == 200);
  CHECK(h.call("GET", A + "/ledgers", secret).status == 401);
  CHECK(h.admin("POST", "/apps/" + app + "/enable").status == 200);
  CHECK(h.call("GET", A + "/ledgers", secret).status == 200);

  r = h.admin("PATCH", "/apps/" + app + "/policy", json{{"ipAllowlist", {"203.0.113.0/24"}}});
  REQUIRE(r.status == 200);
  r = h.call("GET", A + "/ledgers", secret, "", "198.51.100.1");
  CHECK(r.status == 403);
  CHECK(code_of(r) == "agent.policy_denied");
  CHECK(h.call("GET", A + "/ledgers", secret, "", "203.0.113.5").status == 200);
  CHECK(code_of(h.admin("PATCH", "/apps/" + app + "/policy", json{{"maxQueryWindowDays", "x"}})) == "agent.action_invalid");

  CHECK(h.admin("POST", "/keys/" + key + "/revoke").status == 200);
  CHECK(code_of(h.call("GET", A + "/ledgers", secret, "", "203.0.113.5")) == "agent.token_invalid");

  CHECK(code_of(h.admin("GET", "/apps", nullptr, std::string(129, 'o'))) == "agent.action_invalid");
  CHECK(code_of(h.admin("POST", "/apps", json{{"name", "x"}})) == "agent.action_invalid");
  CHECK(code_of(h.admin("GET", "/nope")) == "agent.action_unknown");

  std::vector<std::string> admin_actions;
  for (const auto& e : h.rt.audit().snapshot()) {
    if (e.action.rfind("agent_", 0) == 0) {
      admin_actions.push_back(e.action);
      CHECK(e.performed_by_user_id == std::string("op_alice"));
    }
  }
  CHECK(admin_actions == std::vector<std::string>{"agent_app.create", "agent_key.create", "agent_app.disable",
                                                  "agent_app.enable", "agent_app.policy.update", "agent_key.revoke"});
}

TEST_CASE("operator draft review") {
  Harness h;
  const auto ag = h.agent();
  const std::string d1 = data_of(h.call("POST", A + "/actions", ag.token, kDelete))["draft"]["id"];
  json b2 = kDelete;
  b2["payload"]["transactionId"] = "txn_org1_a_02";
  const std::string d2 = data_of(h.call("POST", A + "/actions", ag.token, b2))["draft"]["id"];

  auto r = h.admin("GET", "/drafts?status=draft");
  REQUIRE(r.status == 200);
  CHECK(data_of(r)["drafts"].size() == 2);

  r = h.admin("POST", "/drafts/" + d1 + "/approve");
  REQUIRE(r.status == 200);
  CHECK(data_of(r)["execution"]["status"] == "succeeded");
  CHECK(data_of(r)["draft"]["status"] == "confirmed");
  CHECK(data_of(r)["draft"]["decidedByUserId"] == "op_alice");

  r = h.admin("POST", "/drafts/" + d2 + "/reject", nullptr, "op_bob");
  CHECK(data_of(r)["draft"]["status"] == "canceled");
  CHECK(code_of(h.admin("POST", "/drafts/" + d2 + "/approve")) == "agent.draft_already_final");
  CHECK(code_of(h.admin("POST", "/drafts/drf_missing/approve")) == "agent.draft_not_found");

  r = h.admin("GET", "/drafts?status=draft");
  CHECK(data_of(r)["drafts"].empty());
  CHECK(code_of(h.admin("GET", "/drafts?status=pending")) == "agent.action_invalid");

  // The agent sees the latest execution on its own draft.
  r = h.call("GET", A + "/drafts/" + d1, ag.token);
  CHECK(data_of(r)["execution"]["status"] == "succeeded");

  json approve_ev;
  for (const auto& e : h.rt.audit().snapshot()) {
    if (e.action == "agent.draft.approve" && e.status == AuditStatus::Success) approve_ev = e.to_json();
  }
  CHECK(approve_ev["draft_id"] == d1);
  CHECK(approve_ev["execution_id"] == data_of(r)["execution"]["id"]);
  CHECK(approve_ev["performed_by_user_id"] == "op_alice");
  CHECK(approve_ev["actor_user_id"] == h.rt.credentials().find_app(ag.app_id)->service_actor_user_id);
}

TEST_CASE("stale witness on approval is a 409 with no side effects") {
  Harness h;
  const auto ag = h.agent();
  const std::string id = data_of(h.call("POST", A + "/actions", ag.token, kDelete))["draft"]["id"];
  h.rt.adapter().update_transaction("someone", "txn_org1_a_01", 1, std::nullopt);
  const auto before = h.rt.adapter().mutation_count();
  const auto r = h.admin("POST", "/drafts/" + id + "/approve");
  CHECK(r.status == 409);
  CHECK(code_of(r) == "agent.precondition_failed");
  CHECK(h.rt.adapter().mutation_count() == before);
  CHECK(data_of(h.call("GET", A + "/drafts/" + id, ag.token))["draft"]["status"] == "failed");
}

TEST_CASE("audit query surface") {
  Harness h;
  const auto ag = h.agent({"ledger.read"});
  h.call("GET", A + "/ledgers", ag.token);
  h.call("GET", A + "/transactions?ledgerId=led_org1_a", ag.token);
  auto r = h.admin("GET", "/audit?status=denied&code=agent.scope_denied");
  REQUIRE(r.status == 200);
  REQUIRE(data_of(r)["events"].size() == 1);
  CHECK(data_of(r)["events"][0]["action"] == "agent.transaction.list");

  r = h.admin("GET", "/audit?appId=" + ag.app_id + "&limit=1");
  CHECK(data_of(r)["events"].size() == 1);
  CHECK(data_of(r)["events"][0]["app_id"] == ag.app_id);

  r = h.admin("GET", "/audit?format=jsonl");
  CHECK(data_of(r)["format"] == "jsonl");
  CHECK(data_of(r)["jsonl"].get<std::string>().find(ag.token) == std::string::npos);
  CHECK(code_of(h.admin("GET", "/audit?limit=0")) == "agent.action_invalid");
  CHECK(code_of(h.admin("GET", "/audit?limit=abc")) == "agent.action_invalid");
  CHECK(code_of(h.admin("GET", "/audit?bogus=1")) == "agent.action_invalid");
}

TEST_CASE("property: every authenticated request leaves at least one audit event") {
  Harness h;
  const auto ag = h.agent();
  const auto ro = h.agent({"ledger.read"});
  std::mt19937 rng(29);
  const std::vector<std::pair<std::string, std::string>> shapes{
      {"GET", A + "/manifest"},
      {"GET", A + "/ledgers"},
      {"GET", A + "/transactions?ledgerId=led_org1_a"},
      {"GET", A + "/transactions?ledgerId=led_org2_a"},
      {"POST", A + "/preflight"},
      {"POST", A + "/actions"},
      {"GET", A + "/drafts/drf_unknown"},
      {"GET", A + "/nope"}};
  for (int i = 0; i < 300; ++i) {
    const auto& [method, t] = shapes[rng() % shapes.size()];
    const auto& tok = rng() % 3 ? ag.token : ro.token;
    const auto before = h.rt.audit().size();
    const auto r = h.call(method, t, tok, method == "POST" ? kDelete.dump() : "");
    REQUIRE(Envelope::parse(r.body));
    CHECK_MESSAGE(h.rt.audit().size() > before, (method + " " + t));
  }
}
