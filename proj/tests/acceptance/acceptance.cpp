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

// Release acceptance run. Prints one PASS/FAIL line per criterion and exits
// non-zero when any of them fails. Everything runs in process against the
// reference runtime; no network and no operator console are involved.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <iostream>
#include <latch>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../unit/harness.hpp"
#include "openport/conformance.hpp"

using namespace openport;
using namespace openport::testing;
using std::chrono::milliseconds;
using std::chrono::seconds;

namespace {

const std::string A = "/api/agent/v1";

/// Collects the first few failed expectations of one criterion.
class Probe {
 public:
  bool expect(bool cond, const std::string& what) {
    if (!cond) {
      ++failures_;
      if (notes_.size() < 3) notes_.push_back(what);
    }
    return cond;
  }
  bool ok() const { return failures_ == 0; }
  std::string failures() const {
    std::string out = std::to_string(failures_) + " failed expectation(s)";
    for (const auto& n : notes_) out += "; " + n;
    return out;
  }

 private:
  int failures_ = 0;
  std::vector<std::string> notes_;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict finish(const Probe& p, std::string summary) { return {p.ok(), p.ok() ? std::move(summary) : p.failures()}; }

std::string observed(const HttpResponse& r) { return std::to_string(r.status) + " " + code_of(r); }

AutoExecConfig open_window(std::set<std::string> allow) {
  AutoExecConfig c;
  c.enabled = true;
  c.allow_list = std::move(allow);
  return c;
}

// --- criteria ---------------------------------------------------------------

Verdict criterion_core_conformance() {
  Probe p;
  conformance::LocalTarget t;
  const auto profile = conformance::ConformanceProfile::load(OPENPORT_SOURCE_DIR "/profiles/core-v1.json");
  const auto start = std::chrono::steady_clock::now();
  const auto report = conformance::run_profile(profile, t.transport(), t.agent_token());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  int endpoints = 0, passed = 0;
  for (const auto& c : report.checks) {
    p.expect(c.pass, c.id + " observed " + c.observed);
    passed += c.pass;
    endpoints += c.pass && c.id.rfind("endpoint:", 0) == 0;
  }
  p.expect(profile.required_endpoints.size() == 6, "core profile lists 6 endpoints");
  p.expect(endpoints == 6, "6 endpoint checks green");
  for (const char* id : {"envelope:success", "envelope:error", "security:unauthenticated-manifest-denied",
                         "check:preflight-high-risk", "check:draft-roundtrip"}) {
    p.expect(std::any_of(report.checks.begin(), report.checks.end(), [&](const auto& c) { return c.id == id; }),
             std::string("check present: ") + id);
  }
  p.expect(secs < 10.0, "runtime under 10 s");
  p.expect(t.runtime().adapter().mutation_count() == 0, "no side effects");
  std::ostringstream s;
  s.precision(3);
  s << passed << "/" << report.checks.size() << " checks, " << endpoints << " endpoints, " << secs << " s";
  return finish(p, s.str());
}

Verdict criterion_fuzz_budget() {
  Probe p;
  conformance::LocalTarget t;
  const auto r = conformance::run_fuzz(t.transport(), t.agent_token(), 80, 1);
  int actions = 0, queries = 0;
  for (const auto& c : conformance::fuzz_corpus(80, 1)) {
    if (c.request.path == A + "/actions") ++actions;
    if (c.request.method == "GET") ++queries;
  }
  p.expect(r.total == 80, "80 requests sent");
  p.expect(r.count_5xx == 0, "zero 5xx");
  p.expect(r.count_envelope_violations == 0, "zero envelope violations");
  p.expect(actions > 0 && queries > 0, "both /actions and query surfaces exercised");
  return finish(p, std::to_string(r.total) + " requests (" + std::to_string(actions) + " /actions, " +
                       std::to_string(queries) + " query), " + std::to_string(r.count_5xx) + " 5xx, " +
                       std::to_string(r.count_envelope_violations) + " envelope violations");
}

Verdict criterion_reason_codes() {
  Probe p;
  std::set<std::string> codes;
  const auto results = conformance::run_reason_code_regressions();
  for (const auto& r : results) {
    p.expect(r.pass, r.id + " observed " + r.observed);
    if (r.pass) codes.insert(r.id.substr(0, r.id.find(':')));
  }
  p.expect(codes == std::set<std::string>{"agent.token_invalid", "agent.policy_denied", "agent.idempotency_required"},
           "three distinct stable codes");
  return finish(p, std::to_string(results.size()) + " regressions, " + std::to_string(codes.size()) + " distinct codes");
}

Verdict criterion_immediate_revocation() {
  Probe p;
  Harness h;
  const auto ag = h.agent();
  const json del{{"action", "transaction.hard_delete"}, {"payload", {{"transactionId", "txn_org1_a_01"}}}};
  const std::string draft = data_of(h.call("POST", A + "/actions", ag.token, del))["draft"]["id"];
  p.expect(h.call("GET", A + "/manifest", ag.token).status == 200, "session active before revocation");

  // Revoke while another thread is mid-session; once the admin call returns,
  // nothing authored with the key may succeed.
  std::atomic<bool> stop{false};
  std::thread traffic([&] {
    while (!stop) h.call("GET", A + "/ledgers", ag.token, "", "10.1.1.1");
  });
  const auto rev = h.admin("POST", "/keys/" + ag.key_id + "/revoke");
  stop = true;
  traffic.join();
  p.expect(rev.status == 200, "revoke returned " + observed(rev));

  const std::vector<std::pair<std::string, std::string>> endpoints{
      {"GET", A + "/manifest"},
      {"GET", A + "/ledgers"},
      {"GET", A + "/transactions?ledgerId=led_org1_a"},
      {"POST", A + "/preflight"},
      {"POST", A + "/actions"},
      {"GET", A + "/drafts/" + draft}};
  std::set<std::string> touched;
  for (const auto& [m, t] : endpoints) {
    const auto r = h.call(m, t, ag.token, m == "POST" ? del.dump() : "");
    p.expect(r.status == 401 && code_of(r) == "agent.token_invalid", m + " " + t + " gave " + observed(r));
  }

  std::mt19937 rng(1000);
  int successes = 0, denials = 0;
  const std::vector<std::string> bodies{del.dump(), "{}", "not json", R"({"action":"ledger.list"})"};
  for (int i = 0; i < 1000; ++i) {
    const auto& [m, t] = endpoints[rng() % endpoints.size()];
    const std::string ip = "10.0." + std::to_string(rng() % 256) + "." + std::to_string(rng() % 256);
    const auto r = h.call(m, t, ag.token, m == "POST" ? bodies[rng() % bodies.size()] : "", ip);
    touched.insert(t);
    if (r.status < 400) ++successes;
    if (r.status == 401 && code_of(r) == "agent.token_invalid") ++denials;
  }
  p.expect(successes == 0, "successes after revocation");
  p.expect(denials == 1000, "every randomized request denied with agent.token_invalid");
  p.expect(touched.size() == endpoints.size(), "all endpoints sampled");
  return finish(p, "6/6 endpoints 401, " + std::to_string(successes) + " successes and " + std::to_string(denials) +
                       "/1000 token_invalid after revocation");
}

Verdict criterion_rate_limiting() {
  Probe p;
  std::string retry_after;
  {
    Harness h;
    const auto ag = h.agent();
    int admitted = 0;
    for (int i = 0; i < 240; ++i) {
      admitted += h.call("GET", A + "/manifest", ag.token).status == 200;
      h.clock.advance(milliseconds(245));  // 240 requests spread across 58.8 s
    }
    p.expect(admitted == 240, "240 admitted, got " + std::to_string(admitted));
    const auto drafts = h.rt.pipeline().draft_count();
    const auto execs = h.rt.pipeline().execution_count();
    const auto mutations = h.rt.adapter().mutation_count();
    const auto r = h.call("POST", A + "/actions", ag.token,
                          json{{"action", "transaction.hard_delete"}, {"payload", {{"transactionId", "txn_org1_a_01"}}}});
    p.expect(r.status == 429 && code_of(r) == "agent.rate_limited", "241st gave " + observed(r));
    p.expect(r.headers.count("Retry-After") == 1, "Retry-After present");
    if (r.headers.count("Retry-After")) {
      retry_after = r.headers.at("Retry-After");
      const int ra = std::stoi(retry_after);
      p.expect(ra == 2, "Retry-After is the rounded-up remaining window (1.2 s), got " + retry_after);
    }
    for (int i = 0; i < 20; ++i) {
      h.call("POST", A + "/preflight", ag.token,
             json{{"action", "transaction.hard_delete"}, {"payload", {{"transactionId", "txn_org1_a_02"}}}});
      h.call("POST", A + "/actions", ag.token,
             json{{"action", "transaction.create"},
                  {"payload", {{"ledgerId", "led_org1_a"}, {"date", "2026-03-01"}, {"amountMinor", 1}}}});
    }
    p.expect(h.rt.pipeline().draft_count() == drafts, "draft store unchanged by denials");
    p.expect(h.rt.pipeline().execution_count() == execs, "execution store unchanged by denials");
    p.expect(h.rt.adapter().mutation_count() == mutations, "no side effects from denials");
    h.clock.advance(seconds(2));
    p.expect(h.call("GET", A + "/manifest", ag.token).status == 200, "next window admits again");
  }

  int admitted = 0, limited = 0;
  {
    Harness h;
    const auto ag = h.agent();
    std::latch go(300);
    std::vector<int> statuses(300);
    std::vector<std::thread> threads;
    for (int i = 0; i < 300; ++i) {
      threads.emplace_back([&, i] {
        go.arrive_and_wait();
        statuses[i] = h.call("GET", A + "/manifest", ag.token).status;
      });
    }
    for (auto& t : threads) t.join();
    admitted = static_cast<int>(std::count(statuses.begin(), statuses.end(), 200));
    limited = static_cast<int>(std::count(statuses.begin(), statuses.end(), 429));
    p.expect(admitted == 240 && limited == 60, "300 concurrent admitted " + std::to_string(admitted));
  }
  return finish(p, "240 admitted, 241st 429 Retry-After=" + retry_after + ", stores unchanged; concurrent 300 -> " +
                       std::to_string(admitted) + " admitted, " + std::to_string(limited) + " limited");
}

Verdict criterion_idempotency() {
  Probe p;
  Harness h;
  const auto ag = h.agent(demo::demo_scopes(), "org1", {}, open_window({"transaction.create", "transaction.update"}));
  std::mt19937 rng(50);
  const std::vector<std::string> ledgers{"led_org1_a", "led_org1_b"};
  const std::vector<std::string> txns{"txn_org1_a_01", "txn_org1_a_02", "txn_org1_a_03", "txn_org1_b_01"};

  struct Intent {
    json body;
    int attempts = 0;
  };
  std::vector<Intent> intents;
  std::vector<int> schedule;
  for (int i = 0; i < 50; ++i) {
    json body{{"execute", true}, {"idempotencyKey", "intent-" + std::to_string(i) + "-" + std::to_string(rng())}};
    if (rng() % 2) {
      body["action"] = "transaction.create";
      body["payload"] = {{"ledgerId", ledgers[rng() % ledgers.size()]},
                         {"date", "2026-03-" + std::to_string(10 + rng() % 10)},
                         {"amountMinor", static_cast<int>(rng() % 100000) - 50000}};
    } else {
      body["action"] = "transaction.update";
      body["payload"] = {{"transactionId", txns[rng() % txns.size()]}, {"amountMinor", static_cast<int>(rng() % 9999)}};
    }
    const int tries = 1 + static_cast<int>(rng() % 5);
    intents.push_back({body, tries});
    for (int k = 0; k < tries; ++k) schedule.push_back(i);
  }
  std::shuffle(schedule.begin(), schedule.end(), rng);

  std::vector<std::string> first_exec(intents.size());
  int replays = 0, retries = 0;
  for (int i : schedule) {
    const auto r = h.call("POST", A + "/actions", ag.token, intents[i].body);
    const auto d = data_of(r);
    if (!p.expect(r.status == 200 && d.value("kind", "") == "executed", "intent " + std::to_string(i) + " " + observed(r))) continue;
    const std::string exec = d["execution"]["id"];
    if (first_exec[i].empty()) {
      first_exec[i] = exec;
      p.expect(d["replayed"] == false && code_of(r) == "agent.ok", "first attempt is not a replay");
    } else {
      ++retries;
      replays += d["replayed"] == true && code_of(r) == "agent.idempotency_replay";
      p.expect(exec == first_exec[i], "replay returns the original executionId");
    }
  }
  const auto counter = h.rt.adapter().mutation_count();
  p.expect(counter == 50, "side-effect counter " + std::to_string(counter));
  p.expect(h.rt.pipeline().execution_count() == 50, "50 executions recorded");
  p.expect(replays == retries, "every retry flagged replayed=true");
  return finish(p, "50 intents, " + std::to_string(schedule.size()) + " submissions, side effects " +
                       std::to_string(counter) + ", " + std::to_string(replays) + "/" + std::to_string(retries) +
                       " replays with identical executionId");
}

Verdict criterion_preflight_binding() {
  Probe p;
  Harness h;
  const auto ag = h.agent(demo::demo_scopes(), "org1", {}, open_window({"transaction.hard_delete"}));
  auto payload = [](const char* id) { return json{{"transactionId", id}}; };
  auto submit = [&](json extra, const char* key) {
    json b{{"action", "transaction.hard_delete"}, {"execute", true}, {"justification", "cleanup"}, {"idempotencyKey", key}};
    b.update(extra);
    return h.call("POST", A + "/actions", ag.token, b);
  };
  auto preflight = [&](const json& pl) {
    return data_of(h.call("POST", A + "/preflight", ag.token, json{{"action", "transaction.hard_delete"}, {"payload", pl}}));
  };
  std::vector<std::string> seen;

  auto r = submit({{"payload", payload("txn_org1_a_01")}}, "k1");
  seen.push_back(data_of(r).value("denialCode", "-"));
  p.expect(seen.back() == "agent.preflight_required", "no hash gave " + seen.back());

  const auto pf = preflight(payload("txn_org1_a_01"));
  r = submit({{"payload", payload("txn_org1_a_02")}, {"preflightHash", pf["impactHash"]}}, "k2");
  seen.push_back(data_of(r).value("denialCode", "-"));
  p.expect(seen.back() == "agent.preflight_mismatch", "mutated payload gave " + seen.back());

  const auto late = preflight(payload("txn_org1_a_03"));
  h.clock.advance(seconds(601));
  r = submit({{"preflightId", late["preflightId"]}}, "k3");
  seen.push_back(code_of(r));
  p.expect(r.status == 404 && code_of(r) == "agent.preflight_not_found", "expired preflightId gave " + observed(r));
  p.expect(h.rt.adapter().mutation_count() == 0, "no side effects before the matching call");

  const auto fresh = preflight(payload("txn_org1_a_01"));
  r = submit({{"payload", payload("txn_org1_a_01")}, {"preflightHash", fresh["impactHash"]}}, "k4");
  seen.push_back(data_of(r).value("kind", "-"));
  p.expect(seen.back() == "executed", "matching hash gave " + observed(r));
  p.expect(h.rt.adapter().mutation_count() == 1, "exactly one side effect");

  std::string s;
  for (const auto& x : seen) s += (s.empty() ? "" : ", ") + x;
  return finish(p, s);
}

Verdict criterion_state_witness() {
  Probe p;
  Harness h;
  const auto ag = h.agent();
  const auto created = data_of(h.call("POST", A + "/actions", ag.token,
                                      json{{"action", "transaction.hard_delete"},
                                           {"payload", {{"transactionId", "txn_org1_a_01"}}}}));
  const std::string id = created["draft"]["id"];
  p.expect(created["draft"]["stateWitnessHash"].is_string(), "draft bound to a witness");
  h.rt.adapter().update_transaction("usr_other", "txn_org1_a_01", 4242, std::nullopt);
  const auto before = h.rt.adapter().mutation_count();
  const auto r = h.admin("POST", "/drafts/" + id + "/approve");
  p.expect(r.status == 409 && code_of(r) == "agent.precondition_failed", "approve gave " + observed(r));
  const std::string status = data_of(h.call("GET", A + "/drafts/" + id, ag.token))["draft"]["status"];
  p.expect(status == "failed", "draft status " + status);
  p.expect(h.rt.adapter().mutation_count() == before, "side-effect counter unchanged");
  p.expect(h.rt.adapter().find_transaction("txn_org1_a_01").has_value(), "record still present");
  return finish(p, "approve -> " + observed(r) + ", draft " + status + ", side effects unchanged");
}

Verdict criterion_draft_state_machine() {
  Probe p;
  const std::vector<DraftStatus> all{DraftStatus::Draft, DraftStatus::Confirmed, DraftStatus::Canceled, DraftStatus::Failed};
  const std::set<std::pair<DraftStatus, DraftStatus>> table{{DraftStatus::Draft, DraftStatus::Confirmed},
                                                            {DraftStatus::Draft, DraftStatus::Canceled},
                                                            {DraftStatus::Confirmed, DraftStatus::Failed}};
  int legal = 0, rejected_final = 0, cells = 0;
  for (auto from : all) {
    for (auto to : all) {
      ++cells;
      const std::string cell = std::string(to_string(from)) + "->" + std::string(to_string(to));
      const bool expected = table.count({from, to}) > 0;
      p.expect(legal_transition(from, to) == expected, "table cell " + cell);

      Harness h;
      const auto ag = h.agent();
      const std::string id = data_of(h.call("POST", A + "/actions", ag.token,
                                            json{{"action", "transaction.hard_delete"},
                                                 {"payload", {{"transactionId", "txn_org1_a_01"}}}}))["draft"]["id"];
      auto& pl = h.rt.pipeline();
      if (from == DraftStatus::Confirmed || from == DraftStatus::Failed) pl.transition(id, DraftStatus::Confirmed);
      if (from == DraftStatus::Failed) pl.transition(id, DraftStatus::Failed);
      if (from == DraftStatus::Canceled) pl.transition(id, DraftStatus::Canceled);

      const auto st = pl.transition(id, to, "op_alice");
      p.expect(static_cast<bool>(st) == expected, "store cell " + cell);
      legal += static_cast<bool>(st);
      if (!st && from != DraftStatus::Draft && from != DraftStatus::Confirmed) {
        rejected_final += st.denial().code == codes::kDraftAlreadyFinal;
        p.expect(st.denial().code == codes::kDraftAlreadyFinal, cell + " rejected with " + std::string(st.denial().code));
      } else if (!st) {
        p.expect(!st.denial().code.empty(), cell + " rejected with a code");
      }
    }
  }
  // Final drafts cannot be decided again through the operator plane either.
  Harness h;
  const auto ag = h.agent();
  const std::string id = data_of(h.call("POST", A + "/actions", ag.token,
                                        json{{"action", "transaction.hard_delete"},
                                             {"payload", {{"transactionId", "txn_org1_a_02"}}}}))["draft"]["id"];
  p.expect(h.admin("POST", "/drafts/" + id + "/reject").status == 200, "reject pending draft");
  p.expect(code_of(h.admin("POST", "/drafts/" + id + "/approve")) == "agent.draft_already_final", "approve after reject");
  p.expect(code_of(h.admin("POST", "/drafts/" + id + "/reject")) == "agent.draft_already_final", "reject after reject");
  p.expect(legal == 3, "legal transitions " + std::to_string(legal));
  return finish(p, std::to_string(cells) + " cells, " + std::to_string(legal) + " legal, " +
                       std::to_string(rejected_final) + " rejected from final states with agent.draft_already_final");
}

Verdict criterion_audit_integrity() {
  Probe p;
  Harness h;
  std::vector<Harness::Agent> agents{
      h.agent(),
      h.agent({"ledger.read", "transaction.read"}),
      h.agent(demo::demo_scopes(), "org1", {}, open_window({"transaction.create", "transaction.update"})),
      h.agent(demo::demo_scopes(), "org2")};
  std::mt19937 rng(500);
  const std::vector<std::pair<std::string, std::function<std::string()>>> shapes{
      {"GET", [] { return A + "/manifest"; }},
      {"GET", [] { return A + "/ledgers"; }},
      {"GET", [] { return A + "/transactions?ledgerId=led_org1_a&start=2026-02-01&end=2026-03-15"; }},
      {"GET", [] { return A + "/transactions?ledgerId=led_org2_a"; }},
      {"POST", [] { return A + "/preflight"; }},
      {"POST", [] { return A + "/actions"; }},
      {"GET", [] { return A + "/drafts/drf_unknown"; }},
      {"GET", [] { return A + "/unknown"; }}};
  auto body = [&]() -> json {
    switch (rng() % 4) {
      case 0: return {{"action", "transaction.hard_delete"}, {"payload", {{"transactionId", "txn_org1_a_0" + std::to_string(1 + rng() % 5)}}}};
      case 1:
        return {{"action", "transaction.create"},
                {"execute", true},
                {"idempotencyKey", "k" + std::to_string(rng() % 40)},
                {"payload", {{"ledgerId", "led_org1_a"}, {"date", "2026-03-02"}, {"amountMinor", 7}}}};
      case 2: return {{"action", "transaction.update"}, {"payload", {{"transactionId", "txn_org1_b_01"}, {"memo", "x"}}}};
      default: return {{"action", "no.such.tool"}, {"payload", json::object()}};
    }
  };

  std::set<std::string> secrets;
  for (const auto& a : agents) secrets.insert(a.token);
  int authenticated = 0, unmapped = 0, approvals = 0;
  for (int i = 0; i < 500; ++i) {
    const auto a = agents[rng() % agents.size()];
    if (i == 250) {
      // Rotate mid-run: the old secret keeps appearing in requests but must never reach the log.
      auto fresh = h.rt.credentials().issue_key(agents[0].app_id, std::nullopt);
      secrets.insert(fresh->secret);
      h.admin("POST", "/keys/" + agents[0].key_id + "/revoke");
      agents.push_back({agents[0].app_id, fresh->key.id, fresh->secret});
    }
    if (rng() % 10 == 0) {
      const auto pending = h.rt.pipeline().list_drafts(DraftStatus::Draft);
      if (!pending.empty()) {
        h.admin("POST", "/drafts/" + pending[rng() % pending.size()].id + (rng() % 2 ? "/approve" : "/reject"));
        ++approvals;
      }
    }
    const auto& [method, target] = shapes[rng() % shapes.size()];
    const auto before = h.rt.audit().size();
    const auto r = h.call(method, target(), a.token, method == "POST" ? body().dump() : "",
                          "10.2.0." + std::to_string(rng() % 8));
    if (r.status != 401) {
      ++authenticated;
      bool mapped = false;
      const auto events = h.rt.audit().snapshot();
      for (std::size_t k = before; k < events.size(); ++k) mapped |= events[k].key_id == a.key_id;
      if (!mapped) ++unmapped;
    }
  }
  p.expect(authenticated > 300, "authenticated requests " + std::to_string(authenticated));
  p.expect(unmapped == 0, std::to_string(unmapped) + " authenticated requests without an audit event");

  const auto links = h.rt.pipeline().verify_links();
  p.expect(links.ok, "draft/execution links: " + (links.violations.empty() ? "" : links.violations.front()));
  p.expect(h.rt.pipeline().execution_count() > 0, "workload executed something");

  const std::string jsonl = h.rt.audit().export_jsonl();
  int leaks = 0;
  for (const auto& s : secrets) leaks += jsonl.find(s) != std::string::npos;
  leaks += jsonl.find(kAdminToken) != std::string::npos;
  p.expect(leaks == 0, "secrets found in JSON Lines export");
  std::size_t lines = std::count(jsonl.begin(), jsonl.end(), '\n');
  p.expect(lines == h.rt.audit().size(), "one JSON line per event");
  return finish(p, std::to_string(authenticated) + " authenticated requests all audited, " +
                       std::to_string(h.rt.pipeline().execution_count()) + " executions linked, " +
                       std::to_string(lines) + " JSONL events, 0 of " + std::to_string(secrets.size()) +
                       " secrets leaked (" + std::to_string(approvals) + " operator decisions)");
}

Verdict criterion_manifest_monotonicity() {
  Probe p;
  Harness h;
  const auto declared = demo::demo_scopes();
  const auto all = h.rt.registry().all();
  std::mt19937 rng(11);
  int trials = 0, leaks = 0;
  for (int i = 0; i < 200; ++i) {
    std::set<std::string> scopes;
    for (const auto& s : declared) {
      if (rng() % 2) scopes.insert(s);
    }
    const auto ag = h.agent(scopes);
    const auto r = h.call("GET", A + "/manifest", ag.token, "", "10.3." + std::to_string(i / 200) + "." + std::to_string(i % 200));
    if (!p.expect(r.status == 200, "manifest " + observed(r))) continue;
    ++trials;

    std::set<std::string> expected, got;
    for (const auto* t : all) {
      if (std::includes(scopes.begin(), scopes.end(), t->required_scopes.begin(), t->required_scopes.end())) {
        expected.insert(t->name);
      }
    }
    const json tools = data_of(r)["tools"];
    for (const auto& t : tools) got.insert(t["name"].get<std::string>());
    p.expect(got == expected, "manifest equals brute-force filter");

    for (const auto* t : all) {
      if (!expected.count(t->name) && r.body.find(t->name) != std::string::npos) {
        ++leaks;
        p.expect(false, "unauthorized tool name in manifest: " + t->name);
      }
    }

    // Monotone: one more scope never hides a tool.
    auto wider = scopes;
    wider.insert(*std::next(declared.begin(), rng() % declared.size()));
    const auto ag2 = h.agent(wider);
    std::set<std::string> more;
    const json wider_tools = data_of(h.call("GET", A + "/manifest", ag2.token, "", "10.4.0.1"))["tools"];
    for (const auto& t : wider_tools) more.insert(t["name"].get<std::string>());
    p.expect(std::includes(more.begin(), more.end(), got.begin(), got.end()), "wider scopes keep every tool");
  }
  return finish(p, std::to_string(trials) + " random scope sets, set equality held, " + std::to_string(leaks) +
                       " unauthorized names leaked");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"core conformance", criterion_core_conformance},
      {"fuzz budget", criterion_fuzz_budget},
      {"reason-code regressions", criterion_reason_codes},
      {"immediate revocation", criterion_immediate_revocation},
      {"rate limiting", criterion_rate_limiting},
      {"idempotency", criterion_idempotency},
      {"preflight binding", criterion_preflight_binding},
      {"state witness", criterion_state_witness},
      {"draft state machine", criterion_draft_state_machine},
      {"audit integrity", criterion_audit_integrity},
      {"manifest monotonicity and non-leakage", criterion_manifest_monotonicity},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
