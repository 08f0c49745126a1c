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

#include "openport/demo.hpp"

#include "doctest.h"
#include "openport/canonical.hpp"
#include "openport/policy.hpp"

using namespace openport;
using namespace openport::demo;
using namespace std::chrono;

namespace {
const Date kToday = 2026y / March / 15;
}

TEST_CASE("seed fixture") {
  DemoAdapter d(kToday);
  CHECK(d.transaction_count() == 40);
  CHECK(d.list_ledgers("u", "org1").size() == 2);
  CHECK(d.list_ledgers("u", "org2").size() == 2);
  CHECK(d.list_ledgers("u", "org3").empty());
  const auto all = d.list_transactions("u", "led_org1_a", 2025y / January / 1, kToday);
  CHECK(all.size() == 10);
  // Ten rows spread back over 108 days.
  const auto oldest = d.find_transaction("txn_org1_a_10");
  REQUIRE(oldest);
  CHECK(days_between(oldest->date, kToday) == 108);
  CHECK(d.mutation_count() == 0);
}

TEST_CASE("tenant resolution") {
  DemoAdapter d(kToday);
  CHECK(d.resolve_tenant("led_org1_a") == "org1");
  CHECK(d.resolve_tenant("led_org2_b") == "org2");
  CHECK(d.resolve_tenant("txn_org2_b_04") == "org2");
  CHECK_FALSE(d.resolve_tenant("led_unknown"));
  CHECK_FALSE(d.resolve_tenant(""));
}

TEST_CASE("date windows are inclusive and may be empty") {
  DemoAdapter d(kToday);
  CHECK(d.list_transactions("u", "led_org1_a", kToday, kToday).size() == 1);
  CHECK(d.list_transactions("u", "led_org1_a", 2030y / January / 1, 2030y / February / 1).empty());
}

TEST_CASE("mutations bump versions and the counter") {
  DemoAdapter d(kToday);
  const auto created = d.create_transaction("u", "led_org1_a", kToday, 999, "new");
  CHECK(d.find_transaction(created.id));
  CHECK(d.list_transactions("u", "led_org1_a", kToday, kToday).size() == 2);
  const auto before = d.find_transaction("txn_org1_a_01")->version;
  d.update_transaction("u", "txn_org1_a_01", 5, std::nullopt);
  CHECK(d.find_transaction("txn_org1_a_01")->version == before + 1);
  d.delete_transaction("u", "txn_org1_a_01");
  CHECK_FALSE(d.find_transaction("txn_org1_a_01"));
  CHECK(d.mutation_count() == 3);
  CHECK_THROWS_AS(d.create_transaction("u", "led_missing", kToday, 1, ""), ToolError);
  CHECK_THROWS_AS(d.update_transaction("u", "txn_missing", 1, std::nullopt), ToolError);
}

TEST_CASE("tool bindings") {
  DemoAdapter d(kToday);
  ToolRegistry r;
  register_demo_tools(r, d);
  const auto* del = r.find("transaction.hard_delete");
  REQUIRE(del);
  const json p{{"transactionId", "txn_org1_a_01"}};
  const auto record = *d.find_transaction("txn_org1_a_01");

  const json impact = del->impact_fn(p);
  CHECK(impact.dump().find(std::to_string(record.amount_minor)) != std::string::npos);

  const auto w1 = witness_hash(del->witness_fn(p));
  CHECK(witness_hash(del->witness_fn(p)) == w1);
  d.update_transaction("u", "txn_org1_a_01", std::nullopt, std::string("edited"));
  CHECK(witness_hash(del->witness_fn(p)) != w1);

  CHECK(del->resources_fn(p) == std::vector<std::string>{"led_org1_a"});
}

TEST_CASE("list results pass through redaction") {
  DemoAdapter d(kToday);
  ToolRegistry r;
  register_demo_tools(r, d);
  const auto* list = r.find("transaction.list");
  REQUIRE(list);
  REQUIRE(list->record_collection);
  const json out = list->execute_fn({"svc", "org1", {}}, json{{"ledgerId", "led_org1_a"}, {"start", "2026-03-01"},
                                                               {"end", "2026-03-15"}});
  Policy p;
  p.redact_sensitive_fields = true;
  const auto& rows = out[*list->record_collection];
  REQUIRE(!rows.empty());
  const auto shown = present(rows[0], p, list->sensitive_paths);
  CHECK(shown.value["memo"] == std::string(kRedactedMarker));
  CHECK(shown.redacted_paths == std::set<std::string>{"memo"});
}
