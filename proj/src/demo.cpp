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

#include <cstdio>
#include <mutex>

namespace openport::demo {

namespace {

constexpr const char* kActionsPath = "/api/agent/v1/actions";

const json kIdSchema = {{"type", "string"}, {"minLength", 1}, {"maxLength", 128}};

json object_schema(json properties, json required) {
  return json{{"type", "object"},
              {"properties", std::move(properties)},
              {"required", std::move(required)},
              {"additionalProperties", false}};
}

std::string str(const json& payload, const char* field) {
  auto it = payload.find(field);
  return it != payload.end() && it->is_string() ? it->get<std::string>() : std::string();
}

}  // namespace

json Ledger::to_json() const { return json{{"id", id}, {"tenantId", tenant_id}, {"name", name}}; }

json TransactionRecord::to_json() const {
  return json{{"id", id},         {"ledgerId", ledger_id}, {"date", format_date(date)},
              {"amountMinor", amount_minor}, {"memo", memo},          {"version", version}};
}

DemoAdapter::DemoAdapter(Date today) {
  const char* tenants[] = {"org1", "org2"};
  const char* suffixes[] = {"a", "b"};
  const char* names[] = {"Operating", "Payroll"};
  int ledger_index = 0;
  for (const char* tenant : tenants) {
    for (int l = 0; l < 2; ++l, ++ledger_index) {
      Ledger led{std::string("led_") + tenant + "_" + suffixes[l], tenant, std::string(tenant) + " " + names[l]};
      for (int i = 0; i < 10; ++i) {
        char id[64];
        std::snprintf(id, sizeof id, "txn_%s_%s_%02d", tenant, suffixes[l], i + 1);
        TransactionRecord t;
        t.id = id;
        t.ledger_id = led.id;
        t.date = Date{std::chrono::sys_days{today} - std::chrono::days{i * 12}};
        t.amount_minor = (i + 1) * 1250 + ledger_index * 100 + 7;
        t.memo = "Invoice " + std::to_string(1000 + ledger_index * 10 + i) + " for vendor " + tenant;
        txns_.emplace(t.id, t);
      }
      ledgers_.emplace(led.id, led);
    }
  }
}

std::optional<std::string> DemoAdapter::resolve_tenant(std::string_view resource_id) const {
  std::shared_lock lock(mu_);
  if (auto it = ledgers_.find(resource_id); it != ledgers_.end()) return it->second.tenant_id;
  if (auto it = txns_.find(resource_id); it != txns_.end()) return ledgers_.at(it->second.ledger_id).tenant_id;
  return std::nullopt;
}

std::vector<Ledger> DemoAdapter::list_ledgers(const std::string&, const std::string& tenant_id) const {
  std::shared_lock lock(mu_);
  std::vector<Ledger> out;
  for (const auto& [id, led] : ledgers_) {
    if (led.tenant_id == tenant_id) out.push_back(led);
  }
  return out;
}

std::vector<TransactionRecord> DemoAdapter::list_transactions(const std::string&, const std::string& ledger_id,
                                                              Date start, Date end) const {
  std::shared_lock lock(mu_);
  std::vector<TransactionRecord> out;
  for (const auto& [id, t] : txns_) {
    if (t.ledger_id == ledger_id && t.date >= start && t.date <= end) out.push_back(t);
  }
  return out;
}

std::optional<TransactionRecord> DemoAdapter::find_transaction(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = txns_.find(id);
  if (it == txns_.end()) return std::nullopt;
  return it->second;
}

std::size_t DemoAdapter::transaction_count() const {
  std::shared_lock lock(mu_);
  return txns_.size();
}

TransactionRecord DemoAdapter::create_transaction(const std::string&, const std::string& ledger_id, Date date,
                                                  std::int64_t amount_minor, std::string memo) {
  std::unique_lock lock(mu_);
  if (!ledgers_.count(ledger_id)) throw ToolError("ledger not found");
  char id[32];
  std::snprintf(id, sizeof id, "txn_new_%06llu", static_cast<unsigned long long>(next_txn_++));
  TransactionRecord t{id, ledger_id, date, amount_minor, std::move(memo), 1};
  txns_.emplace(t.id, t);
  mutations_.fetch_add(1);
  return t;
}

TransactionRecord DemoAdapter::update_transaction(const std::string&, std::string_view id,
                                                  std::optional<std::int64_t> amount_minor,
                                                  std::optional<std::string> memo) {
  std::unique_lock lock(mu_);
  auto it = txns_.find(id);
  if (it == txns_.end()) throw ToolError("transaction not found");
  if (amount_minor) it->second.amount_minor = *amount_minor;
  if (memo) it->second.memo = std::move(*memo);
  ++it->second.version;
  mutations_.fetch_add(1);
  return it->second;
}

TransactionRecord DemoAdapter::delete_transaction(const std::string&, std::string_view id) {
  std::unique_lock lock(mu_);
  auto it = txns_.find(id);
  if (it == txns_.end()) throw ToolError("transaction not found");
  TransactionRecord removed = std::move(it->second);
  txns_.erase(it);
  mutations_.fetch_add(1);
  return removed;
}

const std::set<std::string>& DemoAdapter::sensitive_paths() {
  static const std::set<std::string> paths{"memo"};
  return paths;
}

std::set<std::string> demo_scopes() { return {"ledger.read", "transaction.read", "transaction.write", "transaction.delete"}; }

void register_demo_tools(ToolRegistry& registry, DemoAdapter& adapter) {
  DemoAdapter* a = &adapter;
  // Resource ids for transaction-targeting payloads: the owning ledger when the
  // record exists, else the raw id, which no tenant owns.
  auto txn_resources = [a](const json& payload) {
    const std::string id = str(payload, "transactionId");
    if (auto t = a->find_transaction(id)) return std::vector<std::string>{t->ledger_id};
    return std::vector<std::string>{id};
  };

  {
    ToolDescriptor t;
    t.name = "ledger.list";
    t.description = "List ledgers in this workspace.";
    t.required_scopes = {"ledger.read"};
    t.read_only = true;
    t.http = {"GET", "/api/agent/v1/ledgers"};
    t.input_schema = object_schema(json::object(), json::array());
    t.output_schema = {{"type", "object"}, {"properties", {{"ledgers", {{"type", "array"}}}}}};
    t.execute_fn = [a](const ExecutionContext& ctx, const json&) {
      json out = json::array();
      for (const auto& l : a->list_ledgers(ctx.actor_user_id, ctx.tenant_id)) out.push_back(l.to_json());
      return json{{"ledgers", out}};
    };
    registry.add(std::move(t));
  }
  {
    ToolDescriptor t;
    t.name = "transaction.list";
    t.description = "List transactions of one ledger within a bounded date window.";
    t.required_scopes = {"transaction.read"};
    t.read_only = true;
    t.http = {"GET", "/api/agent/v1/transactions"};
    t.input_schema = object_schema({{"ledgerId", kIdSchema},
                                    {"start", {{"type", "string"}, {"format", "date"}}},
                                    {"end", {{"type", "string"}, {"format", "date"}}}},
                                   {"ledgerId"});
    t.output_schema = {{"type", "object"}, {"properties", {{"transactions", {{"type", "array"}}}}}};
    t.query_window = QueryWindowFields{};
    t.resources_fn = [](const json& payload) { return std::vector<std::string>{str(payload, "ledgerId")}; };
    t.record_collection = "transactions";
    t.sensitive_paths = DemoAdapter::sensitive_paths();
    t.execute_fn = [a](const ExecutionContext& ctx, const json& payload) {
      // The gateway fills absent bounds before execution.
      const Date today = date_of(ctx.now);
      const Date end = parse_date(str(payload, "end")).value_or(today);
      const Date start = parse_date(str(payload, "start")).value_or(end);
      json out = json::array();
      for (const auto& r : a->list_transactions(ctx.actor_user_id, str(payload, "ledgerId"), start, end)) {
        out.push_back(r.to_json());
      }
      return json{{"transactions", out}};
    };
    registry.add(std::move(t));
  }
  {
    ToolDescriptor t;
    t.name = "transaction.create";
    t.description = "Record a new transaction in a ledger.";
    t.required_scopes = {"transaction.write"};
    t.risk = Risk::Medium;
    t.http = {"POST", kActionsPath};
    t.input_schema = object_schema({{"ledgerId", kIdSchema},
                                    {"date", {{"type", "string"}, {"format", "date"}}},
                                    {"amountMinor", {{"type", "integer"}, {"minimum", -1e12}, {"maximum", 1e12}}},
                                    {"memo", {{"type", "string"}, {"maxLength", 512}}}},
                                   {"ledgerId", "date", "amountMinor"});
    t.output_schema = {{"type", "object"}, {"properties", {{"created", {{"type", "object"}}}}}};
    t.resources_fn = [](const json& payload) { return std::vector<std::string>{str(payload, "ledgerId")}; };
    t.impact_fn = [](const json& payload) {
      return json{{"ledgerId", str(payload, "ledgerId")},
                  {"date", str(payload, "date")},
                  {"amountMinor", payload.value("amountMinor", json())}};
    };
    t.execute_fn = [a](const ExecutionContext& ctx, const json& payload) {
      const auto date = parse_date(str(payload, "date"));
      if (!date) throw ToolError("invalid date");
      auto rec = a->create_transaction(ctx.actor_user_id, str(payload, "ledgerId"), *date,
                                       payload.at("amountMinor").get<std::int64_t>(), str(payload, "memo"));
      return json{{"created", rec.to_json()}};
    };
    registry.add(std::move(t));
  }
  {
    ToolDescriptor t;
    t.name = "transaction.update";
    t.description = "Change the amount or memo of a transaction.";
    t.required_scopes = {"transaction.write"};
    t.risk = Risk::Medium;
    t.http = {"POST", kActionsPath};
    t.input_schema = object_schema({{"transactionId", kIdSchema},
                                    {"amountMinor", {{"type", "integer"}, {"minimum", -1e12}, {"maximum", 1e12}}},
                                    {"memo", {{"type", "string"}, {"maxLength", 512}}}},
                                   {"transactionId"});
    t.output_schema = {{"type", "object"}, {"properties", {{"updated", {{"type", "object"}}}}}};
    t.resources_fn = txn_resources;
    t.impact_fn = [](const json& payload) {
      return json{{"transactionId", str(payload, "transactionId")},
                  {"amountMinor", payload.value("amountMinor", json())},
                  {"memoChanged", payload.contains("memo")}};
    };
    t.witness_fn = [a](const json& payload) {
      const auto rec = a->find_transaction(str(payload, "transactionId"));
      return json{{"id", str(payload, "transactionId")}, {"version", rec ? json(rec->version) : json()}};
    };
    t.execute_fn = [a](const ExecutionContext& ctx, const json& payload) {
      std::optional<std::int64_t> amount;
      std::optional<std::string> memo;
      if (payload.contains("amountMinor")) amount = payload.at("amountMinor").get<std::int64_t>();
      if (payload.contains("memo")) memo = payload.at("memo").get<std::string>();
      auto rec = a->update_transaction(ctx.actor_user_id, str(payload, "transactionId"), amount, memo);
      return json{{"updated", rec.to_json()}};
    };
    registry.add(std::move(t));
  }
  {
    ToolDescriptor t;
    t.name = "transaction.hard_delete";
    t.description = "Permanently delete a transaction.";
    t.required_scopes = {"transaction.delete"};
    t.risk = Risk::High;
    t.requires_confirmation = true;
    t.http = {"POST", kActionsPath};
    t.input_schema = object_schema({{"transactionId", kIdSchema}}, {"transactionId"});
    t.output_schema = {{"type", "object"}, {"properties", {{"deleted", {{"type", "object"}}}}}};
    t.resources_fn = txn_resources;
    t.impact_fn = [a](const json& payload) {
      const auto rec = a->find_transaction(str(payload, "transactionId"));
      return json{{"transactionId", str(payload, "transactionId")},
                  {"amount", rec ? json(rec->amount_minor) : json()},
                  {"date", rec ? json(format_date(rec->date)) : json()}};
    };
    t.witness_fn = [a](const json& payload) {
      const auto rec = a->find_transaction(str(payload, "transactionId"));
      return json{{"id", str(payload, "transactionId")}, {"version", rec ? json(rec->version) : json()}};
    };
    t.execute_fn = [a](const ExecutionContext& ctx, const json& payload) {
      auto rec = a->delete_transaction(ctx.actor_user_id, str(payload, "transactionId"));
      return json{{"deleted", {{"id", rec.id}, {"ledgerId", rec.ledger_id}, {"date", format_date(rec.date)},
                               {"amountMinor", rec.amount_minor}}}};
    };
    registry.add(std::move(t));
  }
}

}  // namespace openport::demo
