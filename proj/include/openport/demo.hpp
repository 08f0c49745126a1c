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

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "openport/adapter.hpp"
#include "openport/clock.hpp"
#include "openport/tools.hpp"

namespace openport::demo {

struct Ledger {
  std::string id;
  std::string tenant_id;
  std::string name;

  json to_json() const;
};

struct TransactionRecord {
  std::string id;
  std::string ledger_id;
  Date date{};
  std::int64_t amount_minor = 0;  // cents
  std::string memo;
  std::int64_t version = 1;

  json to_json() const;
};

/// Synthetic multi-tenant bookkeeping domain. Seed: tenants org1 and org2, two
/// ledgers each, ten transactions per ledger dated 0..108 days before `today`.
class DemoAdapter final : public DomainAdapter {
 public:
  explicit DemoAdapter(Date today);

  std::optional<std::string> resolve_tenant(std::string_view resource_id) const override;
  std::uint64_t mutation_count() const override { return mutations_.load(); }

  std::vector<Ledger> list_ledgers(const std::string& actor_user_id, const std::string& tenant_id) const;
  std::vector<TransactionRecord> list_transactions(const std::string& actor_user_id, const std::string& ledger_id,
                                                   Date start, Date end) const;
  std::optional<TransactionRecord> find_transaction(std::string_view id) const;
  std::size_t transaction_count() const;

  TransactionRecord create_transaction(const std::string& actor_user_id, const std::string& ledger_id, Date date,
                                       std::int64_t amount_minor, std::string memo);
  /// Throws ToolError when the record does not exist.
  TransactionRecord update_transaction(const std::string& actor_user_id, std::string_view id,
                                       std::optional<std::int64_t> amount_minor, std::optional<std::string> memo);
  TransactionRecord delete_transaction(const std::string& actor_user_id, std::string_view id);

  /// Paths in transaction records treated as sensitive.
  static const std::set<std::string>& sensitive_paths();

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, Ledger, std::less<>> ledgers_;
  std::map<std::string, TransactionRecord, std::less<>> txns_;
  std::atomic<std::uint64_t> mutations_{0};
  std::uint64_t next_txn_ = 1;
};

/// ledger.list, transaction.list, transaction.create, transaction.update and
/// transaction.hard_delete bound to `adapter`, which must outlive the registry.
void register_demo_tools(ToolRegistry& registry, DemoAdapter& adapter);

/// Scope labels used by the demo tool set.
std::set<std::string> demo_scopes();

}  // namespace openport::demo
