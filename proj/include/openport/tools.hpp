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

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "openport/adapter.hpp"
#include "openport/credentials.hpp"
#include "openport/envelope.hpp"

namespace openport {

enum class Risk { Low, Medium, High };

std::string_view to_string(Risk r);

struct HttpHint {
  std::string method;
  std::string path;
};

// Payload fields carrying a bounded date range.
struct QueryWindowFields {
  std::string start = "start";
  std::string end = "end";
};

struct ToolDescriptor {
  std::string name;
  std::string description;
  std::set<std::string> required_scopes;
  Risk risk = Risk::Low;
  bool requires_confirmation = false;
  HttpHint http;
  json input_schema = json::object();   // describes the payload
  json output_schema = json::object();
  bool read_only = false;

  std::function<json(const json& payload)> impact_fn;
  std::function<json(const json& payload)> witness_fn;
  std::function<json(const ExecutionContext& ctx, const json& payload)> execute_fn;

  // Resource ids a payload touches; feeds allowlist and tenant-boundary checks.
  std::function<std::vector<std::string>(const json& payload)> resources_fn;
  std::optional<QueryWindowFields> query_window;

  // Result presentation: redaction applies to each element of this result
  // member when set, else to the whole result.
  std::optional<std::string> record_collection;
  std::set<std::string> sensitive_paths;

  /// Agent-visible form: governance metadata and schemas, never the bindings.
  json to_manifest_json() const;
};

/// Tool-level exposure constraint beyond scopes: hidden when disabled for the
/// app, or when the tool is resource-scoped and the app's resource allowlist is
/// present but empty.
bool policy_allows(const IntegrationApp& app, const ToolDescriptor& tool);

class ToolRegistry {
 public:
  /// Throws std::invalid_argument on duplicate names, high-risk tools without an
  /// impact function, or tools without an executor.
  void add(ToolDescriptor tool);

  const ToolDescriptor* find(std::string_view name) const;
  bool visible(const IntegrationApp& app, const ToolDescriptor& tool) const;

  /// Registration order.
  std::vector<const ToolDescriptor*> visible_tools(const IntegrationApp& app) const;
  std::vector<const ToolDescriptor*> all() const;

  json build_manifest(const IntegrationApp& app) const;

  /// Nonexistent and unauthorized names are indistinguishable: agent.action_unknown.
  Result<const ToolDescriptor*> resolve(std::string_view name, const IntegrationApp& app) const;

  std::set<std::string> declared_scopes() const;

 private:
  std::vector<ToolDescriptor> tools_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace openport
