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

#include "openport/tools.hpp"

#include <algorithm>
#include <stdexcept>

namespace openport {

std::string_view to_string(Risk r) {
  switch (r) {
    case Risk::Low: return "low";
    case Risk::Medium: return "medium";
    case Risk::High: return "high";
  }
  return "low";
}

json ToolDescriptor::to_manifest_json() const {
  return json{{"name", name},
              {"description", description},
              {"requiredScopes", required_scopes},
              {"risk", to_string(risk)},
              {"requiresConfirmation", requires_confirmation},
              {"http", {{"method", http.method}, {"path", http.path}}},
              {"inputSchema", input_schema},
              {"outputSchema", output_schema}};
}

bool policy_allows(const IntegrationApp& app, const ToolDescriptor& tool) {
  if (app.policy.disabled_tools.count(tool.name)) return false;
  if (tool.resources_fn && app.policy.allowed_resource_ids && app.policy.allowed_resource_ids->empty()) return false;
  return true;
}

void ToolRegistry::add(ToolDescriptor tool) {
  if (tool.name.empty()) throw std::invalid_argument("tool name is empty");
  if (index_.count(tool.name)) throw std::invalid_argument("duplicate tool: " + tool.name);
  if (tool.risk == Risk::High && !tool.impact_fn) {
    throw std::invalid_argument("high-risk tool without impact function: " + tool.name);
  }
  if (!tool.execute_fn) throw std::invalid_argument("tool without executor: " + tool.name);
  index_.emplace(tool.name, tools_.size());
  tools_.push_back(std::move(tool));
}

const ToolDescriptor* ToolRegistry::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &tools_[it->second];
}

bool ToolRegistry::visible(const IntegrationApp& app, const ToolDescriptor& tool) const {
  const bool scoped = std::includes(app.scopes.begin(), app.scopes.end(), tool.required_scopes.begin(),
                                    tool.required_scopes.end());
  return scoped && policy_allows(app, tool);
}

std::vector<const ToolDescriptor*> ToolRegistry::visible_tools(const IntegrationApp& app) const {
  std::vector<const ToolDescriptor*> out;
  for (const auto& t : tools_) {
    if (visible(app, t)) out.push_back(&t);
  }
  return out;
}

std::vector<const ToolDescriptor*> ToolRegistry::all() const {
  std::vector<const ToolDescriptor*> out;
  for (const auto& t : tools_) out.push_back(&t);
  return out;
}

json ToolRegistry::build_manifest(const IntegrationApp& app) const {
  json tools = json::array();
  for (const auto* t : visible_tools(app)) tools.push_back(t->to_manifest_json());
  return json{{"integration", {{"appId", app.id}, {"name", app.name}, {"tenantId", app.tenant_id}}},
              {"tools", std::move(tools)}};
}

Result<const ToolDescriptor*> ToolRegistry::resolve(std::string_view name, const IntegrationApp& app) const {
  const auto* t = find(name);
  if (!t || !visible(app, *t)) return deny(codes::kActionUnknown, "unknown action");
  return t;
}

std::set<std::string> ToolRegistry::declared_scopes() const {
  std::set<std::string> out;
  for (const auto& t : tools_) out.insert(t.required_scopes.begin(), t.required_scopes.end());
  return out;
}

}  // namespace openport
