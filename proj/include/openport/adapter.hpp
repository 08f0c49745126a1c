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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "openport/clock.hpp"

namespace openport {

/// The governance layer's only view of the domain: server-side ownership
/// resolution and a side-effect counter.
class DomainAdapter {
 public:
  virtual ~DomainAdapter() = default;

  /// Owning tenant of any resource id the adapter knows, or nullopt.
  virtual std::optional<std::string> resolve_tenant(std::string_view resource_id) const = 0;

  /// Total number of domain mutations performed so far.
  virtual std::uint64_t mutation_count() const = 0;
};

/// Thrown by tool executors for failures whose message is safe to show clients.
class ToolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subject and server-resolved boundary handed to tool executors. Never built
/// from client input.
struct ExecutionContext {
  std::string actor_user_id;
  std::string tenant_id;
  Timestamp now{};
};

}  // namespace openport
