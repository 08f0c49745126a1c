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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "json.hpp"

namespace openport {

using json = nlohmann::json;

/// Recommended client reaction attached to every reason code.
enum class RetryClass {
  Stop,
  RefreshDiscovery,
  Operator,
  Backoff,
  SuccessEquivalent,
  RePreflight,
};

std::string_view to_string(RetryClass rc);

struct ReasonCode {
  std::string_view id;
  int http_status;
  RetryClass retry;
};

namespace codes {
inline constexpr std::string_view kOk = "agent.ok";
inline constexpr std::string_view kTokenInvalid = "agent.token_invalid";
inline constexpr std::string_view kTokenExpired = "agent.token_expired";
inline constexpr std::string_view kScopeDenied = "agent.scope_denied";
inline constexpr std::string_view kPolicyDenied = "agent.policy_denied";
inline constexpr std::string_view kForbidden = "agent.forbidden";
inline constexpr std::string_view kActionUnknown = "agent.action_unknown";
inline constexpr std::string_view kActionInvalid = "agent.action_invalid";
inline constexpr std::string_view kPreflightRequired = "agent.preflight_required";
inline constexpr std::string_view kPreflightMismatch = "agent.preflight_mismatch";
inline constexpr std::string_view kPreflightNotFound = "agent.preflight_not_found";
inline constexpr std::string_view kPreconditionFailed = "agent.precondition_failed";
inline constexpr std::string_view kIdempotencyRequired = "agent.idempotency_required";
inline constexpr std::string_view kIdempotencyReplay = "agent.idempotency_replay";
inline constexpr std::string_view kAutoExecuteDisabled = "agent.auto_execute_disabled";
inline constexpr std::string_view kAutoExecuteExpired = "agent.auto_execute_expired";
inline constexpr std::string_view kAutoExecuteDenied = "agent.auto_execute_denied";
inline constexpr std::string_view kDraftNotFound = "agent.draft_not_found";
inline constexpr std::string_view kDraftAlreadyFinal = "agent.draft_already_final";
inline constexpr std::string_view kStepUpRequired = "agent.step_up_required";
inline constexpr std::string_view kStepUpInvalid = "agent.step_up_invalid";
inline constexpr std::string_view kRateLimited = "agent.rate_limited";
}  // namespace codes

/// The full registry: the success code followed by every `agent.*` denial code.
std::span<const ReasonCode> reason_codes();

/// Looks up a registered code. Throws std::out_of_range for unknown identifiers.
const ReasonCode& reason(std::string_view id);
bool is_registered(std::string_view id);

/// Ordered authorization predicates; the numeric value is the 1-based evaluation index.
enum class Predicate { Authn = 1, Net, Rate, Scope, Policy, Boundary };

std::string_view to_string(Predicate p);

/// Maps the first failing predicate to its stable code. Authentication failures
/// distinguish expiry from every other credential problem.
const ReasonCode& code_for_first_failure(Predicate p, bool credential_expired = false);

/// A denial travelling as a value: a registered code plus a client-safe message.
struct Denial {
  std::string code;
  std::string message;
  std::optional<json> details;
  int http_status = 0;  // 0 means "use the code's registered status"

  int status() const;
};

Denial deny(std::string_view code, std::string message, std::optional<json> details = std::nullopt);

/// Minimal value-or-denial carrier for operations whose failures are protocol outcomes.
template <class T>
class Result {
 public:
  Result(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(Denial d) : state_(std::move(d)) {}     // NOLINT(google-explicit-constructor)

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  T& value() { return std::get<T>(state_); }
  const T& value() const { return std::get<T>(state_); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

  const Denial& denial() const { return std::get<Denial>(state_); }

 private:
  std::variant<T, Denial> state_;
};

struct Unit {};
using Status = Result<Unit>;
inline Status ok_status() { return Unit{}; }

inline constexpr std::size_t kMaxDetailsBytes = 4096;

/// The response body shared by every endpoint.
struct Envelope {
  bool ok = false;
  std::string code;
  json data;                    // success only
  std::string message;          // error only
  std::optional<json> details;  // error only

  json to_json() const;
  std::string dump() const;

  /// Strict parse: success bodies must be exactly {ok, code, data}; error bodies
  /// {ok, code, message} plus optional details. Returns nullopt on any violation.
  static std::optional<Envelope> parse(std::string_view body);
  static std::optional<Envelope> from_json(const json& j);
};

Envelope wrap_success(std::string_view code, json data);
Envelope wrap_success(json data);
Envelope wrap_error(std::string_view code, std::string message, std::optional<json> details = std::nullopt);
Envelope wrap_error(const Denial& d);

/// Caps a details value at kMaxDetailsBytes serialized, replacing oversize values
/// with a truncation marker.
json bound_details(json details);

}  // namespace openport
